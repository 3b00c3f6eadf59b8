// rifp: parse, evaluate, decide, prove, and check cirquents from the shell.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rifp/parse.hpp"
#include "rifp/proof.hpp"
#include "rifp/synthesis.hpp"

namespace {

struct Options {
  std::string input;        // inline cirquent text, or proof path for `check`
  std::string input_file;   // -f
  std::string model;        // -m
  std::string output_file;  // -o
  rifp::EvalCaps caps;
  bool porcelain = false;
  bool trace = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string cirquent_text(const Options& opt) {
  if (!opt.input_file.empty()) return read_file(opt.input_file);
  return opt.input;
}

rifp::Cirquent load_cirquent(const Options& opt) {
  rifp::Cirquent c = rifp::parse_cirquent(cirquent_text(opt));
  auto report = rifp::validate(c);
  if (!report.ok()) {
    std::string msg = "ill-formed cirquent";
    for (const auto& v : report.violations) msg += "\n  " + v.detail;
    throw rifp::DomainError(msg);
  }
  return c;
}

const char* phase_name(rifp::SynthPhase phase) {
  switch (phase) {
    case rifp::SynthPhase::step1: return "step1";
    case rifp::SynthPhase::step2: return "step2";
    case rifp::SynthPhase::step3_collapse: return "collapse";
    case rifp::SynthPhase::step3_split: return "split";
  }
  return "?";
}

void print_trace(const std::vector<rifp::SynthEvent>& events) {
  for (const auto& e : events) {
    std::cerr << phase_name(e.phase);
    if (e.kind == rifp::SynthEvent::Kind::pick) {
      std::cerr << " pick cluster=" << e.cluster << " a=" << e.pin_a.str()
                << " b=" << e.pin_b.str();
    } else {
      std::cerr << " apply " << rifp::rule_tag_name(e.app->rule)
                << " at=" << e.app->redex.str();
    }
    switch (e.phase) {
      case rifp::SynthPhase::step1: {
        auto dist = rifp::i_distribution_of(e.after, e.loop_rank);
        std::cerr << " rank=" << e.loop_rank << " dist=";
        for (std::size_t t = 0; t < dist.counts.size(); ++t)
          std::cerr << (t ? "," : "") << dist.counts[t];
        break;
      }
      case rifp::SynthPhase::step3_collapse: {
        rifp::Pin a{e.pin_a, rifp::Pin::Label::none};
        rifp::Pin b{e.pin_b, rifp::Pin::Label::none};
        auto st = rifp::state_of(e.after, e.cluster, e.loop_rank, e.m, a, b);
        std::cerr << " rank=" << e.loop_rank << " state=(" << st.x << "," << st.y
                  << "," << st.z << "," << st.t << ")";
        break;
      }
      default:
        std::cerr << " oconnectives=" << rifp::oconnective_count(e.after);
        break;
    }
    std::cerr << '\n';
  }
}

int run_parse(const Options& opt) {
  rifp::Cirquent c = load_cirquent(opt);
  std::cout << rifp::render(c) << '\n';
  return 0;
}

int run_eval(const Options& opt) {
  rifp::Cirquent c = load_cirquent(opt);
  rifp::Interpretation itp = rifp::Interpretation::parse(opt.model);
  std::cout << (rifp::true_under(c, itp, opt.caps) ? "true" : "false") << '\n';
  return 0;
}

int run_valid(const Options& opt) {
  rifp::Cirquent c = load_cirquent(opt);
  rifp::ValidityVerdict verdict = rifp::valid(c, opt.caps);
  if (verdict.is_valid()) {
    if (!opt.porcelain) std::cout << "valid\n";
    return 0;
  }
  std::cout << verdict.counterexample->str() << '\n';
  return 1;
}

int run_prove(const Options& opt) {
  rifp::Cirquent c = load_cirquent(opt);
  rifp::SynthesisOutcome outcome = rifp::prove(c, opt.caps);
  if (opt.trace) print_trace(outcome.events);
  if (outcome.counterexample) {
    std::cout << outcome.counterexample->str() << '\n';
    return 1;
  }
  std::string text = rifp::render_proof(*outcome.proof);
  if (opt.output_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.output_file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + opt.output_file + "'");
    out << text;
  }
  return 0;
}

int run_check(const Options& opt) {
  std::string path = !opt.input_file.empty() ? opt.input_file : opt.input;
  rifp::Proof proof = rifp::parse_proof(read_file(path));
  rifp::CheckVerdict verdict = rifp::check_proof(proof, opt.caps);
  if (verdict.accepted) {
    if (!opt.porcelain) std::cout << "accepted\n";
    return 0;
  }
  std::cout << "rejected at step " << verdict.step << ": " << verdict.reason << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cirquent calculus toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool wants_cirquent) {
    if (wants_cirquent)
      sub->add_option("cirquent", opt.input, "cirquent text");
    sub->add_option("-f,--file", opt.input_file, "read the cirquent from a file");
    sub->add_option("--max-atoms", opt.caps.max_atoms, "distinct-atom cap");
    sub->add_option("--max-clusters", opt.caps.max_clusters, "cluster cap");
    sub->add_flag("--porcelain", opt.porcelain, "suppress decorative output");
    sub->add_flag("--trace", opt.trace, "log rewrite events to stderr");
  };

  CLI::App* cmd_parse = app.add_subcommand("parse", "print the canonical form");
  add_common(cmd_parse, true);
  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate under an interpretation");
  add_common(cmd_eval, true);
  cmd_eval->add_option("-m,--model", opt.model, "interpretation, e.g. \"p=1,q=0\"")
      ->required();
  CLI::App* cmd_valid = app.add_subcommand("valid", "decide validity by brute force");
  add_common(cmd_valid, true);
  CLI::App* cmd_prove = app.add_subcommand("prove", "synthesize a proof or counterexample");
  add_common(cmd_prove, true);
  cmd_prove->add_option("-o,--output", opt.output_file, "write the proof here");
  CLI::App* cmd_check = app.add_subcommand("check", "verify a proof file");
  cmd_check->add_option("proof", opt.input, "proof file path");
  cmd_check->add_option("-f,--file", opt.input_file, "read the proof from a file");
  cmd_check->add_option("--max-atoms", opt.caps.max_atoms, "distinct-atom cap");
  cmd_check->add_option("--max-clusters", opt.caps.max_clusters, "cluster cap");
  cmd_check->add_flag("--porcelain", opt.porcelain, "suppress decorative output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;  // --help exits 0
  }

  try {
    if (cmd_parse->parsed()) {
      if (opt.input.empty() && opt.input_file.empty())
        throw rifp::ParseError("no cirquent given", 0);
      return run_parse(opt);
    }
    if (cmd_eval->parsed()) return run_eval(opt);
    if (cmd_valid->parsed()) return run_valid(opt);
    if (cmd_prove->parsed()) return run_prove(opt);
    if (cmd_check->parsed()) {
      if (opt.input.empty() && opt.input_file.empty())
        throw rifp::ParseError("no proof file given", 0);
      return run_check(opt);
    }
  } catch (const rifp::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const rifp::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const rifp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
