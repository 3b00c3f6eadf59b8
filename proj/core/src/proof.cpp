#include "rifp/proof.hpp"

#include <sstream>

#include "rifp/parse.hpp"

namespace rifp {

bool is_axiom(const Cirquent& c, const EvalCaps& caps) {
  return is_classical(c) && classical_tautology(c, caps);
}

CheckVerdict check_proof(const Proof& proof, const EvalCaps& caps) {
  CheckVerdict v;
  if (proof.steps.empty()) {
    v.step = 1;
    v.reason = "empty proof";
    return v;
  }
  for (std::size_t t = 0; t < proof.steps.size(); ++t) {
    const ProofStep& step = proof.steps[t];
    v.step = static_cast<int>(t) + 1;
    auto report = validate(step.cirquent);
    if (!report.ok()) {
      v.reason = "ill-formed cirquent: " + report.violations.front().detail;
      return v;
    }
    if (t == 0) {
      if (step.rule) {
        v.reason = "step 1 must be an axiom line";
        return v;
      }
      if (!is_axiom(step.cirquent, caps)) {
        v.reason = "not an axiom";
        return v;
      }
      continue;
    }
    if (!step.rule) {
      v.reason = "only step 1 may be an axiom line";
      return v;
    }
    std::string why;
    if (!check_step(proof.steps[t - 1].cirquent, step.cirquent, *step.rule, &why)) {
      v.reason = why;
      return v;
    }
  }
  v.accepted = true;
  v.step = 0;
  v.reason.clear();
  return v;
}

namespace {

std::string_view trimmed(std::string_view line) {
  std::size_t b = 0, e = line.size();
  while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
  while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
  return line.substr(b, e - b);
}

}  // namespace

Proof parse_proof(std::string_view text) {
  Proof proof;
  bool seen_header = false;
  int expected = 1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    std::string_view line = trimmed(raw);
    if (line.empty() || line[0] == '#') {
      if (pos > text.size()) break;
      continue;
    }
    if (!seen_header) {
      if (line != "rifp-proof v1")
        throw ParseError("expected the header 'rifp-proof v1'", line_no);
      seen_header = true;
      if (pos > text.size()) break;
      continue;
    }
    // <t>: <cirquent> | <justification>
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw ParseError("expected a step number", line_no);
    int number = 0;
    for (char c : line.substr(0, colon)) {
      if (c < '0' || c > '9') throw ParseError("expected a step number", line_no);
      number = number * 10 + (c - '0');
      if (number > 1'000'000) throw ParseError("step number out of range", line_no);
    }
    if (number != expected)
      throw ParseError("expected step " + std::to_string(expected) + ", found " +
                           std::to_string(number),
                       line_no);
    ++expected;
    std::string_view rest = trimmed(line.substr(colon + 1));
    std::size_t sep = rest.find(" | ");
    if (sep == std::string_view::npos)
      throw ParseError("expected ' | ' between cirquent and justification", line_no);
    std::string_view cirquent_text = rest.substr(0, sep);
    std::string_view just = trimmed(rest.substr(sep + 3));
    try {
      ProofStep step{parse_cirquent(cirquent_text), std::nullopt};
      if (just != "axiom") step.rule = RuleApplication::parse(just);
      proof.steps.push_back(std::move(step));
    } catch (const ParseError& e) {
      // Re-key token offsets to the 1-based proof line.
      throw ParseError(std::string(e.what()), line_no);
    }
    if (pos > text.size()) break;
  }
  if (!seen_header) throw ParseError("expected the header 'rifp-proof v1'", line_no);
  if (proof.steps.empty()) throw ParseError("the proof has no steps", line_no);
  return proof;
}

std::string render_proof(const Proof& proof) {
  std::ostringstream out;
  out << "rifp-proof v1\n";
  for (std::size_t t = 0; t < proof.steps.size(); ++t) {
    const ProofStep& step = proof.steps[t];
    out << (t + 1) << ": " << render(step.cirquent) << " | "
        << (step.rule ? step.rule->str() : "axiom") << '\n';
  }
  return out.str();
}

}  // namespace rifp
