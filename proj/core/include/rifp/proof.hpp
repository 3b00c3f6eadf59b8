#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rifp/rules.hpp"
#include "rifp/semantics.hpp"

namespace rifp {

// A proof is a sequence of cirquents: the first an axiom (a classical
// tautology), each later one obtained from its predecessor by a rule.
//
// File format ("rifp-proof v1"):
//   rifp-proof v1
//   1: <cirquent> | axiom
//   2: <cirquent> | rule=<tag> at=<path> ...
// Step numbers are consecutive from 1; '#' starts a comment line.

struct ProofStep {
  Cirquent cirquent;
  std::optional<RuleApplication> rule;  // nullopt = axiom line

  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

struct Proof {
  std::vector<ProofStep> steps;

  friend bool operator==(const Proof&, const Proof&) = default;
};

// Classical and a tautology.
bool is_axiom(const Cirquent& c, const EvalCaps& caps = {});

struct CheckVerdict {
  bool accepted = false;
  int step = 0;  // 1-based earliest failing step when rejected
  std::string reason;
};

// Full replay: step 1 must be an axiom line, every later step must follow
// from its predecessor by its recorded application. Failures are verdict
// data, not exceptions.
CheckVerdict check_proof(const Proof& pf, const EvalCaps& caps = {});

Proof parse_proof(std::string_view text);  // throws ParseError (1-based line)
std::string render_proof(const Proof& pf);

}  // namespace rifp
