#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rifp/cirquent.hpp"

namespace rifp {

// Boolean assignment to atoms. Text form: "p=1,q=0" (atoms sorted by name in
// the canonical rendering).
struct Interpretation {
  std::map<std::string, bool> assignment;

  static Interpretation parse(std::string_view text);  // throws ParseError
  std::string str() const;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

// Left/right chooser for the clusters of one rank. Total: cluster IDs outside
// `choices` resolve to `fallback`. Evaluation must not depend on the fallback
// for clusters that actually occur (they are always set explicitly).
struct Metaselection {
  std::map<int, Side> choices;
  Side fallback = Side::left;

  Side at(int cluster) const;
};

// One metaselection per rank label, keyed ascending.
struct MetaselectionVector {
  std::map<int, Metaselection> per_rank;

  // Chooser lookup for an oconnective's index; throws DomainError when the
  // rank has no entry.
  Side select(Index index) const;
};

struct EvalCaps {
  int max_atoms = 16;
  int max_clusters = 20;
};

// The side the vector picks at the oconnective addressed by p.
Side resolvent(const Cirquent& c, const Path& p, const MetaselectionVector& f);

// Follow resolvents from the root down to a literal and read it off under
// `star`. Interpretations and vectors must cover the atoms/ranks they meet.
bool metatrue(const Cirquent& c, const Interpretation& star, const MetaselectionVector& f);

// Truth under one interpretation: alternating quantification over the
// metaselections of each rank, ascending; conjunctive ranks quantify
// universally, disjunctive ranks existentially.
bool true_under(const Cirquent& c, const Interpretation& star, const EvalCaps& caps = {});

struct ValidityVerdict {
  std::optional<Interpretation> counterexample;  // empty <=> valid
  bool is_valid() const { return !counterexample.has_value(); }
};

// Brute-force validity over all interpretations of the occurring atoms.
// The counterexample, when present, is the lexicographically first falsifying
// interpretation (atoms sorted by name, false before true).
ValidityVerdict valid(const Cirquent& c, const EvalCaps& caps = {});

// Index-blind evaluation of a cirquent read as a plain NNF formula.
bool classical_eval(const Cirquent& c, const Interpretation& star);

// Truth-table check of a classical cirquent. Throws DomainError when the
// input is not classical.
bool classical_tautology(const Cirquent& c, const EvalCaps& caps = {});

}  // namespace rifp
