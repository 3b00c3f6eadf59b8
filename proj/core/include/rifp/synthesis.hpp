#pragma once

#include <optional>
#include <vector>

#include "rifp/proof.hpp"

namespace rifp {

// Proof search by normalization: starting from the goal cirquent, bottom-up
// rewrites reduce it to a classical cirquent in three stages. If that residue
// is a tautology the trace reverses into a proof; otherwise its first
// falsifying row, padded with `false` for atoms the rewrites dropped, is a
// counterexample to the goal.
//
//   step1  lifts every oconnective above all strictly-higher-rank ancestors
//          (bottom-up Rule II), rank by rank.
//   step2  prunes nested same-cluster pairs (bottom-up Rule I).
//   step3  per rank: collapses every non-singleton cluster to one occurrence
//          (bottom-up Rules II and III, steered by a pair of pins), then
//          splits clusters shared between the two arguments of a node
//          (bottom-up Rule IV).
//
// Termination is measured: step1 by the per-rank level distribution, step3's
// collapse loop by a lexicographic state tuple. Both are asserted to strictly
// decrease at every prescribed event; a violation or a blocked prescribed
// rewrite throws InternalError rather than being masked.

// A position a rewrite loop keeps aimed at one oconnective while the tree
// changes around it; re-aimed by path recomputation after each rewrite.
struct Pin {
  Path target;
  enum class Label { unused, used, none } label = Label::none;
};

// counts[m] = number of rank-i oconnectives at level m; trailing zeros
// trimmed, so the all-zero distribution is empty.
struct IDistribution {
  std::vector<long long> counts;
  friend bool operator==(const IDistribution&, const IDistribution&) = default;
};

IDistribution i_distribution_of(const Cirquent& c, int rank);

// The measure shrinks when mass moves toward the root: `after` is strictly
// below `before` iff at the first level where they differ, `after` is larger.
bool i_distribution_decreased(const IDistribution& before, const IDistribution& after);

// Collapse-loop state for cluster k of rank i:
//   x = |cluster k|, y = x - m,
//   z = L(a) + L(b) when m == 2, else L(a) - 1,
//   t = total size of the other non-singleton rank-i clusters.
// Compared lexicographically.
struct StateTuple {
  long long x = 0, y = 0, z = 0, t = 0;
  friend auto operator<=>(const StateTuple&, const StateTuple&) = default;
};

// m == 2 takes both pins (distinct oconnective positions in cluster k);
// m == 1 reads only `a`. Invalid pins throw DomainError.
StateTuple state_of(const Cirquent& c, int cluster, int rank, int m,
                    const Pin& a, const Pin& b);

// No oconnective has an ancestor of strictly greater rank.
bool has_property1(const Cirquent& c);
// No oconnective has a descendant in its own cluster.
bool has_property2(const Cirquent& c);

enum class SynthPhase { step1, step2, step3_collapse, step3_split };

struct SynthEvent {
  enum class Kind { apply, pick } kind = Kind::apply;
  SynthPhase phase{};
  int loop_rank = 0;  // the i of the enclosing per-rank loop (0 in step2)
  int cluster = 0;    // collapse target cluster (step3_collapse only)

  std::optional<RuleApplication> app;  // present on apply events
  Cirquent before, after;              // equal on pick events

  // Collapse bookkeeping as of after the event.
  int m = 0;
  Path pin_a, pin_b;
};

struct StepTrace {
  Cirquent result;
  std::vector<SynthEvent> events;
};

StepTrace step1(const Cirquent& c);
StepTrace step2(const Cirquent& c);  // requires step1's postcondition
StepTrace step3(const Cirquent& c);  // requires step1's and step2's

struct SynthesisOutcome {
  std::optional<Proof> proof;
  std::optional<Interpretation> counterexample;
  std::vector<SynthEvent> events;  // bottom-up rewrite trace, in order
};

// Decision procedure: exactly one of proof/counterexample is set.
SynthesisOutcome prove(const Cirquent& c, const EvalCaps& caps = {});

}  // namespace rifp
