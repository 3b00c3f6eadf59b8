#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rifp/cirquent.hpp"

namespace rifp {

// The four rewrite rules, read forward as premise -> conclusion:
//
//   I-left    Phi{ Psi{A} o_k C }            ->  Phi{ Psi{A o_k B} o_k C }
//   I-right   Phi{ C o_k Psi{A} }            ->  Phi{ C o_k Psi{B o_k A} }
//   II-left   Phi{ (A *_m C1) o_k (B *_n C2) } -> Phi{ (A o_k B) *_l C }
//   II-right  Phi{ (C1 *_m A) o_k (C2 *_n B) } -> Phi{ C *_l (A o_k B) }
//   III       Phi{ (A *_m C) o_k (B *_n D) }   -> Phi{ (A o_k B) *_l (C o_k D) }
//   IV        Phi{ A[l] o_k B[l/r] }           -> Phi{ A[l] o_k B[l] }
//
// where o carries index k^i, * carries rank j, and the usual side conditions
// apply (see forward_apply/backward_apply). Bottom-up use (conclusion ->
// premise) is what the synthesis procedure runs.

enum class RuleTag { I_left, I_right, II_left, II_right, III, IV };

std::string_view rule_tag_name(RuleTag t);  // "I-left", "I-right", "II-left", ...
std::optional<RuleTag> rule_tag_from(std::string_view name);

// Rule II: a singleton cluster `shared` of the conclusion's side cirquent C is
// represented by `left_copy` inside C1 and `right_copy` inside C2.
struct SplitEntry {
  int shared = 0;
  int left_copy = 0;
  int right_copy = 0;
  friend bool operator==(const SplitEntry&, const SplitEntry&) = default;
};

// One rule application. `redex` addresses the redex root, which occupies the
// same position in premise and conclusion for every rule.
//
// Text form, fields as applicable:
//   rule=<tag> at=<path> [inner=<path>] [k=..,i=..,l=..,j=..,m=..,n=..]
//   [k=..,i=..,l=..,j=..,r=..] [split=s->s1/s2;...] [ins=<cirquent>]
// Paths are '/'-joined L/R segments, "." for the root. `ins` is always the
// final field and runs to the end of the line.
struct RuleApplication {
  RuleTag rule{};
  Path redex;

  // Rule I. `inner` runs from the key oconnective's rewritten argument (left
  // argument for I-left, right for I-right) down to the inserted-pair node in
  // the conclusion, equivalently to the kept subcirquent in the premise.
  // `inserted` is the subcirquent the forward direction introduces; the
  // backward direction deletes it and records it here.
  Path inner;
  std::optional<Cirquent> inserted;

  // Rules II/III: key k^i, conclusion-side partner l^j, premise partners
  // m^j and n^j. Rule IV: key k^i, shared cluster l^j, premise stand-in r^j.
  int k = 0, i = 0;
  int l = 0, j = 0;
  int m = 0, n = 0;
  int r = 0;
  std::vector<SplitEntry> split;  // Rule II only; ascending by `shared`

  std::string str() const;
  static RuleApplication parse(std::string_view text);  // throws ParseError

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

// Premise -> conclusion. Throws RuleError naming the failed schema element or
// side condition; the conclusion is checked for well-formedness.
Cirquent forward_apply(const Cirquent& premise, const RuleApplication& app);

// Conclusion -> premise. Fresh IDs supplied by the application (m, n, split
// copies, r) must not occur in the conclusion.
Cirquent backward_apply(const Cirquent& conclusion, const RuleApplication& app);

// True when forward_apply(premise, app) yields exactly `conclusion`. Never
// throws; a failure reason is written to *why when provided.
bool check_step(const Cirquent& premise, const Cirquent& conclusion,
                const RuleApplication& app, std::string* why = nullptr);

// Deterministic bottom-up planners. Fresh cluster IDs are allocated as the
// conclusion's maximum ID + 1, + 2, ... in a fixed order: m, then n, then the
// split pairs by ascending shared cluster (Rule IV: just r). They throw
// RuleError when the conclusion does not fit the rule at the given position.

// `key`: the outer oconnective; `psi_side`: which argument holds the nested
// occurrence; `inner`: path from that argument to the nested occurrence.
RuleApplication plan_backward_rule1(const Cirquent& conclusion, const Path& key,
                                    Side psi_side, const Path& inner);
// `key`: the child oconnective to lift past its parent.
RuleApplication plan_backward_rule2(const Cirquent& conclusion, const Path& key);
// `redex`: the parent whose two children share one cluster.
RuleApplication plan_backward_rule3(const Cirquent& conclusion, const Path& redex);
// `redex`: the key oconnective; `shared_cluster`: the cluster to split off
// its right argument.
RuleApplication plan_backward_rule4(const Cirquent& conclusion, const Path& redex,
                                    int shared_cluster);

}  // namespace rifp
