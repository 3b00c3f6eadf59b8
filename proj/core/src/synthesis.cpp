#include "rifp/synthesis.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "rifp/semantics.hpp"

namespace rifp {

IDistribution i_distribution_of(const Cirquent& c, int rank) {
  IDistribution d;
  walk(c, [&](const Cirquent& s, const Path& p) {
    if (s.is_leaf() || s.index().rank != rank) return;
    if (d.counts.size() <= p.size()) d.counts.resize(p.size() + 1, 0);
    ++d.counts[p.size()];
  });
  while (!d.counts.empty() && d.counts.back() == 0) d.counts.pop_back();
  return d;
}

bool i_distribution_decreased(const IDistribution& before, const IDistribution& after) {
  std::size_t levels = std::max(before.counts.size(), after.counts.size());
  for (std::size_t m = 0; m < levels; ++m) {
    long long b = m < before.counts.size() ? before.counts[m] : 0;
    long long a = m < after.counts.size() ? after.counts[m] : 0;
    if (a != b) return a > b;
  }
  return false;
}

namespace {

const Cirquent& pin_target(const Cirquent& c, const Pin& pin, int cluster, const char* which) {
  const Cirquent* n = nullptr;
  try {
    n = &node_at(c, pin.target);
  } catch (const PathError&) {
    throw DomainError(std::string("state_of: pin ") + which + " addresses nothing");
  }
  if (n->is_leaf() || n->index().cluster != cluster)
    throw DomainError(std::string("state_of: pin ") + which +
                      " does not address an oconnective of cluster " + std::to_string(cluster));
  return *n;
}

}  // namespace

StateTuple state_of(const Cirquent& c, int cluster, int rank, int m,
                    const Pin& a, const Pin& b) {
  if (m != 1 && m != 2) throw DomainError("state_of: m must be 1 or 2");
  pin_target(c, a, cluster, "a");
  auto clusters = clusters_of(c);
  auto it = clusters.find(cluster);
  if (it == clusters.end() || it->second.rank != rank)
    throw DomainError("state_of: cluster " + std::to_string(cluster) +
                      " does not occur with rank " + std::to_string(rank));
  StateTuple s;
  s.x = it->second.size;
  s.y = s.x - m;
  if (m == 2) {
    pin_target(c, b, cluster, "b");
    if (a.target == b.target)
      throw DomainError("state_of: the two pins must be distinct when m is 2");
    s.z = static_cast<long long>(level_of(c, a.target)) + level_of(c, b.target);
  } else {
    s.z = static_cast<long long>(level_of(c, a.target)) - 1;
  }
  for (const auto& [id, info] : clusters)
    if (id != cluster && info.rank == rank && info.size > 1) s.t += info.size;
  return s;
}

namespace {

bool property1_below(const Cirquent& c, int max_above) {
  if (c.is_leaf()) return true;
  if (c.index().rank < max_above) return false;
  int m = std::max(max_above, c.index().rank);
  return property1_below(c.left(), m) && property1_below(c.right(), m);
}

}  // namespace

bool has_property1(const Cirquent& c) { return property1_below(c, 0); }

bool has_property2(const Cirquent& c) {
  for (const auto& [id, info] : clusters_of(c)) {
    const auto& occ = info.occurrences;
    for (std::size_t u = 0; u < occ.size(); ++u)
      for (std::size_t v = u + 1; v < occ.size(); ++v)
        if (occ[u].is_prefix_of(occ[v])) return false;  // preorder: u precedes v
  }
  return true;
}

namespace {

constexpr long long kIterationCap = 1'000'000;

[[noreturn]] void stuck(const std::string& msg) { throw InternalError(msg); }

void count_iteration(long long& guard, const char* where) {
  if (++guard > kIterationCap)
    stuck(std::string(where) + " exceeded the iteration cap");
}

Cirquent apply_or_die(const Cirquent& d, const RuleApplication& app, const char* where) {
  try {
    return backward_apply(d, app);
  } catch (const Error& e) {
    stuck(std::string(where) + ": prescribed rewrite blocked: " + e.what());
  }
}

std::set<int> rank_labels(const Cirquent& c) {
  std::set<int> out;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf()) out.insert(s.index().rank);
  });
  return out;
}

bool path_before(const Path& p, const Path& q) {
  return p.size() != q.size() ? p.size() < q.size() : p < q;
}

// Rank-i oconnectives still sitting below a strictly higher-rank ancestor.
void displaced_below(const Cirquent& c, Path at, int max_above, int rank,
                     std::vector<Path>& out) {
  if (c.is_leaf()) return;
  if (c.index().rank == rank && max_above > rank) out.push_back(at);
  int m = std::max(max_above, c.index().rank);
  displaced_below(c.left(), at.child(Side::left), m, rank, out);
  displaced_below(c.right(), at.child(Side::right), m, rank, out);
}

int max_ancestor_rank(const Cirquent& c, const Path& p) {
  int best = 0;
  const Cirquent* n = &c;
  for (Side s : p.steps) {
    best = std::max(best, n->index().rank);
    n = &n->child(s);
  }
  return best;
}

}  // namespace

StepTrace step1(const Cirquent& c) {
  Cirquent d = c;
  std::vector<SynthEvent> events;
  long long guard = 0;
  for (int i : rank_labels(c)) {
    for (;;) {
      count_iteration(guard, "step1");
      std::vector<Path> displaced;
      displaced_below(d, Path{}, 0, i, displaced);
      if (displaced.empty()) break;
      Path a = *std::min_element(displaced.begin(), displaced.end(), path_before);
      while (!a.empty() && node_at(d, a.parent()).index().rank > i) {
        count_iteration(guard, "step1");
        RuleApplication app = plan_backward_rule2(d, a);
        Cirquent before = d;
        d = apply_or_die(d, app, "step1");
        if (!i_distribution_decreased(i_distribution_of(before, i), i_distribution_of(d, i)))
          stuck("step1: the level distribution did not decrease");
        a = a.parent();
        events.push_back(SynthEvent{.kind = SynthEvent::Kind::apply,
                                    .phase = SynthPhase::step1,
                                    .loop_rank = i,
                                    .cluster = 0,
                                    .app = app,
                                    .before = std::move(before),
                                    .after = d,
                                    .m = 0,
                                    .pin_a = {},
                                    .pin_b = {}});
      }
      if (max_ancestor_rank(d, a) > i)
        stuck("step1: the lifted oconnective still has a higher-rank ancestor");
    }
  }
  return StepTrace{std::move(d), std::move(events)};
}

StepTrace step2(const Cirquent& c) {
  Cirquent d = c;
  std::vector<SynthEvent> events;
  long long guard = 0;
  const bool keep_p1 = has_property1(d);
  for (;;) {
    count_iteration(guard, "step2");
    // preorder-first oconnective with a same-cluster strict descendant,
    // paired with its preorder-first such descendant
    std::vector<std::pair<Path, Index>> nodes;
    walk(d, [&](const Cirquent& s, const Path& p) {
      if (!s.is_leaf()) nodes.emplace_back(p, s.index());
    });
    std::optional<Path> outer, inner_abs;
    for (std::size_t u = 0; u < nodes.size() && !outer; ++u)
      for (std::size_t v = u + 1; v < nodes.size(); ++v)
        if (nodes[v].second == nodes[u].second &&
            nodes[u].first.is_prefix_of(nodes[v].first)) {
          outer = nodes[u].first;
          inner_abs = nodes[v].first;
          break;
        }
    if (!outer) break;
    Side psi_side = inner_abs->steps[outer->size()];
    Path inner_rel{std::vector<Side>(inner_abs->steps.begin() + outer->size() + 1,
                                     inner_abs->steps.end())};
    RuleApplication app = plan_backward_rule1(d, *outer, psi_side, inner_rel);
    Cirquent before = d;
    d = apply_or_die(d, app, "step2");
    if (oconnective_count(d) >= oconnective_count(before))
      stuck("step2: the oconnective count did not decrease");
    if (keep_p1 && !has_property1(d))
      stuck("step2: pruning broke the rank layering");
    events.push_back(SynthEvent{.kind = SynthEvent::Kind::apply,
                                .phase = SynthPhase::step2,
                                .loop_rank = 0,
                                .cluster = 0,
                                .app = app,
                                .before = std::move(before),
                                .after = d,
                                .m = 0,
                                .pin_a = {},
                                .pin_b = {}});
  }
  return StepTrace{std::move(d), std::move(events)};
}

namespace {

// Deterministic choice shared by the collapse and split loops: smallest
// occurrence level, then leftmost such occurrence, then smallest ID.
int pick_cluster(const std::map<int, ClusterInfo>& clusters,
                 const std::set<int>& eligible) {
  int best = 0;
  std::size_t best_level = 0;
  Path best_path;
  for (int id : eligible) {
    const auto& occ = clusters.at(id).occurrences;
    std::size_t level = occ.front().size();
    Path leftmost = occ.front();
    for (const Path& p : occ)
      if (p.size() < level || (p.size() == level && p < leftmost)) {
        level = p.size();
        leftmost = p;
      }
    if (best == 0 || level < best_level ||
        (level == best_level && leftmost < best_path)) {
      best = id;
      best_level = level;
      best_path = leftmost;
    }
  }
  return best;
}

struct PairChoice {
  Path a, b, nca;  // a in the nca's left branch, b in its right
};

// The pair of cluster occurrences with the deepest nearest common ancestor.
PairChoice pick_pair(const Cirquent& d, const std::vector<Path>& occ) {
  std::optional<PairChoice> best;
  for (std::size_t u = 0; u < occ.size(); ++u)
    for (std::size_t v = u + 1; v < occ.size(); ++v) {
      Path nca = nca_of(d, occ[u], occ[v]);
      PairChoice cand;
      cand.nca = nca;
      if (occ[u].steps[nca.size()] == Side::left) {
        cand.a = occ[u];
        cand.b = occ[v];
      } else {
        cand.a = occ[v];
        cand.b = occ[u];
      }
      if (!best || cand.nca.size() > best->nca.size() ||
          (cand.nca.size() == best->nca.size() &&
           (cand.a < best->a || (cand.a == best->a && cand.b < best->b))))
        best = cand;
    }
  return *best;
}

}  // namespace

StepTrace step3(const Cirquent& c) {
  Cirquent d = c;
  std::vector<SynthEvent> events;
  long long guard = 0;
  const bool keep_p1 = has_property1(d);
  const bool keep_p2 = has_property2(d);
  auto check_invariants = [&](const char* where) {
    if (keep_p1 && !has_property1(d))
      stuck(std::string(where) + ": rewrite broke the rank layering");
    if (keep_p2 && !has_property2(d))
      stuck(std::string(where) + ": rewrite nested a cluster inside itself");
  };

  for (int i : rank_labels(d)) {
    // collapse every non-singleton rank-i cluster to one occurrence
    for (;;) {
      count_iteration(guard, "step3");
      auto clusters = clusters_of(d);
      std::set<int> fat;
      for (const auto& [id, info] : clusters)
        if (info.rank == i && info.size > 1) fat.insert(id);
      if (fat.empty()) break;
      int k = pick_cluster(clusters, fat);

      std::optional<StateTuple> prev;
      auto note_state = [&](int m, const Pin& a, const Pin& b) {
        StateTuple st = state_of(d, k, i, m, a, b);
        if (prev && !(st < *prev))
          stuck("step3: the collapse state did not decrease");
        prev = st;
      };

      while (count_cluster(d, k) > 1) {
        count_iteration(guard, "step3");
        PairChoice pair = pick_pair(d, clusters_of(d).at(k).occurrences);
        Pin a{pair.a, Pin::Label::none};
        Pin b{pair.b, Pin::Label::none};
        events.push_back(SynthEvent{.kind = SynthEvent::Kind::pick,
                                    .phase = SynthPhase::step3_collapse,
                                    .loop_rank = i,
                                    .cluster = k,
                                    .app = std::nullopt,
                                    .before = d,
                                    .after = d,
                                    .m = 2,
                                    .pin_a = pair.a,
                                    .pin_b = pair.b});
        note_state(2, a, b);
        const long long l = static_cast<long long>(pair.nca.size());

        auto lift = [&](Pin& pin) {
          while (level_of(d, pin.target) > l + 1) {
            count_iteration(guard, "step3");
            RuleApplication app = plan_backward_rule2(d, pin.target);
            Cirquent before = d;
            d = apply_or_die(d, app, "step3");
            pin.target = pin.target.parent();
            check_invariants("step3");
            events.push_back(SynthEvent{.kind = SynthEvent::Kind::apply,
                                        .phase = SynthPhase::step3_collapse,
                                        .loop_rank = i,
                                        .cluster = k,
                                        .app = app,
                                        .before = std::move(before),
                                        .after = d,
                                        .m = 2,
                                        .pin_a = a.target,
                                        .pin_b = b.target});
            note_state(2, a, b);
          }
        };
        lift(a);
        lift(b);

        RuleApplication app = plan_backward_rule3(d, pair.nca);
        Cirquent before = d;
        d = apply_or_die(d, app, "step3");
        a.target = pair.nca;
        b = Pin{};
        check_invariants("step3");
        events.push_back(SynthEvent{.kind = SynthEvent::Kind::apply,
                                    .phase = SynthPhase::step3_collapse,
                                    .loop_rank = i,
                                    .cluster = k,
                                    .app = app,
                                    .before = std::move(before),
                                    .after = d,
                                    .m = 1,
                                    .pin_a = a.target,
                                    .pin_b = {}});
        note_state(1, a, b);
      }
    }

    // split clusters shared between the two arguments of each rank-i node;
    // these rewrites only relabel, so the node positions are stable
    std::vector<Path> order;
    walk(d, [&](const Cirquent& s, const Path& p) {
      if (!s.is_leaf() && s.index().rank == i) order.push_back(p);
    });
    std::sort(order.begin(), order.end(), path_before);
    for (const Path& at : order) {
      for (;;) {
        count_iteration(guard, "step3");
        const Cirquent& node = node_at(d, at);
        auto clusters = clusters_of(d);
        std::set<int> shared;
        for (const auto& [id, info] : clusters) {
          if (info.rank <= i) continue;
          int in_left = count_cluster(node.left(), id);
          int in_right = count_cluster(node.right(), id);
          if (in_left > 0 && in_right > 0 && in_left + in_right == info.size)
            shared.insert(id);
        }
        if (shared.empty()) break;
        int l = pick_cluster(clusters, shared);
        RuleApplication app = plan_backward_rule4(d, at, l);
        Cirquent before = d;
        d = apply_or_die(d, app, "step3");
        check_invariants("step3");
        events.push_back(SynthEvent{.kind = SynthEvent::Kind::apply,
                                    .phase = SynthPhase::step3_split,
                                    .loop_rank = i,
                                    .cluster = 0,
                                    .app = app,
                                    .before = std::move(before),
                                    .after = d,
                                    .m = 0,
                                    .pin_a = {},
                                    .pin_b = {}});
        // the split strictly shrinks the set of clusters shared at this node
        const Cirquent& now = node_at(d, at);
        std::set<int> still;
        for (const auto& [id, info] : clusters_of(d)) {
          if (info.rank <= i) continue;
          int in_left = count_cluster(now.left(), id);
          int in_right = count_cluster(now.right(), id);
          if (in_left > 0 && in_right > 0 && in_left + in_right == info.size)
            still.insert(id);
        }
        if (still.size() >= shared.size())
          stuck("step3: the split did not shrink the shared-cluster set");
      }
    }

    for (const auto& [id, info] : clusters_of(d))
      if (info.rank == i && info.size > 1)
        stuck("step3: a non-singleton cluster survived its collapse loop");
  }
  if (!is_classical(d)) stuck("step3: the residue is not classical");
  return StepTrace{std::move(d), std::move(events)};
}

namespace {

// Lexicographically first falsifying row of a classical cirquent: atoms in
// name order, false before true, the first atom most significant.
Interpretation first_falsifier(const Cirquent& c) {
  std::set<std::string> atom_set = atoms_of(c);
  std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  const std::size_t n = atoms.size();
  for (unsigned long long row = 0; row < (1ull << n); ++row) {
    Interpretation itp;
    for (std::size_t t = 0; t < n; ++t)
      itp.assignment[atoms[t]] = (row >> (n - 1 - t)) & 1ull;
    if (!classical_eval(c, itp)) return itp;
  }
  stuck("first_falsifier called on a tautology");
}

}  // namespace

SynthesisOutcome prove(const Cirquent& c, const EvalCaps& caps) {
  auto report = validate(c);
  if (!report.ok())
    throw DomainError("prove: ill-formed input: " + report.violations.front().detail);
  const auto atoms = atoms_of(c);
  if (static_cast<int>(atoms.size()) > caps.max_atoms)
    throw CapExceeded("cirquent has " + std::to_string(atoms.size()) +
                      " atoms, cap is " + std::to_string(caps.max_atoms));
  const auto input_clusters = clusters_of(c);
  if (static_cast<int>(input_clusters.size()) > caps.max_clusters)
    throw CapExceeded("cirquent has " + std::to_string(input_clusters.size()) +
                      " clusters, cap is " + std::to_string(caps.max_clusters));

  SynthesisOutcome out;
  if (is_classical(c)) {
    if (classical_tautology(c, caps)) {
      Proof p;
      p.steps.push_back(ProofStep{c, std::nullopt});
      out.proof = std::move(p);
    } else {
      out.counterexample = first_falsifier(c);
    }
    return out;
  }

  StepTrace t1 = step1(c);
  StepTrace t2 = step2(t1.result);
  StepTrace t3 = step3(t2.result);
  out.events.reserve(t1.events.size() + t2.events.size() + t3.events.size());
  for (auto* trace : {&t1, &t2, &t3})
    for (SynthEvent& e : trace->events) out.events.push_back(std::move(e));

  const Cirquent& residue = t3.result;
  if (is_axiom(residue, caps)) {
    // replay the rewrite trace top-down: the residue is the axiom, each
    // recorded rewrite's conclusion becomes the next proof line
    Proof p;
    p.steps.push_back(ProofStep{residue, std::nullopt});
    for (auto it = out.events.rbegin(); it != out.events.rend(); ++it) {
      if (it->kind != SynthEvent::Kind::apply) continue;
      p.steps.push_back(ProofStep{it->before, it->app});
    }
    out.proof = std::move(p);
  } else {
    Interpretation cex = first_falsifier(residue);
    for (const std::string& atom : atoms)
      if (!cex.assignment.count(atom)) cex.assignment[atom] = false;
    out.counterexample = std::move(cex);
  }
  return out;
}

}  // namespace rifp
