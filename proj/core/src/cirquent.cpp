#include "rifp/cirquent.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace rifp {

namespace {

bool atom_ok(const std::string& a) {
  if (a.empty() || a[0] < 'a' || a[0] > 'z') return false;
  return std::all_of(a.begin(), a.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace

Path Path::child(Side s) const {
  Path p = *this;
  p.steps.push_back(s);
  return p;
}

Path Path::parent() const {
  if (steps.empty()) throw PathError("the root has no parent");
  Path p = *this;
  p.steps.pop_back();
  return p;
}

Side Path::last() const {
  if (steps.empty()) throw PathError("the root has no last step");
  return steps.back();
}

bool Path::is_prefix_of(const Path& p) const {
  if (steps.size() > p.steps.size()) return false;
  return std::equal(steps.begin(), steps.end(), p.steps.begin());
}

Path Path::concat(const Path& tail) const {
  Path p = *this;
  p.steps.insert(p.steps.end(), tail.steps.begin(), tail.steps.end());
  return p;
}

std::string Path::str() const {
  if (steps.empty()) return ".";
  std::string s;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    if (t) s += '/';
    s += side_letter(steps[t]);
  }
  return s;
}

Path Path::parse(std::string_view text) {
  Path p;
  if (text == ".") return p;
  if (text.empty()) throw ParseError("empty path", 0);
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (c == 'L')
      p.steps.push_back(Side::left);
    else if (c == 'R')
      p.steps.push_back(Side::right);
    else
      throw ParseError("bad path segment, expected L or R", pos);
    ++pos;
    if (pos < text.size()) {
      if (text[pos] != '/') throw ParseError("expected '/' between path segments", pos);
      ++pos;
      if (pos == text.size()) throw ParseError("trailing '/' in path", pos - 1);
    }
  }
  return p;
}

Cirquent Cirquent::leaf(std::string atom, bool negated) {
  if (!atom_ok(atom)) throw DomainError("bad atom name '" + atom + "'");
  return Cirquent(Leaf{std::move(atom), negated});
}

Cirquent Cirquent::node(Op op, Index index, Cirquent left, Cirquent right) {
  if (index.cluster < 1 || index.rank < 1)
    throw DomainError("cluster and rank must be positive");
  Node n;
  n.op = op;
  n.index = index;
  n.left = std::make_shared<const Cirquent>(std::move(left));
  n.right = std::make_shared<const Cirquent>(std::move(right));
  return Cirquent(std::move(n));
}

const std::string& Cirquent::atom() const {
  auto* l = std::get_if<Leaf>(&repr_);
  if (!l) throw DomainError("atom() on an oconnective");
  return l->atom;
}

bool Cirquent::negated() const {
  auto* l = std::get_if<Leaf>(&repr_);
  if (!l) throw DomainError("negated() on an oconnective");
  return l->negated;
}

Op Cirquent::op() const {
  auto* n = std::get_if<Node>(&repr_);
  if (!n) throw DomainError("op() on a literal");
  return n->op;
}

Index Cirquent::index() const {
  auto* n = std::get_if<Node>(&repr_);
  if (!n) throw DomainError("index() on a literal");
  return n->index;
}

const Cirquent& Cirquent::left() const {
  auto* n = std::get_if<Node>(&repr_);
  if (!n) throw DomainError("left() on a literal");
  return *n->left;
}

const Cirquent& Cirquent::right() const {
  auto* n = std::get_if<Node>(&repr_);
  if (!n) throw DomainError("right() on a literal");
  return *n->right;
}

const Cirquent& Cirquent::child(Side s) const {
  return s == Side::left ? left() : right();
}

bool operator==(const Cirquent& a, const Cirquent& b) {
  if (&a == &b) return true;
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.atom() == b.atom() && a.negated() == b.negated();
  if (a.op() != b.op() || a.index() != b.index()) return false;
  return a.left() == b.left() && a.right() == b.right();
}

const Cirquent& node_at(const Cirquent& c, const Path& p) {
  const Cirquent* cur = &c;
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    if (cur->is_leaf())
      throw PathError("path " + p.str() + " runs past a literal");
    cur = &cur->child(p.steps[t]);
  }
  return *cur;
}

Cirquent replace_at(const Cirquent& c, const Path& p, const Cirquent& replacement) {
  if (p.empty()) return replacement;
  if (c.is_leaf()) throw PathError("path " + p.str() + " runs past a literal");
  Side s = p.steps.front();
  Path rest(std::vector<Side>(p.steps.begin() + 1, p.steps.end()));
  Cirquent sub = replace_at(c.child(s), rest, replacement);
  if (s == Side::left) return Cirquent::node(c.op(), c.index(), std::move(sub), c.right());
  return Cirquent::node(c.op(), c.index(), c.left(), std::move(sub));
}

int level_of(const Cirquent& c, const Path& p) {
  const Cirquent& n = node_at(c, p);
  if (n.is_leaf()) throw PathError("level_of: path " + p.str() + " addresses a literal");
  return static_cast<int>(p.size());
}

Path nca_of(const Cirquent& c, const Path& p, const Path& q) {
  const Cirquent& a = node_at(c, p);
  const Cirquent& b = node_at(c, q);
  if (a.is_leaf() || b.is_leaf())
    throw PathError("nca_of: a path addresses a literal");
  if (p.is_prefix_of(q) || q.is_prefix_of(p))
    throw PathError("nca_of: nested pair " + p.str() + ", " + q.str());
  std::size_t t = 0;
  while (t < p.steps.size() && t < q.steps.size() && p.steps[t] == q.steps[t]) ++t;
  return Path(std::vector<Side>(p.steps.begin(), p.steps.begin() + t));
}

int oconnective_count(const Cirquent& c) {
  int n = 0;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf()) ++n;
  });
  return n;
}

std::set<std::string> atoms_of(const Cirquent& c) {
  std::set<std::string> out;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (s.is_leaf()) out.insert(s.atom());
  });
  return out;
}

std::map<int, ClusterInfo> clusters_of(const Cirquent& c) {
  std::map<int, ClusterInfo> out;
  walk(c, [&](const Cirquent& s, const Path& p) {
    if (s.is_leaf()) return;
    auto [it, fresh] = out.try_emplace(s.index().cluster);
    if (fresh) {
      it->second.op = s.op();
      it->second.rank = s.index().rank;
    }
    ++it->second.size;
    it->second.occurrences.push_back(p);
  });
  return out;
}

std::map<int, Op> rank_types_of(const Cirquent& c) {
  std::map<int, Op> out;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf()) out.try_emplace(s.index().rank, s.op());
  });
  return out;
}

int max_cluster_id(const Cirquent& c) {
  int best = 0;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf()) best = std::max(best, s.index().cluster);
  });
  return best;
}

int count_cluster(const Cirquent& c, int cluster) {
  int n = 0;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf() && s.index().cluster == cluster) ++n;
  });
  return n;
}

Cirquent rename_cluster(const Cirquent& c, int from, int to) {
  if (c.is_leaf()) return c;
  Index idx = c.index();
  if (idx.cluster == from) idx.cluster = to;
  return Cirquent::node(c.op(), idx, rename_cluster(c.left(), from, to),
                        rename_cluster(c.right(), from, to));
}

Cirquent relabel_cluster(const Cirquent& c, Index from, Index to) {
  if (from.rank != to.rank)
    throw DomainError("relabel_cluster: rank mismatch (" + std::to_string(from.rank) +
                      " -> " + std::to_string(to.rank) + ")");
  auto clusters = clusters_of(c);
  auto src = clusters.find(from.cluster);
  if (src == clusters.end()) return c;  // nothing to relabel
  if (from.cluster != to.cluster) {
    auto dst = clusters.find(to.cluster);
    if (dst != clusters.end() &&
        (dst->second.op != src->second.op || dst->second.rank != to.rank))
      throw DomainError("relabel_cluster: cluster " + std::to_string(to.cluster) +
                        " already occurs with a different type or rank");
  }
  std::function<Cirquent(const Cirquent&)> go = [&](const Cirquent& s) -> Cirquent {
    if (s.is_leaf()) return s;
    Index idx = s.index();
    if (idx == from) idx = to;
    return Cirquent::node(s.op(), idx, go(s.left()), go(s.right()));
  };
  return go(c);
}

bool is_classical(const Cirquent& c) {
  for (const auto& [id, info] : clusters_of(c))
    if (info.size != 1) return false;
  return true;
}

Cirquent to_formula(const Cirquent& c) {
  if (!is_classical(c)) throw DomainError("to_formula: input is not classical");
  int seat = 0;
  std::function<Cirquent(const Cirquent&)> go = [&](const Cirquent& s) -> Cirquent {
    if (s.is_leaf()) return s;
    int t = ++seat;
    Cirquent l = go(s.left());
    return Cirquent::node(s.op(), Index{t, t}, std::move(l), go(s.right()));
  };
  return go(c);
}

Cirquent negate_formula(const Cirquent& c) {
  if (!is_classical(c)) throw DomainError("negate_formula: input is not classical");
  int base = max_cluster_id(c);
  int seat = 0;
  std::function<Cirquent(const Cirquent&)> go = [&](const Cirquent& s) -> Cirquent {
    if (s.is_leaf()) return Cirquent::leaf(s.atom(), !s.negated());
    int t = ++seat;
    Cirquent l = go(s.left());
    return Cirquent::node(dual(s.op()), Index{base + t, s.index().rank}, std::move(l),
                          go(s.right()));
  };
  return go(c);
}

WellFormednessReport validate(const Cirquent& c) {
  struct ClusterSeen {
    std::set<char> ops;
    std::set<int> ranks;
  };
  std::map<int, ClusterSeen> clusters;
  // Rank typing uses every occurrence, so a cluster that itself mixes types
  // reports both kinds of trouble.
  std::map<int, std::set<char>> ranks;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (s.is_leaf()) return;
    auto& cs = clusters[s.index().cluster];
    cs.ops.insert(op_symbol(s.op()));
    cs.ranks.insert(s.index().rank);
    ranks[s.index().rank].insert(op_symbol(s.op()));
  });

  WellFormednessReport report;
  using Kind = WellFormednessReport::Kind;
  for (const auto& [id, seen] : clusters) {
    if (seen.ops.size() > 1)
      report.violations.push_back(
          {Kind::mixed_cluster_type,
           "cluster " + std::to_string(id) + " is used as both '&' and '|'"});
    if (seen.ranks.size() > 1) {
      std::ostringstream os;
      os << "cluster " << id << " carries ranks";
      for (int r : seen.ranks) os << ' ' << r;
      report.violations.push_back({Kind::mixed_cluster_rank, os.str()});
    }
  }
  for (const auto& [label, ops] : ranks) {
    if (ops.size() > 1)
      report.violations.push_back(
          {Kind::mixed_rank_type,
           "rank " + std::to_string(label) + " holds both '&' and '|' clusters"});
  }
  return report;
}

}  // namespace rifp
