#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rifp/errors.hpp"

namespace rifp {

// A cirquent is a propositional formula in negation normal form whose binary
// connectives ("oconnectives") each carry an index: a cluster ID and a rank.
// Oconnectives sharing a cluster are resolved together by the semantics;
// ranks order the quantification over those joint choices.

enum class Op : unsigned char { conj, disj };
enum class Side : unsigned char { left, right };

inline char op_symbol(Op op) { return op == Op::conj ? '&' : '|'; }
inline Op dual(Op op) { return op == Op::conj ? Op::disj : Op::conj; }
inline Side other(Side s) { return s == Side::left ? Side::right : Side::left; }
inline char side_letter(Side s) { return s == Side::left ? 'L' : 'R'; }

struct Index {
  int cluster = 0;  // positive
  int rank = 0;     // positive; label order is numeric, labels need not be contiguous
  friend auto operator<=>(const Index&, const Index&) = default;
};

// Address of a node: branch choices from the root. The empty path is the root.
struct Path {
  std::vector<Side> steps;

  Path() = default;
  explicit Path(std::vector<Side> s) : steps(std::move(s)) {}

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }

  Path child(Side s) const;
  Path parent() const;  // throws PathError at the root
  Side last() const;    // throws PathError at the root
  bool is_prefix_of(const Path& p) const;  // reflexive
  Path concat(const Path& tail) const;

  std::string str() const;  // "." for the root, else "L/R/..." segments
  static Path parse(std::string_view text);

  friend auto operator<=>(const Path&, const Path&) = default;
};

class Cirquent {
 public:
  Cirquent() = delete;

  static Cirquent leaf(std::string atom, bool negated = false);
  static Cirquent node(Op op, Index index, Cirquent left, Cirquent right);

  bool is_leaf() const { return std::holds_alternative<Leaf>(repr_); }

  // Leaf accessors. Throw DomainError when applied to an oconnective.
  const std::string& atom() const;
  bool negated() const;

  // Oconnective accessors. Throw DomainError when applied to a leaf.
  Op op() const;
  Index index() const;
  const Cirquent& left() const;
  const Cirquent& right() const;
  const Cirquent& child(Side s) const;

  friend bool operator==(const Cirquent& a, const Cirquent& b);
  friend bool operator!=(const Cirquent& a, const Cirquent& b) { return !(a == b); }

 private:
  struct Leaf {
    std::string atom;
    bool negated = false;
  };
  struct Node {
    Op op{};
    Index index{};
    std::shared_ptr<const Cirquent> left, right;
  };

  explicit Cirquent(Leaf l) : repr_(std::move(l)) {}
  explicit Cirquent(Node n) : repr_(std::move(n)) {}

  std::variant<Leaf, Node> repr_;
};

namespace detail {
template <class F>
void walk_impl(const Cirquent& c, Path& path, F& fn) {
  fn(c, const_cast<const Path&>(path));
  if (!c.is_leaf()) {
    path.steps.push_back(Side::left);
    walk_impl(c.left(), path, fn);
    path.steps.back() = Side::right;
    walk_impl(c.right(), path, fn);
    path.steps.pop_back();
  }
}
}  // namespace detail

// Preorder visit of every subcirquent together with its path.
template <class F>
void walk(const Cirquent& c, F fn) {
  Path p;
  detail::walk_impl(c, p, fn);
}

// --- structural queries ---

const Cirquent& node_at(const Cirquent& c, const Path& p);  // throws PathError
Cirquent replace_at(const Cirquent& c, const Path& p, const Cirquent& replacement);

// Number of oconnectives strictly containing the node at p. Requires p to
// address an oconnective.
int level_of(const Cirquent& c, const Path& p);

// Nearest common ancestor of two distinct, non-nested oconnective positions.
Path nca_of(const Cirquent& c, const Path& p, const Path& q);

int oconnective_count(const Cirquent& c);
std::set<std::string> atoms_of(const Cirquent& c);

struct ClusterInfo {
  Op op{};       // from the first occurrence in preorder
  int rank = 0;  // likewise
  int size = 0;
  std::vector<Path> occurrences;  // preorder
};
std::map<int, ClusterInfo> clusters_of(const Cirquent& c);
std::map<int, Op> rank_types_of(const Cirquent& c);
int max_cluster_id(const Cirquent& c);  // 0 when there is no oconnective
int count_cluster(const Cirquent& c, int cluster);

// Rewrites every occurrence of cluster `from` to carry cluster `to`,
// preserving each occurrence's rank. No checks; the checked public operation
// is relabel_cluster below.
Cirquent rename_cluster(const Cirquent& c, int from, int to);

// C[k^i/l^i]: replace index `from` with `to` everywhere. Requires equal ranks
// and, when `to`'s cluster already occurs, an identical type and rank.
Cirquent relabel_cluster(const Cirquent& c, Index from, Index to);

// All clusters are singletons, i.e. the cirquent is a plain formula whose
// indices carry no sharing.
bool is_classical(const Cirquent& c);

// Canonical renumbering of a classical cirquent: oconnective t in preorder
// receives the singleton index t:t.
Cirquent to_formula(const Cirquent& c);

// NNF negation of a classical cirquent: literals flip, connectives dualize,
// every oconnective gets a fresh singleton cluster (max ID + preorder seat)
// and keeps its rank.
Cirquent negate_formula(const Cirquent& c);

struct WellFormednessReport {
  enum class Kind { mixed_cluster_type, mixed_cluster_rank, mixed_rank_type };
  struct Violation {
    Kind kind{};
    std::string detail;
  };
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Cluster homogeneity (one type and one rank per cluster) and rank
// homogeneity (one type per rank label).
WellFormednessReport validate(const Cirquent& c);

}  // namespace rifp
