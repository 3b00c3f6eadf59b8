#include "rifp/semantics.hpp"

#include <cstdint>

namespace rifp {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

}  // namespace

Interpretation Interpretation::parse(std::string_view text) {
  Interpretation out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && is_ws(text[pos])) ++pos;
  };
  skip_ws();
  if (pos == text.size()) return out;  // the empty assignment
  for (;;) {
    skip_ws();
    if (pos >= text.size() || text[pos] < 'a' || text[pos] > 'z')
      throw ParseError("expected an atom", pos);
    std::size_t start = pos;
    ++pos;
    while (pos < text.size()) {
      char c = text[pos];
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
        ++pos;
      else
        break;
    }
    std::string atom(text.substr(start, pos - start));
    skip_ws();
    if (pos >= text.size() || text[pos] != '=')
      throw ParseError("expected '=' after atom '" + atom + "'", pos);
    ++pos;
    skip_ws();
    if (pos >= text.size() || (text[pos] != '0' && text[pos] != '1'))
      throw ParseError("expected 0 or 1 for atom '" + atom + "'", pos);
    bool value = text[pos] == '1';
    ++pos;
    if (!out.assignment.emplace(std::move(atom), value).second)
      throw ParseError("atom assigned twice", start);
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != ',') throw ParseError("expected ','", pos);
    ++pos;
  }
  return out;
}

std::string Interpretation::str() const {
  std::string s;
  for (const auto& [atom, value] : assignment) {
    if (!s.empty()) s += ',';
    s += atom;
    s += '=';
    s += value ? '1' : '0';
  }
  return s;
}

Side Metaselection::at(int cluster) const {
  auto it = choices.find(cluster);
  return it == choices.end() ? fallback : it->second;
}

Side MetaselectionVector::select(Index index) const {
  auto it = per_rank.find(index.rank);
  if (it == per_rank.end())
    throw DomainError("no metaselection for rank " + std::to_string(index.rank));
  return it->second.at(index.cluster);
}

Side resolvent(const Cirquent& c, const Path& p, const MetaselectionVector& f) {
  const Cirquent& n = node_at(c, p);
  if (n.is_leaf())
    throw PathError("resolvent: path " + p.str() + " addresses a literal");
  return f.select(n.index());
}

bool metatrue(const Cirquent& c, const Interpretation& star, const MetaselectionVector& f) {
  const Cirquent* cur = &c;
  while (!cur->is_leaf()) cur = &cur->child(f.select(cur->index()));
  auto it = star.assignment.find(cur->atom());
  if (it == star.assignment.end())
    throw DomainError("interpretation does not cover atom '" + cur->atom() + "'");
  return cur->negated() ? !it->second : it->second;
}

namespace {

struct RankGroup {
  int rank = 0;
  Op op{};
  std::vector<int> clusters;  // ascending IDs
};

std::vector<RankGroup> rank_groups(const Cirquent& c) {
  std::map<int, RankGroup> by_rank;
  for (const auto& [id, info] : clusters_of(c)) {
    auto [it, fresh] = by_rank.try_emplace(info.rank);
    if (fresh) {
      it->second.rank = info.rank;
      it->second.op = info.op;
    }
    it->second.clusters.push_back(id);
  }
  std::vector<RankGroup> out;
  out.reserve(by_rank.size());
  for (auto& [rank, group] : by_rank) out.push_back(std::move(group));
  return out;  // ranks ascending by map order
}

// Alternating quantification, ranks ascending; inner ranks see the outer
// choices through f. Every cluster present gets an explicit entry, so the
// Metaselection fallback never carries semantic weight here.
bool eval_prefix(const Cirquent& c, const Interpretation& star,
                 const std::vector<RankGroup>& groups, std::size_t g,
                 MetaselectionVector& f) {
  if (g == groups.size()) return metatrue(c, star, f);
  const RankGroup& group = groups[g];
  bool conjunctive = group.op == Op::conj;
  Metaselection& sel = f.per_rank[group.rank];
  std::size_t n = group.clusters.size();
  bool result = conjunctive;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t t = 0; t < n; ++t)
      sel.choices[group.clusters[t]] = (mask >> t) & 1 ? Side::right : Side::left;
    bool sub = eval_prefix(c, star, groups, g + 1, f);
    if (conjunctive != sub) {  // forall hit a false / exists hit a true
      result = sub;
      break;
    }
  }
  f.per_rank.erase(group.rank);
  return result;
}

void require_atoms_covered(const Cirquent& c, const Interpretation& star) {
  for (const auto& atom : atoms_of(c))
    if (!star.assignment.count(atom))
      throw DomainError("interpretation does not cover atom '" + atom + "'");
}

void require_cluster_cap(const Cirquent& c, const EvalCaps& caps) {
  int n = static_cast<int>(clusters_of(c).size());
  if (n > caps.max_clusters)
    throw CapExceeded("cirquent has " + std::to_string(n) + " clusters, cap is " +
                      std::to_string(caps.max_clusters));
}

void require_atom_cap(std::size_t n, const EvalCaps& caps) {
  if (static_cast<int>(n) > caps.max_atoms)
    throw CapExceeded("cirquent has " + std::to_string(n) + " atoms, cap is " +
                      std::to_string(caps.max_atoms));
}

// Interpretation for enumeration row `row`: atoms in sorted order, the first
// atom in the most significant bit, 0 = false. Counting rows upward therefore
// walks interpretations in lexicographic order with false before true.
Interpretation row_interpretation(const std::vector<std::string>& names,
                                  std::uint64_t row) {
  Interpretation star;
  for (std::size_t t = 0; t < names.size(); ++t)
    star.assignment.emplace(names[t], (row >> (names.size() - 1 - t)) & 1);
  return star;
}

}  // namespace

bool true_under(const Cirquent& c, const Interpretation& star, const EvalCaps& caps) {
  require_atoms_covered(c, star);
  require_cluster_cap(c, caps);
  auto groups = rank_groups(c);
  MetaselectionVector f;
  return eval_prefix(c, star, groups, 0, f);
}

ValidityVerdict valid(const Cirquent& c, const EvalCaps& caps) {
  auto atoms = atoms_of(c);
  require_atom_cap(atoms.size(), caps);
  require_cluster_cap(c, caps);
  std::vector<std::string> names(atoms.begin(), atoms.end());
  std::uint64_t rows = std::uint64_t{1} << names.size();
  for (std::uint64_t row = 0; row < rows; ++row) {
    Interpretation star = row_interpretation(names, row);
    if (!true_under(c, star, caps)) return ValidityVerdict{std::move(star)};
  }
  return ValidityVerdict{};
}

bool classical_eval(const Cirquent& c, const Interpretation& star) {
  if (c.is_leaf()) {
    auto it = star.assignment.find(c.atom());
    if (it == star.assignment.end())
      throw DomainError("interpretation does not cover atom '" + c.atom() + "'");
    return c.negated() ? !it->second : it->second;
  }
  bool left = classical_eval(c.left(), star);
  bool right = classical_eval(c.right(), star);
  return c.op() == Op::conj ? (left && right) : (left || right);
}

bool classical_tautology(const Cirquent& c, const EvalCaps& caps) {
  if (!is_classical(c))
    throw DomainError("classical_tautology: input is not classical");
  auto atoms = atoms_of(c);
  require_atom_cap(atoms.size(), caps);
  std::vector<std::string> names(atoms.begin(), atoms.end());
  std::uint64_t rows = std::uint64_t{1} << names.size();
  for (std::uint64_t row = 0; row < rows; ++row)
    if (!classical_eval(c, row_interpretation(names, row))) return false;
  return true;
}

}  // namespace rifp
