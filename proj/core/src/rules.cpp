#include "rifp/rules.hpp"

#include <algorithm>
#include <set>

#include "rifp/parse.hpp"

namespace rifp {

std::string_view rule_tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::I_left: return "I-left";
    case RuleTag::I_right: return "I-right";
    case RuleTag::II_left: return "II-left";
    case RuleTag::II_right: return "II-right";
    case RuleTag::III: return "III";
    case RuleTag::IV: return "IV";
  }
  return "?";
}

std::optional<RuleTag> rule_tag_from(std::string_view name) {
  if (name == "I-left") return RuleTag::I_left;
  if (name == "I-right") return RuleTag::I_right;
  if (name == "II-left") return RuleTag::II_left;
  if (name == "II-right") return RuleTag::II_right;
  if (name == "III") return RuleTag::III;
  if (name == "IV") return RuleTag::IV;
  return std::nullopt;
}

std::string RuleApplication::str() const {
  std::string s = "rule=";
  s += rule_tag_name(rule);
  s += " at=";
  s += redex.str();
  switch (rule) {
    case RuleTag::I_left:
    case RuleTag::I_right:
      s += " inner=";
      s += inner.str();
      if (inserted) {
        s += " ins=";
        s += render(*inserted);
      }
      break;
    case RuleTag::II_left:
    case RuleTag::II_right:
    case RuleTag::III:
      s += " k=" + std::to_string(k) + ",i=" + std::to_string(i) +
           ",l=" + std::to_string(l) + ",j=" + std::to_string(j) +
           ",m=" + std::to_string(m) + ",n=" + std::to_string(n);
      if (!split.empty()) {
        s += " split=";
        for (std::size_t t = 0; t < split.size(); ++t) {
          if (t) s += ';';
          s += std::to_string(split[t].shared) + "->" +
               std::to_string(split[t].left_copy) + "/" +
               std::to_string(split[t].right_copy);
        }
      }
      break;
    case RuleTag::IV:
      s += " k=" + std::to_string(k) + ",i=" + std::to_string(i) +
           ",l=" + std::to_string(l) + ",j=" + std::to_string(j) +
           ",r=" + std::to_string(r);
      break;
  }
  return s;
}

namespace {

int parse_label(std::string_view text, std::size_t at) {
  if (text.empty()) throw ParseError("expected a cluster or rank label", at);
  long long v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("expected a number", at);
    v = v * 10 + (c - '0');
    if (v > 1'000'000'000) throw ParseError("label out of range", at);
  }
  if (v < 1) throw ParseError("label must be positive", at);
  return static_cast<int>(v);
}

// The k=..,i=..,... token groups the numeric parameters, comma-separated.
void parse_number_group(RuleApplication& app, std::string_view token, std::size_t at) {
  std::size_t pos = 0;
  while (pos <= token.size()) {
    std::size_t comma = token.find(',', pos);
    if (comma == std::string_view::npos) comma = token.size();
    std::string_view piece = token.substr(pos, comma - pos);
    std::size_t eq = piece.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("expected name=value in the parameter group", at);
    std::string_view name = piece.substr(0, eq);
    int value = parse_label(piece.substr(eq + 1), at);
    if (name == "k")
      app.k = value;
    else if (name == "i")
      app.i = value;
    else if (name == "l")
      app.l = value;
    else if (name == "j")
      app.j = value;
    else if (name == "m")
      app.m = value;
    else if (name == "n")
      app.n = value;
    else if (name == "r")
      app.r = value;
    else
      throw ParseError("unknown parameter '" + std::string(name) + "'", at);
    if (comma == token.size()) break;
    pos = comma + 1;
  }
}

void parse_split(RuleApplication& app, std::string_view token, std::size_t at) {
  std::size_t pos = 0;
  while (pos <= token.size()) {
    std::size_t semi = token.find(';', pos);
    if (semi == std::string_view::npos) semi = token.size();
    std::string_view piece = token.substr(pos, semi - pos);
    std::size_t arrow = piece.find("->");
    if (arrow == std::string_view::npos)
      throw ParseError("expected s->s1/s2 in split", at);
    std::size_t slash = piece.find('/', arrow + 2);
    if (slash == std::string_view::npos)
      throw ParseError("expected s->s1/s2 in split", at);
    SplitEntry entry;
    entry.shared = parse_label(piece.substr(0, arrow), at);
    entry.left_copy = parse_label(piece.substr(arrow + 2, slash - arrow - 2), at);
    entry.right_copy = parse_label(piece.substr(slash + 1), at);
    app.split.push_back(entry);
    if (semi == token.size()) break;
    pos = semi + 1;
  }
}

}  // namespace

RuleApplication RuleApplication::parse(std::string_view text) {
  RuleApplication app;
  bool have_rule = false, have_at = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    std::size_t start = pos;
    std::size_t eq = text.find('=', pos);
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value", pos);
    std::string_view key = text.substr(pos, eq - pos);
    if (key == "ins") {
      // runs to the end of the line
      app.inserted = parse_cirquent(text.substr(eq + 1));
      pos = text.size();
      break;
    }
    std::size_t end = text.find(' ', eq + 1);
    if (end == std::string_view::npos) end = text.size();
    std::string_view value = text.substr(eq + 1, end - eq - 1);
    pos = end;
    try {
      if (key == "rule") {
        auto tag = rule_tag_from(value);
        if (!tag) throw ParseError("unknown rule tag '" + std::string(value) + "'", start);
        app.rule = *tag;
        have_rule = true;
      } else if (key == "at") {
        app.redex = Path::parse(value);
        have_at = true;
      } else if (key == "inner") {
        app.inner = Path::parse(value);
      } else if (key == "k") {
        // the whole comma group, starting at its first assignment
        parse_number_group(app, text.substr(start, end - start), start);
      } else if (key == "split") {
        parse_split(app, value, start);
      } else {
        throw ParseError("unknown field '" + std::string(key) + "'", start);
      }
    } catch (const ParseError& e) {
      // Path::parse reports offsets local to the value; rebase onto the line.
      if (key == "at" || key == "inner")
        throw ParseError(std::string(e.what()), start + (eq + 1 - start) + e.position);
      throw;
    }
  }
  if (!have_rule) throw ParseError("missing rule=", 0);
  if (!have_at) throw ParseError("missing at=", 0);
  return app;
}

namespace {

[[noreturn]] void rule_fail(const std::string& msg) { throw RuleError(msg); }

const Cirquent& need_oconnective(const Cirquent& c, const Path& p, const char* what) {
  const Cirquent* n = nullptr;
  try {
    n = &node_at(c, p);
  } catch (const PathError& e) {
    rule_fail(std::string(what) + ": " + e.what());
  }
  if (n->is_leaf())
    rule_fail(std::string(what) + ": path " + p.str() + " addresses a literal");
  return *n;
}

void need_wellformed(const Cirquent& c, const char* which) {
  auto report = validate(c);
  if (!report.ok())
    rule_fail(std::string("ill-formed ") + which + ": " + report.violations.front().detail);
}

int min_rank_in(const Cirquent& c) {
  int best = 0;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf() && (best == 0 || s.index().rank < best)) best = s.index().rank;
  });
  return best;  // 0 when there is no oconnective
}

// Rule II condition (iii): every rank inside the side cirquent is >= i.
void check_side_ranks(const Cirquent& side, int i, const char* which) {
  int r = min_rank_in(side);
  if (r != 0 && r < i)
    rule_fail(std::string("Rule II (iii): rank ") + std::to_string(r) + " inside " +
              which + " is below the key rank " + std::to_string(i));
}

void check_fresh(const Cirquent& c, int id, const char* what) {
  if (count_cluster(c, id) != 0)
    rule_fail(std::string("fresh-ID collision: ") + what + " " + std::to_string(id) +
              " already occurs");
}

// ---- Rule I ----

Side rule1_psi_side(RuleTag t) { return t == RuleTag::I_left ? Side::left : Side::right; }

Cirquent forward_rule1(const Cirquent& premise, const RuleApplication& app) {
  const Cirquent& outer = need_oconnective(premise, app.redex, "Rule I");
  if (!app.inserted) rule_fail("Rule I forward needs the inserted cirquent");
  Side side = rule1_psi_side(app.rule);
  const Cirquent& psi_arg = outer.child(side);
  const Cirquent* kept = nullptr;
  try {
    kept = &node_at(psi_arg, app.inner);
  } catch (const PathError& e) {
    rule_fail(std::string("Rule I: ") + e.what());
  }
  Cirquent pair = app.rule == RuleTag::I_left
                      ? Cirquent::node(outer.op(), outer.index(), *kept, *app.inserted)
                      : Cirquent::node(outer.op(), outer.index(), *app.inserted, *kept);
  Cirquent new_arg = replace_at(psi_arg, app.inner, pair);
  return replace_at(premise, app.redex.child(side), new_arg);
}

Cirquent backward_rule1(const Cirquent& conclusion, const RuleApplication& app) {
  const Cirquent& outer = need_oconnective(conclusion, app.redex, "Rule I");
  Side side = rule1_psi_side(app.rule);
  const Cirquent& psi_arg = outer.child(side);
  const Cirquent& pair = need_oconnective(psi_arg, app.inner, "Rule I inner");
  if (pair.index() != outer.index() || pair.op() != outer.op())
    rule_fail("Rule I: the inner oconnective does not share the key index");
  const Cirquent& kept = app.rule == RuleTag::I_left ? pair.left() : pair.right();
  const Cirquent& dropped = app.rule == RuleTag::I_left ? pair.right() : pair.left();
  if (app.inserted && !(*app.inserted == dropped))
    rule_fail("Rule I: recorded insertion differs from the deleted subcirquent");
  Cirquent new_arg = replace_at(psi_arg, app.inner, kept);
  return replace_at(conclusion, app.redex.child(side), new_arg);
}

// ---- Rules II and III share conditions (i) and (ii) ----

void check_condition_ii(int i, int j) {
  if (i > j)
    rule_fail("Rule II/III (ii): key rank " + std::to_string(i) +
              " exceeds partner rank " + std::to_string(j));
}

// Condition (i), checked with both sides in hand: cluster l non-singleton in
// the conclusion forces m = n = l; singleton l forces m and n to be
// singletons in the premise.
void check_condition_i(const Cirquent& premise, const Cirquent& conclusion,
                       const RuleApplication& app) {
  if (count_cluster(conclusion, app.l) > 1) {
    if (app.m != app.l || app.n != app.l)
      rule_fail("Rule II/III (i): cluster " + std::to_string(app.l) +
                " is a non-singleton, so m and n must equal l");
  } else {
    if (count_cluster(premise, app.m) != 1)
      rule_fail("Rule II/III (i): cluster " + std::to_string(app.m) +
                " is not a singleton in the premise");
    if (count_cluster(premise, app.n) != 1)
      rule_fail("Rule II/III (i): cluster " + std::to_string(app.n) +
                " is not a singleton in the premise");
  }
}

struct Rule2Premise {
  const Cirquent* a;
  const Cirquent* b;
  const Cirquent* c1;
  const Cirquent* c2;
  Op key_op{};
  Op side_op{};
};

// Destructure Phi{ (A *_m C1) o_k (B *_n C2) } at the redex (II-left shown;
// II-right mirrors the partner arguments).
Rule2Premise destructure_rule2_premise(const Cirquent& premise, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(premise, app.redex, "Rule II");
  if (root.index() != Index{app.k, app.i})
    rule_fail("Rule II: key index mismatch at " + app.redex.str());
  const Cirquent& lhs = root.left();
  const Cirquent& rhs = root.right();
  if (lhs.is_leaf() || rhs.is_leaf())
    rule_fail("Rule II: both arguments of the key must be oconnectives");
  if (lhs.index() != Index{app.m, app.j})
    rule_fail("Rule II: left partner index mismatch");
  if (rhs.index() != Index{app.n, app.j})
    rule_fail("Rule II: right partner index mismatch");
  if (lhs.op() != rhs.op())
    rule_fail("Rule II: the premise partners differ in type");
  Rule2Premise out;
  out.key_op = root.op();
  out.side_op = lhs.op();
  if (app.rule == RuleTag::II_left) {
    out.a = &lhs.left();
    out.c1 = &lhs.right();
    out.b = &rhs.left();
    out.c2 = &rhs.right();
  } else {
    out.c1 = &lhs.left();
    out.a = &lhs.right();
    out.c2 = &rhs.left();
    out.b = &rhs.right();
  }
  return out;
}

Cirquent forward_rule2(const Cirquent& premise, const RuleApplication& app) {
  Rule2Premise parts = destructure_rule2_premise(premise, app);
  check_condition_ii(app.i, app.j);
  check_side_ranks(*parts.c1, app.i, "C1");
  check_side_ranks(*parts.c2, app.i, "C2");

  // Rebuild C by undoing the split renames in C1, and cross-check against C2.
  Cirquent c_from_1 = *parts.c1;
  Cirquent c_from_2 = *parts.c2;
  for (const auto& entry : app.split) {
    if (count_cluster(*parts.c1, entry.left_copy) != 1 ||
        count_cluster(premise, entry.left_copy) != 1)
      rule_fail("Rule II: split copy " + std::to_string(entry.left_copy) +
                " is not a singleton inside C1");
    if (count_cluster(*parts.c2, entry.right_copy) != 1 ||
        count_cluster(premise, entry.right_copy) != 1)
      rule_fail("Rule II: split copy " + std::to_string(entry.right_copy) +
                " is not a singleton inside C2");
    if (count_cluster(premise, entry.shared) != 0)
      rule_fail("Rule II: shared cluster " + std::to_string(entry.shared) +
                " must not occur in the premise");
    c_from_1 = rename_cluster(c_from_1, entry.left_copy, entry.shared);
    c_from_2 = rename_cluster(c_from_2, entry.right_copy, entry.shared);
  }
  if (!(c_from_1 == c_from_2))
    rule_fail("Rule II: the two copies of the side cirquent disagree");

  Cirquent key_node = Cirquent::node(parts.key_op, Index{app.k, app.i}, *parts.a, *parts.b);
  Cirquent redex_result =
      app.rule == RuleTag::II_left
          ? Cirquent::node(parts.side_op, Index{app.l, app.j}, std::move(key_node),
                           std::move(c_from_1))
          : Cirquent::node(parts.side_op, Index{app.l, app.j}, std::move(c_from_1),
                           std::move(key_node));
  Cirquent conclusion = replace_at(premise, app.redex, redex_result);

  check_condition_i(premise, conclusion, app);
  // Split exactness: a cluster of C is in the split iff it is a singleton of
  // the whole conclusion.
  const Cirquent& c_side = app.rule == RuleTag::II_left
                               ? node_at(conclusion, app.redex.child(Side::right))
                               : node_at(conclusion, app.redex.child(Side::left));
  auto side_clusters = clusters_of(c_side);
  for (const auto& [id, info] : side_clusters) {
    bool in_split = std::any_of(app.split.begin(), app.split.end(),
                                [&](const SplitEntry& e) { return e.shared == id; });
    bool singleton = count_cluster(conclusion, id) == 1;
    if (in_split != singleton)
      rule_fail("Rule II: split must cover exactly the singleton clusters of C "
                "(cluster " + std::to_string(id) + ")");
  }
  for (const auto& entry : app.split)
    if (!side_clusters.count(entry.shared))
      rule_fail("Rule II: split names cluster " + std::to_string(entry.shared) +
                " which does not occur in C");
  return conclusion;
}

Cirquent backward_rule2(const Cirquent& conclusion, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(conclusion, app.redex, "Rule II");
  if (root.index() != Index{app.l, app.j})
    rule_fail("Rule II: partner index mismatch at " + app.redex.str());
  Side key_side = app.rule == RuleTag::II_left ? Side::left : Side::right;
  const Cirquent& key = root.child(key_side);
  const Cirquent& c_side = root.child(other(key_side));
  if (key.is_leaf()) rule_fail("Rule II: the key argument is a literal");
  if (key.index() != Index{app.k, app.i})
    rule_fail("Rule II: key index mismatch");

  check_condition_ii(app.i, app.j);
  check_side_ranks(c_side, app.i, "C");

  bool l_singleton = count_cluster(conclusion, app.l) == 1;
  if (l_singleton) {
    if (app.m == app.n) rule_fail("Rule II: m and n must be distinct fresh clusters");
    check_fresh(conclusion, app.m, "m");
    check_fresh(conclusion, app.n, "n");
  } else if (app.m != app.l || app.n != app.l) {
    rule_fail("Rule II/III (i): cluster " + std::to_string(app.l) +
              " is a non-singleton, so m and n must equal l");
  }

  // The split must cover exactly the globally-singleton clusters of C, with
  // pairwise distinct fresh copies.
  auto c_clusters = clusters_of(c_side);
  std::set<int> fresh_ids;
  if (l_singleton) {
    fresh_ids.insert(app.m);
    fresh_ids.insert(app.n);
  }
  for (const auto& entry : app.split) {
    auto it = c_clusters.find(entry.shared);
    if (it == c_clusters.end())
      rule_fail("Rule II: split names cluster " + std::to_string(entry.shared) +
                " which does not occur in C");
    if (count_cluster(conclusion, entry.shared) != 1)
      rule_fail("Rule II: split names cluster " + std::to_string(entry.shared) +
                " which is not a singleton");
    check_fresh(conclusion, entry.left_copy, "split copy");
    check_fresh(conclusion, entry.right_copy, "split copy");
    if (!fresh_ids.insert(entry.left_copy).second)
      rule_fail("fresh-ID collision: " + std::to_string(entry.left_copy) + " used twice");
    if (!fresh_ids.insert(entry.right_copy).second)
      rule_fail("fresh-ID collision: " + std::to_string(entry.right_copy) + " used twice");
  }
  for (const auto& [id, info] : c_clusters) {
    if (count_cluster(conclusion, id) != 1) continue;
    bool in_split = std::any_of(app.split.begin(), app.split.end(),
                                [&](const SplitEntry& e) { return e.shared == id; });
    if (!in_split)
      rule_fail("Rule II: split must cover exactly the singleton clusters of C "
                "(cluster " + std::to_string(id) + ")");
  }

  Cirquent c1 = c_side;
  Cirquent c2 = c_side;
  for (const auto& entry : app.split) {
    c1 = rename_cluster(c1, entry.shared, entry.left_copy);
    c2 = rename_cluster(c2, entry.shared, entry.right_copy);
  }
  const Cirquent& a = key.left();
  const Cirquent& b = key.right();
  Cirquent lhs = app.rule == RuleTag::II_left
                     ? Cirquent::node(root.op(), Index{app.m, app.j}, a, std::move(c1))
                     : Cirquent::node(root.op(), Index{app.m, app.j}, std::move(c1), a);
  Cirquent rhs = app.rule == RuleTag::II_left
                     ? Cirquent::node(root.op(), Index{app.n, app.j}, b, std::move(c2))
                     : Cirquent::node(root.op(), Index{app.n, app.j}, std::move(c2), b);
  Cirquent premise_redex =
      Cirquent::node(key.op(), Index{app.k, app.i}, std::move(lhs), std::move(rhs));
  return replace_at(conclusion, app.redex, premise_redex);
}

// ---- Rule III ----

Cirquent forward_rule3(const Cirquent& premise, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(premise, app.redex, "Rule III");
  if (root.index() != Index{app.k, app.i})
    rule_fail("Rule III: key index mismatch at " + app.redex.str());
  const Cirquent& lhs = root.left();
  const Cirquent& rhs = root.right();
  if (lhs.is_leaf() || rhs.is_leaf())
    rule_fail("Rule III: both arguments of the key must be oconnectives");
  if (lhs.index() != Index{app.m, app.j})
    rule_fail("Rule III: left partner index mismatch");
  if (rhs.index() != Index{app.n, app.j})
    rule_fail("Rule III: right partner index mismatch");
  if (lhs.op() != rhs.op())
    rule_fail("Rule III: the premise partners differ in type");
  check_condition_ii(app.i, app.j);

  Cirquent left_pair =
      Cirquent::node(root.op(), Index{app.k, app.i}, lhs.left(), rhs.left());
  Cirquent right_pair =
      Cirquent::node(root.op(), Index{app.k, app.i}, lhs.right(), rhs.right());
  Cirquent redex_result = Cirquent::node(lhs.op(), Index{app.l, app.j},
                                         std::move(left_pair), std::move(right_pair));
  Cirquent conclusion = replace_at(premise, app.redex, redex_result);
  check_condition_i(premise, conclusion, app);
  return conclusion;
}

Cirquent backward_rule3(const Cirquent& conclusion, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(conclusion, app.redex, "Rule III");
  if (root.index() != Index{app.l, app.j})
    rule_fail("Rule III: partner index mismatch at " + app.redex.str());
  const Cirquent& lhs = root.left();
  const Cirquent& rhs = root.right();
  if (lhs.is_leaf() || rhs.is_leaf())
    rule_fail("Rule III: both arguments must be oconnectives");
  if (lhs.index() != Index{app.k, app.i} || rhs.index() != Index{app.k, app.i})
    rule_fail("Rule III: the two arguments must both carry the key index");
  if (lhs.op() != rhs.op())
    rule_fail("Rule III: the two key occurrences differ in type");
  check_condition_ii(app.i, app.j);

  if (count_cluster(conclusion, app.l) > 1) {
    if (app.m != app.l || app.n != app.l)
      rule_fail("Rule II/III (i): cluster " + std::to_string(app.l) +
                " is a non-singleton, so m and n must equal l");
  } else {
    if (app.m == app.n) rule_fail("Rule III: m and n must be distinct fresh clusters");
    check_fresh(conclusion, app.m, "m");
    check_fresh(conclusion, app.n, "n");
  }

  Cirquent left_partner = Cirquent::node(root.op(), Index{app.m, app.j},
                                         lhs.left(), rhs.left());
  Cirquent right_partner = Cirquent::node(root.op(), Index{app.n, app.j},
                                          lhs.right(), rhs.right());
  Cirquent premise_redex = Cirquent::node(lhs.op(), Index{app.k, app.i},
                                          std::move(left_partner), std::move(right_partner));
  return replace_at(conclusion, app.redex, premise_redex);
}

// ---- Rule IV ----

// The shared cluster l lives in the key's left argument; the right argument
// carries l (conclusion) or the stand-in r (premise). Rank j belongs to both.
void check_rule4_common(const RuleApplication& app) {
  if (app.i >= app.j)
    rule_fail("Rule IV (ii): key rank " + std::to_string(app.i) +
              " must be strictly below the shared cluster's rank " + std::to_string(app.j));
}

std::optional<Index> cluster_index_in(const Cirquent& c, int cluster) {
  std::optional<Index> found;
  walk(c, [&](const Cirquent& s, const Path&) {
    if (!s.is_leaf() && s.index().cluster == cluster && !found) found = s.index();
  });
  return found;
}

Cirquent forward_rule4(const Cirquent& premise, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(premise, app.redex, "Rule IV");
  if (root.index() != Index{app.k, app.i})
    rule_fail("Rule IV: key index mismatch at " + app.redex.str());
  check_rule4_common(app);
  const Cirquent& a = root.left();
  const Cirquent& b = root.right();

  int l_in_a = count_cluster(a, app.l);
  if (l_in_a == 0) rule_fail("Rule IV: cluster l does not occur in the left argument");
  if (count_cluster(premise, app.l) != l_in_a)
    rule_fail("Rule IV (i): cluster l occurs outside the left argument");
  int r_in_b = count_cluster(b, app.r);
  if (r_in_b == 0) rule_fail("Rule IV: cluster r does not occur in the right argument");
  if (count_cluster(premise, app.r) != r_in_b)
    rule_fail("Rule IV: cluster r occurs outside the right argument");

  auto l_index = cluster_index_in(a, app.l);
  auto r_index = cluster_index_in(b, app.r);
  if (l_index->rank != app.j || r_index->rank != app.j)
    rule_fail("Rule IV: clusters l and r must both be of rank j");
  const auto l_clusters = clusters_of(a);
  const auto r_clusters = clusters_of(b);
  if (l_clusters.at(app.l).op != r_clusters.at(app.r).op)
    rule_fail("Rule IV: clusters l and r differ in type");

  Cirquent merged = rename_cluster(b, app.r, app.l);
  Cirquent redex_result = Cirquent::node(root.op(), root.index(), a, std::move(merged));
  return replace_at(premise, app.redex, redex_result);
}

Cirquent backward_rule4(const Cirquent& conclusion, const RuleApplication& app) {
  const Cirquent& root = need_oconnective(conclusion, app.redex, "Rule IV");
  if (root.index() != Index{app.k, app.i})
    rule_fail("Rule IV: key index mismatch at " + app.redex.str());
  check_rule4_common(app);
  const Cirquent& a = root.left();
  const Cirquent& b = root.right();

  int l_in_a = count_cluster(a, app.l);
  int l_in_b = count_cluster(b, app.l);
  if (l_in_a == 0 || l_in_b == 0)
    rule_fail("Rule IV: cluster l must occur in both arguments of the key");
  if (count_cluster(conclusion, app.l) != l_in_a + l_in_b)
    rule_fail("Rule IV (i): cluster l occurs outside the key's arguments");
  auto l_index = cluster_index_in(a, app.l);
  if (l_index->rank != app.j)
    rule_fail("Rule IV: cluster l is not of rank j");
  check_fresh(conclusion, app.r, "r");

  Cirquent renamed = rename_cluster(b, app.l, app.r);
  Cirquent redex_result = Cirquent::node(root.op(), root.index(), a, std::move(renamed));
  return replace_at(conclusion, app.redex, redex_result);
}

using RuleFn = Cirquent (*)(const Cirquent&, const RuleApplication&);

Cirquent dispatch(const Cirquent& input, const RuleApplication& app, bool forward) {
  need_wellformed(input, forward ? "premise" : "conclusion");
  Cirquent result = [&] {
    switch (app.rule) {
      case RuleTag::I_left:
      case RuleTag::I_right:
        return forward ? forward_rule1(input, app) : backward_rule1(input, app);
      case RuleTag::II_left:
      case RuleTag::II_right:
        return forward ? forward_rule2(input, app) : backward_rule2(input, app);
      case RuleTag::III:
        return forward ? forward_rule3(input, app) : backward_rule3(input, app);
      case RuleTag::IV:
        return forward ? forward_rule4(input, app) : backward_rule4(input, app);
    }
    rule_fail("unknown rule tag");
  }();
  need_wellformed(result, "result");
  return result;
}

}  // namespace

Cirquent forward_apply(const Cirquent& premise, const RuleApplication& app) {
  return dispatch(premise, app, true);
}

Cirquent backward_apply(const Cirquent& conclusion, const RuleApplication& app) {
  return dispatch(conclusion, app, false);
}

bool check_step(const Cirquent& premise, const Cirquent& conclusion,
                const RuleApplication& app, std::string* why) {
  try {
    Cirquent out = forward_apply(premise, app);
    if (out == conclusion) return true;
    if (why) *why = "the rule application yields a different cirquent";
    return false;
  } catch (const Error& e) {
    if (why) *why = e.what();
    return false;
  }
}

RuleApplication plan_backward_rule1(const Cirquent& conclusion, const Path& key,
                                    Side psi_side, const Path& inner) {
  const Cirquent& outer = need_oconnective(conclusion, key, "Rule I plan");
  const Cirquent& pair = need_oconnective(outer.child(psi_side), inner, "Rule I plan");
  if (pair.index() != outer.index())
    rule_fail("Rule I plan: the inner oconnective does not share the key index");
  RuleApplication app;
  app.rule = psi_side == Side::left ? RuleTag::I_left : RuleTag::I_right;
  app.redex = key;
  app.inner = inner;
  app.inserted = psi_side == Side::left ? pair.right() : pair.left();
  return app;
}

RuleApplication plan_backward_rule2(const Cirquent& conclusion, const Path& key) {
  if (key.empty()) rule_fail("Rule II plan: the key has no parent to lift past");
  const Cirquent& key_node = need_oconnective(conclusion, key, "Rule II plan");
  const Cirquent& parent = need_oconnective(conclusion, key.parent(), "Rule II plan");
  Side key_side = key.last();
  const Cirquent& c_side = parent.child(other(key_side));

  RuleApplication app;
  app.rule = key_side == Side::left ? RuleTag::II_left : RuleTag::II_right;
  app.redex = key.parent();
  app.k = key_node.index().cluster;
  app.i = key_node.index().rank;
  app.l = parent.index().cluster;
  app.j = parent.index().rank;

  int fresh = max_cluster_id(conclusion);
  if (count_cluster(conclusion, app.l) == 1) {
    app.m = ++fresh;
    app.n = ++fresh;
  } else {
    app.m = app.l;
    app.n = app.l;
  }
  for (const auto& [id, info] : clusters_of(c_side)) {
    if (count_cluster(conclusion, id) != 1) continue;
    SplitEntry entry;
    entry.shared = id;
    entry.left_copy = ++fresh;
    entry.right_copy = ++fresh;
    app.split.push_back(entry);
  }
  return app;
}

RuleApplication plan_backward_rule3(const Cirquent& conclusion, const Path& redex) {
  const Cirquent& root = need_oconnective(conclusion, redex, "Rule III plan");
  const Cirquent& lhs = root.left();
  const Cirquent& rhs = root.right();
  if (lhs.is_leaf() || rhs.is_leaf() || lhs.index() != rhs.index())
    rule_fail("Rule III plan: the arguments do not share one cluster");
  RuleApplication app;
  app.rule = RuleTag::III;
  app.redex = redex;
  app.k = lhs.index().cluster;
  app.i = lhs.index().rank;
  app.l = root.index().cluster;
  app.j = root.index().rank;
  if (count_cluster(conclusion, app.l) == 1) {
    int fresh = max_cluster_id(conclusion);
    app.m = ++fresh;
    app.n = ++fresh;
  } else {
    app.m = app.l;
    app.n = app.l;
  }
  return app;
}

RuleApplication plan_backward_rule4(const Cirquent& conclusion, const Path& redex,
                                    int shared_cluster) {
  const Cirquent& root = need_oconnective(conclusion, redex, "Rule IV plan");
  auto shared_index = cluster_index_in(conclusion, shared_cluster);
  if (!shared_index)
    rule_fail("Rule IV plan: cluster " + std::to_string(shared_cluster) +
              " does not occur");
  RuleApplication app;
  app.rule = RuleTag::IV;
  app.redex = redex;
  app.k = root.index().cluster;
  app.i = root.index().rank;
  app.l = shared_cluster;
  app.j = shared_index->rank;
  app.r = max_cluster_id(conclusion) + 1;
  return app;
}

}  // namespace rifp
