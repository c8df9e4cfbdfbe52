#include "vtamlib/encodings.hpp"

#include <algorithm>
#include <sstream>

namespace vtam {

std::string hole_name(int i) { return "_" + std::to_string(i); }

bool is_hole(const std::string& sym) {
  if (sym.size() < 2 || sym[0] != '_') return false;
  for (std::size_t i = 1; i < sym.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(sym[i]))) return false;
  return true;
}

const ContextDef& Translation::def_for(const std::string& source_symbol) const {
  for (const auto& d : defs)
    if (d.source == source_symbol) return d;
  throw ValidationError({"no context for source symbol '" + source_symbol + "'"});
}

namespace {

Term substitute_holes(const Term& ctx, const std::vector<Term>& fills) {
  if (is_hole(ctx.root())) {
    int i = std::stoi(ctx.root().substr(1));
    if (i < 1 || static_cast<std::size_t>(i) > fills.size())
      throw ValidationError({"hole index out of range in context"});
    return fills[static_cast<std::size_t>(i) - 1];
  }
  std::vector<Term> kids;
  kids.reserve(ctx.children().size());
  for (const auto& c : ctx.children()) kids.push_back(substitute_holes(c, fills));
  return Term(ctx.root(), std::move(kids));
}

}  // namespace

Term translate_term(const Translation& tr, const Term& t) {
  std::vector<Term> kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) kids.push_back(translate_term(tr, c));
  return substitute_holes(tr.def_for(t.root()).context, kids);
}

Ta translation_guard_ta(const Translation& tr, const RankedSignature& target_sig) {
  Ta out;
  out.name = "wellformed";
  out.gamma = target_sig;  // input alphabet of the guard automaton
  std::string ok = "ok";
  out.states.push_back(ok);
  out.final.insert(ok);

  for (std::size_t d = 0; d < tr.defs.size(); ++d) {
    const auto& def = tr.defs[d];
    // states per internal non-root position of the context
    struct Walk {
      const Ta* out;
      std::string ok;
      std::size_t d;
      std::vector<TaRule> rules;
      std::vector<std::string> states;

      std::string state_for(const Position& p) {
        std::ostringstream os;
        os << "c" << d;
        for (int i : p) os << "_" << i;
        return os.str();
      }
      // returns the state recognizing the subtree at p
      std::string rec(const Term& node, const Position& p) {
        if (is_hole(node.root())) return ok;
        std::vector<std::string> kids;
        for (std::size_t i = 0; i < node.children().size(); ++i) {
          Position cp = p;
          cp.push_back(static_cast<int>(i) + 1);
          kids.push_back(rec(node.children()[i], cp));
        }
        std::string st = p.empty() ? ok : state_for(p);
        if (!p.empty()) states.push_back(st);
        rules.push_back({node.root(), kids, st});
        return st;
      }
    };
    Walk w{&out, ok, d, {}, {}};
    w.rec(def.context, {});
    for (auto& s : w.states) out.states.push_back(s);
    for (auto& r : w.rules) out.rules.push_back(std::move(r));
  }
  std::sort(out.states.begin(), out.states.end());
  out.states.erase(std::unique(out.states.begin(), out.states.end()), out.states.end());
  ta_validate(out);
  return out;
}

// ---- examples ----------------------------------------------------------------

namespace {

Rule mk(const std::string& sym, const std::string& q1, const std::string& q2, Guard g,
        ActionKind act, const std::string& mem, const std::string& tgt) {
  return Rule{sym, q1, q2, g, act, mem, tgt};
}

ExampleBundle balanced_example() {
  ExampleBundle e;
  Vtam& a = e.automaton;
  a.name = "balanced";
  a.relation = RelationKind::StructEq;
  a.sigma.base.add("a", 0);
  a.sigma.base.add("g0", 0);
  a.sigma.base.add("g1", 2);
  a.sigma.base.add("g2", 2);
  a.sigma.category_of = {{"a", Category::Int0},
                         {"g0", Category::Int0},
                         {"g1", Category::CInt1},
                         {"g2", Category::Push}};
  a.gamma.add("f", 2);
  a.states = {"q", "q0", "qf"};
  a.final = {"qf"};
  a.rules = {
      mk("a", "", "", Guard::None, ActionKind::EmitBot, "", "qf"),
      mk("g0", "", "", Guard::None, ActionKind::EmitBot, "", "q0"),
      mk("g1", "qf", "qf", Guard::RelPos, ActionKind::Keep1, "", "q"),
      mk("g2", "q", "q0", Guard::None, ActionKind::PushBin, "f", "qf"),
  };

  e.translation.source_sig.set_relaxed(true);
  e.translation.source_sig.add("a", 0);
  e.translation.source_sig.add("g", 2);
  e.translation.defs = {
      {"a", Term("a")},
      {"g", Term("g2", {Term("g1", {Term("_1"), Term("_2")}), Term("g0")})},
  };
  e.notes =
      "Well-balanced binary trees over g/a. g is translated into the context\n"
      "g2(g1(.,.), g0): g1 tests the two sub-memories for structural equality\n"
      "and g2 pushes one f on the kept memory, so the memory after a subtree\n"
      "is a comb whose height is the subtree depth.\n";
  return e;
}

ExampleBundle redblack_example() {
  ExampleBundle e;
  Vtam& a = e.automaton;
  a.name = "redblack";
  a.relation = RelationKind::StructEq;
  a.sigma.base.add("leaf", 0);
  a.sigma.base.add("b0", 0);
  a.sigma.base.add("b1", 2);
  a.sigma.base.add("b2", 2);
  a.sigma.base.add("r1", 2);
  a.sigma.category_of = {{"leaf", Category::Push},
                         {"b0", Category::Int0},
                         {"b1", Category::CInt1},
                         {"b2", Category::Push},
                         {"r1", Category::CInt1}};
  a.gamma.add("f", 2);
  a.gamma.add("c", 0);
  a.states = {"qb", "qr", "p1", "p0"};
  a.final = {"qb"};
  a.rules = {
      mk("leaf", "", "", Guard::None, ActionKind::PushConst, "c", "qb"),
      mk("b0", "", "", Guard::None, ActionKind::EmitBot, "", "p0"),
      mk("b1", "qb", "qb", Guard::RelPos, ActionKind::Keep1, "", "p1"),
      mk("b1", "qb", "qr", Guard::RelPos, ActionKind::Keep1, "", "p1"),
      mk("b1", "qr", "qb", Guard::RelPos, ActionKind::Keep1, "", "p1"),
      mk("b1", "qr", "qr", Guard::RelPos, ActionKind::Keep1, "", "p1"),
      mk("b2", "p1", "p0", Guard::None, ActionKind::PushBin, "f", "qb"),
      mk("r1", "qb", "qb", Guard::RelPos, ActionKind::Keep1, "", "qr"),
  };

  e.translation.source_sig.set_relaxed(true);
  e.translation.source_sig.add("leaf", 0);
  e.translation.source_sig.add("red", 2);
  e.translation.source_sig.add("black", 2);
  e.translation.defs = {
      {"leaf", Term("leaf")},
      {"red", Term("r1", {Term("_1"), Term("_2")})},
      {"black", Term("b2", {Term("b1", {Term("_1"), Term("_2")}), Term("b0")})},
  };
  e.notes =
      "Red-black trees: leaves are black and count in the black height. The\n"
      "memory after a subtree is a comb of f's whose height is the subtree's\n"
      "black height. black is the context b2(b1(.,.), b0) (test then push);\n"
      "red is r1(.,.) (test only, both sons must be black). The root must be\n"
      "black (final state qb).\n";
  return e;
}

ExampleBundle powerlist_example() {
  ExampleBundle e;
  Vtam& a = e.automaton;
  a.name = "powerlist";
  a.relation = RelationKind::StructEq;
  a.sigma.base.add("z", 0);
  a.sigma.base.add("s0", 0);
  a.sigma.base.add("s1", 2);
  a.sigma.base.add("g0", 0);
  a.sigma.base.add("g1", 2);
  a.sigma.base.add("g2", 2);
  a.sigma.category_of = {{"z", Category::Int0},  {"s0", Category::Int0},
                         {"s1", Category::Int1}, {"g0", Category::Int0},
                         {"g1", Category::CInt1}, {"g2", Category::Push}};
  a.gamma.add("f", 2);
  a.states = {"qe", "qs", "q0", "qq", "qt"};
  a.final = {"qe", "qt"};
  a.rules = {
      mk("z", "", "", Guard::None, ActionKind::EmitBot, "", "qe"),
      mk("s0", "", "", Guard::None, ActionKind::EmitBot, "", "qs"),
      mk("s1", "qe", "qs", Guard::None, ActionKind::Keep1, "", "qe"),
      mk("g0", "", "", Guard::None, ActionKind::EmitBot, "", "q0"),
      mk("g1", "qe", "qe", Guard::RelPos, ActionKind::Keep1, "", "qq"),
      mk("g1", "qt", "qt", Guard::RelPos, ActionKind::Keep1, "", "qq"),
      mk("g2", "qq", "q0", Guard::None, ActionKind::PushBin, "f", "qt"),
  };

  e.translation.source_sig.set_relaxed(true);
  e.translation.source_sig.add("z", 0);
  e.translation.source_sig.add("s", 1);
  e.translation.source_sig.add("g", 2);
  e.translation.defs = {
      {"z", Term("z")},
      {"s", Term("s1", {Term("_1"), Term("s0")})},
      {"g", Term("g2", {Term("g1", {Term("_1"), Term("_2")}), Term("g0")})},
  };
  e.notes =
      "Powerlists: balanced g-trees whose leaves are unary integers s^k(z).\n"
      "Elements keep an empty memory (no pushes below the list level), the\n"
      "list skeleton uses the balanced-tree encoding, so a list is accepted\n"
      "iff its length is a power of two.\n";
  return e;
}

}  // namespace

ExampleBundle build_example(const std::string& name) {
  if (name == "balanced") return balanced_example();
  if (name == "redblack") return redblack_example();
  if (name == "powerlist") return powerlist_example();
  throw ValidationError({"unknown example '" + name + "' (balanced|redblack|powerlist)"});
}

// ---- 3-SAT -------------------------------------------------------------------

Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Cnf cnf;
  int m_declared = -1;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string kind;
      if (!(ls >> kind >> cnf.vars >> m_declared) || kind != "cnf" || cnf.vars < 0)
        throw ParseError("malformed dimacs header", 0);
      header = true;
      continue;
    }
    if (!header) throw ParseError("clause before dimacs header", 0);
    std::vector<int> clause;
    int lit = std::stoi(tok);
    while (lit != 0) {
      clause.push_back(lit);
      if (!(ls >> lit)) break;
    }
    if (clause.empty()) continue;
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    if (clause.size() > 3)
      throw ParseError("clause with more than three distinct literals", 0);
    std::set<int> vars_seen;
    for (int l : clause) {
      int v = l > 0 ? l : -l;
      if (v < 1 || v > cnf.vars) throw ParseError("literal out of range", 0);
      if (!vars_seen.insert(v).second)
        throw ParseError("variable occurs twice in one clause", 0);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  if (!header) throw ParseError("missing dimacs header", 0);
  if (m_declared >= 0 && static_cast<std::size_t>(m_declared) != cnf.clauses.size())
    throw ParseError("clause count does not match header", 0);
  return cnf;
}

Sat3Instance encode_3sat(const Cnf& cnf) {
  Sat3Instance out;
  Vtam& a = out.automaton;
  a.name = "sat3";
  a.relation = RelationKind::SynEq;

  int n = std::max(cnf.vars, 1);
  for (int i = 1; i <= n; ++i) {
    a.sigma.base.add("x" + std::to_string(i), 0);
    a.sigma.category_of["x" + std::to_string(i)] = Category::Push;
  }
  a.sigma.base.add("pad", 0);
  a.sigma.category_of["pad"] = Category::Int0;
  a.sigma.base.add("id2", 2);
  a.sigma.category_of["id2"] = Category::Int1;
  a.sigma.base.add("fa2", 2);
  a.sigma.category_of["fa2"] = Category::Int1;
  a.sigma.base.add("no2", 2);
  a.sigma.category_of["no2"] = Category::Int1;
  a.sigma.base.add("vee", 2);
  a.sigma.category_of["vee"] = Category::Push;
  a.sigma.base.add("wedge", 2);
  a.sigma.category_of["wedge"] = Category::CInt1;

  a.gamma.add("t0", 0);
  a.gamma.add("t1", 0);
  a.gamma.add("vv", 2);

  a.states = {"q0", "q1", "qp"};
  a.final = {"q1"};

  for (int i = 1; i <= n; ++i) {
    std::string x = "x" + std::to_string(i);
    a.rules.push_back(mk(x, "", "", Guard::None, ActionKind::PushConst, "t0", "q0"));
    a.rules.push_back(mk(x, "", "", Guard::None, ActionKind::PushConst, "t1", "q1"));
  }
  a.rules.push_back(mk("pad", "", "", Guard::None, ActionKind::EmitBot, "", "qp"));
  for (const std::string e : {"q0", "q1"}) {
    a.rules.push_back(mk("id2", e, "qp", Guard::None, ActionKind::Keep1, "", e));
    a.rules.push_back(mk("fa2", e, "qp", Guard::None, ActionKind::Keep1, "", "q0"));
    a.rules.push_back(
        mk("no2", e, "qp", Guard::None, ActionKind::Keep1, "", e == "q0" ? "q1" : "q0"));
  }
  for (const std::string e1 : {"q0", "q1"})
    for (const std::string e2 : {"q0", "q1"}) {
      std::string vor = (e1 == "q1" || e2 == "q1") ? "q1" : "q0";
      std::string vand = (e1 == "q1" && e2 == "q1") ? "q1" : "q0";
      a.rules.push_back(mk("vee", e1, e2, Guard::None, ActionKind::PushBin, "vv", vor));
      a.rules.push_back(mk("wedge", e1, e2, Guard::RelPos, ActionKind::Keep1, "", vand));
    }

  if (cnf.clauses.empty()) {
    // vacuous conjunction: always satisfiable; accept either guess of x1
    a.final = {"q0", "q1"};
    out.term = Term("x1");
    validate(a);
    return out;
  }

  auto delta_for = [&](const std::vector<int>& clause, int var) -> std::string {
    for (int l : clause) {
      if (l == var) return "id2";
      if (l == -var) return "no2";
    }
    return "fa2";
  };

  std::vector<Term> clause_terms;
  for (const auto& clause : cnf.clauses) {
    std::vector<Term> units;
    for (int v = 1; v <= n; ++v)
      units.push_back(
          Term(delta_for(clause, v), {Term("x" + std::to_string(v)), Term("pad")}));
    Term c = units.back();
    for (std::size_t i = units.size() - 1; i-- > 0;) c = Term("vee", {units[i], c});
    clause_terms.push_back(c);
  }
  Term t = clause_terms.back();
  for (std::size_t i = clause_terms.size() - 1; i-- > 0;)
    t = Term("wedge", {clause_terms[i], t});
  out.term = t;
  validate(a);
  return out;
}

// ---- lifting -----------------------------------------------------------------

VtamFragment lift_ta_to_memory(const Ta& b, const std::string& prefix) {
  VtamFragment frag;
  for (const auto& s : b.states) {
    frag.state_for[s] = prefix + "_" + s;
    frag.states.push_back(prefix + "_" + s);
  }
  int i = 0;
  for (const auto& r : b.rules) {
    std::string u = prefix + "_u" + std::to_string(i++);
    if (r.children.empty()) {
      if (r.symbol == kBot) {
        frag.symbols.push_back({u, 0});
        frag.categories[u] = Category::Int0;
        frag.rules.push_back(mk(u, "", "", Guard::None, ActionKind::EmitBot, "",
                                frag.state_for.at(r.target)));
      } else {
        frag.symbols.push_back({u, 0});
        frag.categories[u] = Category::Push;
        frag.rules.push_back(mk(u, "", "", Guard::None, ActionKind::PushConst, r.symbol,
                                frag.state_for.at(r.target)));
      }
    } else {
      frag.symbols.push_back({u, 2});
      frag.categories[u] = Category::Push;
      frag.rules.push_back(mk(u, frag.state_for.at(r.children[0]),
                              frag.state_for.at(r.children[1]), Guard::None,
                              ActionKind::PushBin, r.symbol, frag.state_for.at(r.target)));
    }
  }
  return frag;
}

void merge_fragment(Vtam& a, const VtamFragment& frag) {
  for (const auto& s : frag.symbols) {
    a.sigma.base.add(s.name, s.arity);
    a.sigma.category_of[s.name] = frag.categories.at(s.name);
  }
  for (const auto& q : frag.states) a.states.push_back(q);
  for (const auto& r : frag.rules) a.rules.push_back(r);
}

}  // namespace vtam
