#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "vtamlib/decisions.hpp"
#include "vtamlib/encodings.hpp"

using namespace vtam;

namespace {

// independent balance predicate on g/a-trees
bool is_balanced(const Term& t) {
  struct R {
    static int depth(const Term& t, bool& ok) {
      if (t.is_leaf()) return 0;
      int l = depth(t.children()[0], ok);
      int r = depth(t.children()[1], ok);
      if (l != r) ok = false;
      return 1 + std::max(l, r);
    }
  };
  bool ok = true;
  R::depth(t, ok);
  return ok;
}

// independent five-property red-black checker; returns black height or -1
int rb_black_height(const Term& t, bool root_must_be_black) {
  if (t.is_leaf()) return 1;  // leaves are black and count
  bool is_black = t.root() == "black";
  bool is_red = t.root() == "red";
  if (!is_black && !is_red) return -1;
  if (root_must_be_black && !is_black) return -1;
  if (is_red) {
    for (const auto& c : t.children())
      if (!c.is_leaf() && c.root() == "red") return -1;
  }
  int l = rb_black_height(t.children()[0], false);
  int r = rb_black_height(t.children()[1], false);
  if (l < 0 || r < 0 || l != r) return -1;
  return l + (is_black ? 1 : 0);
}

// all g/a-trees of depth <= d
std::vector<Term> ga_trees(int depth) {
  if (depth == 0) return {Term("a")};
  auto smaller = ga_trees(depth - 1);
  std::vector<Term> out = smaller;
  for (const auto& l : smaller)
    for (const auto& r : smaller) out.push_back(Term("g", {l, r}));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Term powerlist_of(const std::vector<int>& elems) {
  struct B {
    static Term elem(int v) {
      Term t("z");
      for (int i = 0; i < v; ++i) t = Term("s", {t});
      return t;
    }
    static Term rec(const std::vector<int>& xs, std::size_t lo, std::size_t hi) {
      if (hi - lo == 1) return elem(xs[lo]);
      std::size_t mid = lo + (hi - lo + 1) / 2;
      return Term("g", {rec(xs, lo, mid), rec(xs, mid, hi)});
    }
  };
  return B::rec(elems, 0, elems.size());
}

bool brute_sat(const Cnf& cnf) {
  for (int mask = 0; mask < (1 << cnf.vars); ++mask) {
    bool all = true;
    for (const auto& cl : cnf.clauses) {
      bool any = false;
      for (int lit : cl) {
        int v = lit > 0 ? lit : -lit;
        bool val = (mask >> (v - 1)) & 1;
        if ((lit > 0) == val) any = true;
      }
      if (!any) all = false;
    }
    if (all) return true;
  }
  return cnf.clauses.empty();
}

Cnf random_cnf(std::mt19937& rng, int max_vars, int max_clauses) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Cnf cnf;
  cnf.vars = pick(1, max_vars);
  int m = pick(1, max_clauses);
  for (int i = 0; i < m; ++i) {
    std::set<int> vars;
    int k = pick(1, std::min(3, cnf.vars));
    std::vector<int> clause;
    while (static_cast<int>(clause.size()) < k) {
      int v = pick(1, cnf.vars);
      if (!vars.insert(v).second) continue;
      clause.push_back(pick(0, 1) ? v : -v);
    }
    std::sort(clause.begin(), clause.end());
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

}  // namespace

TEST_CASE("translate_term applies contexts homomorphically") {
  auto e = build_example("balanced");
  Term src = parse_term("g(a,a)", e.translation.source_sig);
  CHECK(print_term(translate_term(e.translation, src)) == "g2(g1(a,a),g0)");

  // identity translation: contexts that are just the source symbol
  Translation id;
  id.source_sig.add("a", 0);
  id.source_sig.add("f", 2);
  id.defs = {{"a", Term("a")}, {"f", Term("f", {Term("_1"), Term("_2")})}};
  Term t = parse_term("f(a,f(a,a))", id.source_sig);
  CHECK(translate_term(id, t) == t);
}

TEST_CASE("ternary symbols can be emulated by nested contexts") {
  Translation tr;
  tr.source_sig.set_relaxed(true);
  tr.source_sig.add("a", 0);
  tr.source_sig.add("g", 3);
  tr.defs = {{"a", Term("a")},
             {"g", Term("g2", {Term("_1"), Term("g1", {Term("_2"), Term("_3")})})}};
  Term src = parse_term("g(a,a,a)", tr.source_sig);
  CHECK(print_term(translate_term(tr, src)) == "g2(a,g1(a,a))");
}

TEST_CASE("translation is injective on enumerated source terms") {
  auto e = build_example("balanced");
  RankedSignature src;
  src.add("a", 0);
  src.add("g", 2);
  std::set<Term> images;
  std::size_t count = 0;
  for (const auto& t : enumerate_terms(src, {7, 100000})) {
    images.insert(translate_term(e.translation, t));
    ++count;
  }
  CHECK(images.size() == count);
}

TEST_CASE("the guard automaton recognizes exactly the well-formed translations") {
  auto e = build_example("balanced");
  Ta guard = translation_guard_ta(e.translation, e.automaton.sigma.base);
  RankedSignature src;
  src.add("a", 0);
  src.add("g", 2);
  std::set<Term> images;
  for (const auto& t : enumerate_terms(src, {7, 100000}))
    images.insert(translate_term(e.translation, t));
  for (const auto& u : enumerate_terms(e.automaton.sigma.base, {9, 100000}))
    CHECK(ta_accepts(guard, u) == (images.count(u) > 0));
}

TEST_CASE("balanced example classifies trees of depth two") {
  auto e = build_example("balanced");
  int accepted = 0, total = 0;
  for (const auto& t : ga_trees(2)) {
    ++total;
    bool m = member(e.automaton, translate_term(e.translation, t));
    CHECK(m == is_balanced(t));
    if (m) ++accepted;
  }
  CHECK(total == 5);
  CHECK(accepted == 3);  // a, g(a,a) and the perfect depth-2 tree
}

TEST_CASE("balanced example matches the balance predicate for depth three") {
  auto e = build_example("balanced");
  for (const auto& t : ga_trees(3)) {
    INFO(print_term(t));
    CHECK(member(e.automaton, translate_term(e.translation, t)) == is_balanced(t));
  }
}

TEST_CASE("red-black example agrees with the five-property checker") {
  auto e = build_example("redblack");
  std::mt19937 rng(101);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  struct Gen {
    std::mt19937& rng;
    std::function<int(int, int)> pick;
    Term run(int budget) {
      if (budget <= 1 || pick(0, 2) == 0) return Term("leaf");
      std::string col = pick(0, 1) ? "red" : "black";
      return Term(col, {run(budget / 2), run(budget / 2)});
    }
  };
  Gen gen{rng, pick};
  int mismatches = 0;
  for (int i = 0; i < 120; ++i) {
    Term t = gen.run(15);
    bool expect = rb_black_height(t, true) >= 0;
    bool got = member(e.automaton, translate_term(e.translation, t));
    if (expect != got) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("red-black example accepts a black leaf and rejects a red root") {
  auto e = build_example("redblack");
  CHECK(member(e.automaton, translate_term(e.translation, Term("leaf"))));
  Term redroot("red", {Term("leaf"), Term("leaf")});
  CHECK_FALSE(member(e.automaton, translate_term(e.translation, redroot)));
}

TEST_CASE("powerlists accept exactly power-of-two lengths") {
  auto e = build_example("powerlist");
  for (int len = 1; len <= 16; ++len) {
    std::vector<int> elems;
    for (int i = 0; i < len; ++i) elems.push_back(i % 3);
    Term list = powerlist_of(elems);
    bool expect = (len & (len - 1)) == 0;
    INFO("length ", len);
    CHECK(member(e.automaton, translate_term(e.translation, list)) == expect);
  }
}

TEST_CASE("dimacs parsing and validation") {
  Cnf cnf = parse_dimacs("c a comment\np cnf 3 2\n1 -2 3 0\n-1 2 0\n");
  CHECK(cnf.vars == 3);
  REQUIRE(cnf.clauses.size() == 2);
  CHECK(cnf.clauses[0] == std::vector<int>{-2, 1, 3});

  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1 1 -1 0\n"), ParseError);  // x and not x
  CHECK_THROWS_AS(parse_dimacs("1 0\n"), ParseError);                  // no header
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);       // out of range

  // repeated identical literals collapse
  Cnf dup = parse_dimacs("p cnf 1 1\n1 1 1 0\n");
  CHECK(dup.clauses[0] == std::vector<int>{1});
}

TEST_CASE("3-sat encoding matches exhaustive satisfiability") {
  std::mt19937 rng(103);
  for (int i = 0; i < 25; ++i) {
    Cnf cnf = random_cnf(rng, 3, 4);
    auto inst = encode_3sat(cnf);
    INFO("instance ", i);
    CHECK(member(inst.automaton, inst.term) == brute_sat(cnf));
  }
}

TEST_CASE("3-sat encoding of the empty formula is accepted") {
  Cnf cnf;
  cnf.vars = 0;
  auto inst = encode_3sat(cnf);
  CHECK(member(inst.automaton, inst.term));
}

TEST_CASE("lifting tas into memory languages") {
  RankedSignature gamma;
  gamma.add("c", 0);
  gamma.add("h", 2);
  RankedSignature gb = with_bot(gamma);

  SUBCASE("single constant") {
    Ta b;
    b.gamma = gb;
    b.states = {"s"};
    b.final = {"s"};
    b.rules = {{"c", {}, "s"}};
    VtamFragment frag = lift_ta_to_memory(b, "w");
    Vtam host;
    host.gamma = gamma;
    merge_fragment(host, frag);
    auto fx = memory_fixpoint(host, 6);
    CHECK(fx.memories.at(frag.state_for.at("s")) == std::set<Term>{Term("c")});
  }

  SUBCASE("exactly h(c,c)") {
    Ta b;
    b.gamma = gb;
    b.states = {"sc", "st"};
    b.final = {"st"};
    b.rules = {{"c", {}, "sc"}, {"h", {"sc", "sc"}, "st"}};
    VtamFragment frag = lift_ta_to_memory(b, "w");
    Vtam host;
    host.gamma = gamma;
    merge_fragment(host, frag);
    auto fx = memory_fixpoint(host, 6);
    CHECK(fx.memories.at(frag.state_for.at("st")) ==
          std::set<Term>{parse_term("h(c,c)", gb)});
  }

  SUBCASE("memory languages equal the ta languages up to size 6") {
    std::mt19937 rng(104);
    for (int i = 0; i < 10; ++i) {
      // random ta over gamma+bot
      Ta b;
      b.gamma = gb;
      auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
      };
      int n = pick(1, 3);
      for (int s = 0; s < n; ++s) b.states.push_back("s" + std::to_string(s));
      for (const auto& q : b.states)
        if (pick(0, 1)) b.final.insert(q);
      auto st = [&] { return b.states[static_cast<std::size_t>(pick(0, n - 1))]; };
      for (const auto& sym : gb.symbols()) {
        int k = pick(1, 2);
        for (int j = 0; j < k; ++j) {
          if (gb.arity(sym.name) == 0)
            b.rules.push_back({sym.name, {}, st()});
          else
            b.rules.push_back({sym.name, {st(), st()}, st()});
        }
      }
      VtamFragment frag = lift_ta_to_memory(b, "w");
      Vtam host;
      host.gamma = gamma;
      merge_fragment(host, frag);
      auto fx = memory_fixpoint(host, 6);
      for (const auto& q : b.states) {
        std::set<Term> expect;
        for (const auto& m : enumerate_terms(gb, {6, 100000})) {
          // language of b in state q
          Ta bq = b;
          bq.final = {q};
          if (ta_accepts(bq, m)) expect.insert(m);
        }
        CHECK(fx.memories.at(frag.state_for.at(q)) == expect);
      }
    }
  }

  SUBCASE("empty ta lifts to empty memory languages") {
    Ta b;
    b.gamma = gb;
    b.states = {"s"};
    b.rules = {{"c", {}, "s"}};  // no finals, but the state itself is reachable
    b.final = {};
    VtamFragment frag = lift_ta_to_memory(b, "w");
    Vtam host;
    host.gamma = gamma;
    merge_fragment(host, frag);
    // language-of-final-states is empty; per-state memories mirror L(b, s)
    auto fx = memory_fixpoint(host, 6);
    CHECK(fx.memories.at(frag.state_for.at("s")) == std::set<Term>{Term("c")});
  }
}

TEST_CASE("unknown example names are rejected") {
  CHECK_THROWS_AS(build_example("nope"), ValidationError);
}
