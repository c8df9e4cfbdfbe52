#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"
#include "vtamlib/format.hpp"

using namespace vtam;

namespace {

RankedSignature gamma_ch() {
  RankedSignature g;
  g.add("c", 0);
  g.add("h", 2);
  return with_bot(g);
}

Ta one_rule_ta() {
  Ta b;
  b.gamma = gamma_ch();
  b.states = {"s"};
  b.final = {"s"};
  b.rules = {{"c", {}, "s"}};
  return b;
}

Ta all_terms_ta(const RankedSignature& g) {
  Ta b;
  b.gamma = g;
  b.states = {"s"};
  b.final = {"s"};
  for (const auto& s : g.symbols()) {
    if (s.arity == 0)
      b.rules.push_back({s.name, {}, "s"});
    else
      b.rules.push_back({s.name, {"s", "s"}, "s"});
  }
  return b;
}

std::set<Term> language_upto(const Ta& b, std::size_t n) {
  std::set<Term> out;
  for (const auto& m : enumerate_terms(b.gamma, {n, 100000}))
    if (ta_accepts(b, m)) out.insert(m);
  return out;
}

Ta random_ta(std::mt19937& rng, const RankedSignature& g) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Ta b;
  b.gamma = g;
  int n = pick(1, 3);
  for (int i = 0; i < n; ++i) b.states.push_back("s" + std::to_string(i));
  for (const auto& q : b.states)
    if (pick(0, 1)) b.final.insert(q);
  if (b.final.empty()) b.final.insert(b.states[0]);
  auto st = [&] { return b.states[static_cast<std::size_t>(pick(0, n - 1))]; };
  for (const auto& s : g.symbols()) {
    int k = pick(1, 2);
    for (int i = 0; i < k; ++i) {
      if (s.arity == 0)
        b.rules.push_back({s.name, {}, st()});
      else
        b.rules.push_back({s.name, {st(), st()}, st()});
    }
  }
  return b;
}

}  // namespace

TEST_CASE("ta_accepts basics") {
  Ta b = one_rule_ta();
  CHECK(ta_accepts(b, Term("c")));
  CHECK_FALSE(ta_accepts(b, parse_term("h(c,c)", b.gamma)));
}

TEST_CASE("the universal ta accepts every enumerated term") {
  Ta b = all_terms_ta(gamma_ch());
  for (const auto& m : enumerate_terms(b.gamma, {7, 100000})) CHECK(ta_accepts(b, m));
}

TEST_CASE("emptiness and witnesses") {
  Ta b = one_rule_ta();
  CHECK_FALSE(ta_is_empty(b));
  CHECK(print_term(ta_witness(b)) == "c");

  Ta empty = b;
  empty.final.clear();
  CHECK(ta_is_empty(empty));
  CHECK_THROWS_AS(ta_witness(empty), ValidationError);

  // exactly { h(c,c) }
  Ta hcc;
  hcc.gamma = gamma_ch();
  hcc.states = {"sc", "st"};
  hcc.final = {"st"};
  hcc.rules = {{"c", {}, "sc"}, {"h", {"sc", "sc"}, "st"}};
  CHECK_FALSE(ta_is_empty(hcc));
  Term w = ta_witness(hcc);
  CHECK(print_term(w) == "h(c,c)");
  CHECK(term_size(w) == 3);
}

TEST_CASE("witnesses are minimal and accepted") {
  std::mt19937 rng(31);
  auto g = gamma_ch();
  for (int i = 0; i < 40; ++i) {
    Ta b = random_ta(rng, g);
    auto lang = language_upto(b, 7);
    if (ta_is_empty(b)) {
      CHECK(lang.empty());
      continue;
    }
    Term w = ta_witness(b);
    CHECK(ta_accepts(b, w));
    for (const auto& m : lang) CHECK(term_size(m) >= term_size(w));
  }
}

TEST_CASE("boolean identities at desk scale") {
  std::mt19937 rng(32);
  auto g = gamma_ch();
  for (int i = 0; i < 20; ++i) {
    Ta b = random_ta(rng, g);
    Ta nb = ta_complement(b);
    Ta meet = ta_product(b, nb, TaProductMode::Intersect);
    Ta join = ta_product(b, nb, TaProductMode::Unite);
    CHECK(ta_is_empty(meet));
    for (const auto& m : enumerate_terms(g, {7, 3000})) {
      CHECK(ta_accepts(nb, m) == !ta_accepts(b, m));
      CHECK(ta_accepts(join, m));
      CHECK(ta_accepts(ta_determinize(b), m) == ta_accepts(b, m));
    }
  }
}

TEST_CASE("product respects set semantics") {
  std::mt19937 rng(33);
  auto g = gamma_ch();
  for (int i = 0; i < 15; ++i) {
    Ta b1 = random_ta(rng, g);
    Ta b2 = random_ta(rng, g);
    Ta meet = ta_product(b1, b2, TaProductMode::Intersect);
    Ta join = ta_product(b1, b2, TaProductMode::Unite);
    for (const auto& m : enumerate_terms(g, {7, 3000})) {
      CHECK(ta_accepts(meet, m) == (ta_accepts(b1, m) && ta_accepts(b2, m)));
      CHECK(ta_accepts(join, m) == (ta_accepts(b1, m) || ta_accepts(b2, m)));
    }
  }
}

TEST_CASE("complement of a finite set") {
  auto g = gamma_ch();
  auto all7 = enumerate_terms(g, {7, 100000});

  Ta none = ta_complement_of_finite_set({}, g);
  for (const auto& m : all7) CHECK(ta_accepts(none, m));

  Ta noc = ta_complement_of_finite_set({Term("c")}, g);
  CHECK_FALSE(ta_accepts(noc, Term("c")));
  CHECK(ta_accepts(noc, parse_term("h(c,c)", g)));

  std::vector<Term> ms = {Term("c"), parse_term("h(c,bot)", g),
                          parse_term("h(h(c,c),c)", g)};
  Ta cmp = ta_complement_of_finite_set(ms, g);
  std::set<Term> excluded(ms.begin(), ms.end());
  for (const auto& m : all7) CHECK(ta_accepts(cmp, m) == !excluded.count(m));
}

TEST_CASE("ta format round-trips") {
  Ta hcc;
  hcc.name = "hcc";
  hcc.gamma = gamma_ch();
  hcc.states = {"sc", "st"};
  hcc.final = {"st"};
  hcc.rules = {{"c", {}, "sc"}, {"h", {"sc", "sc"}, "st"}, {"bot", {}, "sc"}};
  std::string text = print_ta(hcc);
  Ta back = parse_ta(text);
  CHECK(back.states == hcc.states);
  CHECK(back.final == hcc.final);
  CHECK(back.rules == hcc.rules);
  CHECK(print_ta(back) == text);
}
