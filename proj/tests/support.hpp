#ifndef VTAM_TESTS_SUPPORT_HPP
#define VTAM_TESTS_SUPPORT_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "vtamlib/automaton.hpp"
#include "vtamlib/format.hpp"
#include "vtamlib/oracle.hpp"

namespace vtamtest {

using namespace vtam;

inline Rule rule(const std::string& sym, const std::string& q1, const std::string& q2,
                 Guard g, ActionKind act, const std::string& mem, const std::string& tgt) {
  return Rule{sym, q1, q2, g, act, mem, tgt};
}

inline Term tparse(const std::string& text, const Vtam& a) {
  return parse_term(text, a.sigma.base);
}

// Accepted terms up to `max_size` by exhaustive runs.
inline std::set<Term> accepted_upto(const Vtam& a, std::size_t max_size,
                                    std::size_t max_count = 500000) {
  std::set<Term> out;
  RunEvaluator ev(a);
  TermEnumerator en(a.sigma.base, {max_size, max_count});
  Term t;
  while (en.next(t))
    if (ev.accepts(t)) out.insert(t);
  return out;
}

// ---- random automaton generation -------------------------------------------

struct GenOptions {
  int max_states = 3;
  int max_binaries = 3;    // binary input symbols
  int max_constants = 2;   // constant input symbols
  int max_gamma = 2;       // memory symbols besides bot (one binary at least)
  bool allow_struct = true;
  bool allow_syn = false;  // syn automata are only used on specific paths
  bool allow_neg = true;   // negative guards (only with a relation)
  int max_neg = 2;         // elimination is exponential in the negative count
  bool allow_bt = false;
  bool visibly = true;     // false generates general TAMs (mixed categories)
  double rule_density = 0.5;
};

// Fills states, final states and rules of an automaton whose signatures and
// relation are already set.
inline void random_population(std::mt19937& rng, Vtam& a, const GenOptions& opt) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };

  std::vector<Category> bin_cats = {Category::Push, Category::Int1, Category::Int2,
                                    Category::Pop11, Category::Pop12, Category::Pop21,
                                    Category::Pop22};
  if (a.relation != RelationKind::None) {
    bin_cats.push_back(Category::CInt1);
    bin_cats.push_back(Category::CInt2);
  }
  if (opt.allow_bt) {
    bin_cats.push_back(Category::Bt1);
    bin_cats.push_back(Category::Bt2);
  }

  a.states.clear();
  a.final.clear();
  a.rules.clear();
  int n_states = pick(1, opt.max_states);
  for (int i = 0; i < n_states; ++i) a.states.push_back("q" + std::to_string(i));
  for (const auto& q : a.states)
    if (chance(0.5)) a.final.insert(q);
  if (a.final.empty()) a.final.insert(a.states[0]);

  auto any_state = [&] {
    return a.states[static_cast<std::size_t>(pick(0, n_states - 1))];
  };
  auto bin_mems = a.gamma.binaries();
  auto any_bin_mem = [&] {
    return bin_mems[static_cast<std::size_t>(pick(0, static_cast<int>(bin_mems.size()) - 1))];
  };

  for (const auto& s : a.sigma.base.symbols()) {
    if (s.arity == 0) {
      // at least one rule per constant so languages are not trivially empty
      int rules = 1 + (chance(opt.rule_density) ? 1 : 0);
      for (int i = 0; i < rules; ++i)
        a.rules.push_back(rule(s.name, "", "", Guard::None, ActionKind::EmitBot, "",
                               any_state()));
      continue;
    }

    int tries = 1 + (chance(opt.rule_density) ? 1 : 0) + (chance(opt.rule_density) ? 1 : 0);
    for (int i = 0; i < tries; ++i) {
      Category rc = opt.visibly ? a.sigma.category(s.name)
                                : bin_cats[static_cast<std::size_t>(
                                      pick(0, static_cast<int>(bin_cats.size()) - 1))];
      switch (rc) {
        case Category::Push:
          a.rules.push_back(rule(s.name, any_state(), any_state(), Guard::None,
                                 ActionKind::PushBin, any_bin_mem(), any_state()));
          break;
        case Category::Int1:
        case Category::Int2:
          a.rules.push_back(rule(s.name, any_state(), any_state(), Guard::None,
                                 rc == Category::Int1 ? ActionKind::Keep1 : ActionKind::Keep2,
                                 "", any_state()));
          break;
        case Category::CInt1:
        case Category::CInt2: {
          Guard g = (opt.allow_neg && chance(0.4)) ? Guard::RelNeg : Guard::RelPos;
          a.rules.push_back(rule(s.name, any_state(), any_state(), g,
                                 rc == Category::CInt1 ? ActionKind::Keep1 : ActionKind::Keep2,
                                 "", any_state()));
          break;
        }
        case Category::Bt1:
        case Category::Bt2: {
          Guard g = chance(0.5) ? Guard::BtEq : Guard::BtNeq;
          a.rules.push_back(rule(s.name, any_state(), any_state(), g,
                                 rc == Category::Bt1 ? ActionKind::Keep1 : ActionKind::Keep2,
                                 "", any_state()));
          break;
        }
        default: {
          std::string popped = chance(0.6) ? any_bin_mem() : "";
          a.rules.push_back(pop_rule(s.name, any_state(), any_state(), rc, popped,
                                     any_state()));
          break;
        }
      }
    }
  }

  // dedupe identical rules
  std::sort(a.rules.begin(), a.rules.end());
  a.rules.erase(std::unique(a.rules.begin(), a.rules.end()), a.rules.end());

  // keep negative-guard counts desk-scale
  int negs = 0;
  for (auto& r : a.rules)
    if (r.guard == Guard::RelNeg && ++negs > opt.max_neg) r.guard = Guard::RelPos;
  std::sort(a.rules.begin(), a.rules.end());
  a.rules.erase(std::unique(a.rules.begin(), a.rules.end()), a.rules.end());
}

// Deterministic pseudo-random automaton generator for differential tests.
// Constants are always int0, so memory shapes never get stuck on pops.
inline Vtam random_vtam(std::mt19937& rng, const GenOptions& opt) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  Vtam a;
  a.name = "gen";

  std::vector<RelationKind> rels = {RelationKind::None};
  if (opt.allow_struct) rels.push_back(RelationKind::StructEq);
  if (opt.allow_syn) rels.push_back(RelationKind::SynEq);
  a.relation = rels[static_cast<std::size_t>(pick(0, static_cast<int>(rels.size()) - 1))];

  std::vector<Category> bin_cats = {Category::Push, Category::Int1, Category::Int2,
                                    Category::Pop11, Category::Pop12, Category::Pop21,
                                    Category::Pop22};
  if (a.relation != RelationKind::None) {
    bin_cats.push_back(Category::CInt1);
    bin_cats.push_back(Category::CInt2);
  }
  if (opt.allow_bt) {
    bin_cats.push_back(Category::Bt1);
    bin_cats.push_back(Category::Bt2);
  }

  int n_const = pick(1, opt.max_constants);
  int n_bin = pick(1, opt.max_binaries);
  for (int i = 0; i < n_const; ++i) {
    std::string c = "a" + std::to_string(i);
    a.sigma.base.add(c, 0);
    a.sigma.category_of[c] = Category::Int0;
  }
  for (int i = 0; i < n_bin; ++i) {
    std::string f = "f" + std::to_string(i);
    a.sigma.base.add(f, 2);
    Category c = i == 0 ? Category::Push  // make pushes likely so memories matter
                        : bin_cats[static_cast<std::size_t>(
                              pick(0, static_cast<int>(bin_cats.size()) - 1))];
    a.sigma.category_of[f] = c;
  }

  int n_gamma = pick(1, opt.max_gamma);
  a.gamma.add("h0", 2);
  for (int i = 1; i < n_gamma; ++i)
    a.gamma.add(i % 2 ? "k" + std::to_string(i) : "h" + std::to_string(i), i % 2 ? 0 : 2);

  random_population(rng, a, opt);
  return a;
}

}  // namespace vtamtest

#endif
