#include "vtamlib/decisions.hpp"

#include <algorithm>

#include "vtamlib/encodings.hpp"
#include "vtamlib/transform.hpp"

namespace vtam {

namespace {

RelSysKind rel_sys_kind(RelationKind k) {
  switch (k) {
    case RelationKind::SynEq: return RelSysKind::SynEq;
    case RelationKind::StructEq: return RelSysKind::StructEq;
    default: throw InternalError("no relation system for relation none");
  }
}

void require_no_bt(const Vtam& a, const std::string& op) {
  if (a.has_bt_rules())
    throw UnsupportedError(op + " is not provided for brother-constrained automata");
}

}  // namespace

std::map<std::string, Ta> memory_languages(const Vtam& a, const DecisionBudget& b) {
  require_no_bt(a, "memory-language computation");
  if (a.has_neg_rules())
    throw UnsupportedError(
        "memory-language computation requires positive constraints only; "
        "run negative elimination first");
  validate_rules_only(a);

  Vtam pruned = prune_unreachable_rules(a);
  SatContext ctx(with_bot(a.gamma));
  std::vector<Clause> clauses = tam_to_clauses(ctx, pruned);
  if (pruned.has_guarded_rules(Guard::RelPos)) {
    auto rel = relation_system(ctx, rel_sys_kind(a.relation));
    clauses.insert(clauses.end(), rel.begin(), rel.end());
  }
  SaturatedSet sat = saturate(ctx, std::move(clauses), b.sat);
  MemoryTaSet mts = extract_memory_ta(ctx, sat);

  std::map<std::string, Ta> out;
  for (const auto& q : a.states) out[q] = mts.for_pred(ctx.state_pred(q), "M_" + q);
  return out;
}

std::vector<Term> equivalence_class(RelationKind kind, const Term& m,
                                    const RankedSignature& gamma) {
  switch (kind) {
    case RelationKind::SynEq: return {m};
    case RelationKind::StructEq: {
      // every relabeling of m's shape: leaves from gamma_0 + bot, inner
      // nodes from gamma_2
      RankedSignature gb = with_bot(gamma);
      std::vector<std::string> leaves = gb.constants();
      std::vector<std::string> inners = gamma.binaries();
      struct Rec {
        const std::vector<std::string>& leaves;
        const std::vector<std::string>& inners;
        std::vector<Term> run(const Term& shape) {
          std::vector<Term> out;
          if (shape.is_leaf()) {
            for (const auto& c : leaves) out.emplace_back(c);
            return out;
          }
          auto ls = run(shape.children()[0]);
          auto rs = run(shape.children()[1]);
          for (const auto& f : inners)
            for (const auto& l : ls)
              for (const auto& r : rs) out.push_back(Term(f, {l, r}));
          return out;
        }
      };
      return Rec{leaves, inners}.run(m);
    }
    default: throw InternalError("equivalence_class: relation none");
  }
}

// ---- negative-constraint elimination ----------------------------------------

namespace {

std::string fresh_prefix(const Vtam& a, const std::string& base) {
  std::set<std::string> used;
  for (const auto& s : a.sigma.base.symbols()) used.insert(s.name);
  for (const auto& q : a.states) used.insert(q);
  std::string p = base;
  int i = 0;
  while (true) {
    bool clash = false;
    for (const auto& u : used)
      if (u.rfind(p, 0) == 0) clash = true;
    if (!clash) return p;
    p = base + std::to_string(++i);
  }
}

Ta universal_ta(const RankedSignature& gamma_with_bot) {
  Ta b;
  b.name = "all";
  b.gamma = gamma_with_bot;
  b.states = {"s"};
  b.final = {"s"};
  for (const auto& s : gamma_with_bot.symbols()) {
    if (s.arity == 0)
      b.rules.push_back({s.name, {}, "s"});
    else
      b.rules.push_back({s.name, {"s", "s"}, "s"});
  }
  return b;
}

struct NegSite {
  std::size_t rule_index;
  int kept_side;  // 1 for cint1 (partner is q2), 2 for cint2 (partner is q1)
  std::string partner_state;
};

std::optional<NegSite> first_negative(const Vtam& a) {
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const Rule& r = a.rules[i];
    if (r.guard != Guard::RelNeg) continue;
    int side = r.action == ActionKind::Keep1 ? 1 : 2;
    return NegSite{i, side, side == 1 ? r.q2 : r.q1};
  }
  return std::nullopt;
}

Vtam elim_rec(Vtam a, const DecisionBudget& b);

// States whose rules can influence the memory language of `q`: the least
// set containing q and closed under "left states of rules targeting a cone
// state" (partners gate firing, so both sons count).
std::set<std::string> dependency_cone(const Vtam& a, const std::string& q) {
  std::set<std::string> cone = {q};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& r : a.rules) {
      if (!cone.count(r.target)) continue;
      if (!r.q1.empty() && cone.insert(r.q1).second) grew = true;
      if (!r.q2.empty() && cone.insert(r.q2).second) grew = true;
    }
  }
  return cone;
}

// One application of the witness construction: a memory of M(a, partner)
// outside `found`, or nullopt when the difference is empty.
std::optional<Term> find_new_memory(const Vtam& a, const NegSite& site,
                                    const std::vector<Term>& found, const DecisionBudget& b) {
  Vtam work = a;
  const Rule rho = a.rules[site.rule_index];
  RankedSignature gb = with_bot(a.gamma);

  // complement automata of the classes of each found memory, plus the
  // positive replacement rules that stand in for rho on those witnesses
  int k = 0;
  for (const auto& m : found) {
    auto cls = equivalence_class(a.relation, m, a.gamma);
    Ta cmp = ta_complement_of_finite_set(cls, gb);
    VtamFragment frag =
        lift_ta_to_memory(cmp, fresh_prefix(work, "cw" + std::to_string(k++)));
    merge_fragment(work, frag);
    // a positive rule per final state of the complement automaton
    for (const auto& f : cmp.final) {
      Rule pos = rho;
      pos.guard = Guard::RelPos;
      (site.kept_side == 1 ? pos.q2 : pos.q1) = frag.state_for.at(f);
      work.rules.push_back(pos);
    }
  }

  // drop rho itself; the remaining negatives are eliminated recursively
  work.rules.erase(work.rules.begin() + static_cast<std::ptrdiff_t>(site.rule_index));

  // negatives that cannot feed the partner state leave its memory language
  // untouched and are dropped for this query, which keeps the recursion
  // depth at the number of *entangled* negative rules
  auto cone = dependency_cone(work, site.partner_state);
  std::vector<Rule> kept;
  for (auto& r : work.rules)
    if (r.guard != Guard::RelNeg || cone.count(r.target)) kept.push_back(std::move(r));
  work.rules = std::move(kept);

  Vtam positive = elim_rec(std::move(work), b);

  auto ml = memory_languages(positive, b);
  Ta lang = ml.at(site.partner_state);
  Ta diff = found.empty() ? lang
                          : ta_product(lang, ta_complement_of_finite_set(found, gb),
                                       TaProductMode::Intersect);
  if (ta_is_empty(diff)) return std::nullopt;
  return ta_witness(diff);
}

Vtam elim_rec(Vtam a, const DecisionBudget& b) {
  auto site = first_negative(a);
  if (!site) return a;

  const Rule rho = a.rules[site->rule_index];

  auto m1 = find_new_memory(a, *site, {}, b);
  if (!m1) {
    // the partner state has an empty memory language: the rule never fires
    a.rules.erase(a.rules.begin() + static_cast<std::ptrdiff_t>(site->rule_index));
    return elim_rec(std::move(a), b);
  }

  std::vector<Term> found = {*m1};
  auto class1 = equivalence_class(a.relation, *m1, a.gamma);
  std::set<Term> class1_set(class1.begin(), class1.end());
  std::size_t n1 = class1.size();

  bool outside_class = false;
  bool exhausted = false;
  while (!outside_class && !exhausted) {
    auto m = find_new_memory(a, *site, found, b);
    if (!m) {
      exhausted = true;
    } else if (!class1_set.count(*m)) {
      outside_class = true;
    } else {
      found.push_back(*m);
      if (found.size() > n1)
        throw InternalError("equivalence class bound exceeded during elimination");
    }
  }

  if (outside_class) {
    // two classes are reachable at the partner: the negative test always has
    // a witness, so the rule degrades to a positive test against a state
    // carrying every memory (reflexivity makes it fire unconditionally).
    Ta all = universal_ta(with_bot(a.gamma));
    VtamFragment frag = lift_ta_to_memory(all, fresh_prefix(a, "cu"));
    merge_fragment(a, frag);
    Rule repl = rho;
    repl.guard = Guard::RelPos;
    (site->kept_side == 1 ? repl.q2 : repl.q1) = frag.state_for.at("s");
    a.rules[site->rule_index] = repl;
    return elim_rec(std::move(a), b);
  }

  // the partner's memory language is exactly `found`, a subset of one
  // class: the rule fires iff the kept memory is outside that class
  Ta cmp = ta_complement_of_finite_set(class1, with_bot(a.gamma));
  VtamFragment frag = lift_ta_to_memory(cmp, fresh_prefix(a, "cc"));
  merge_fragment(a, frag);
  std::vector<Rule> repls;
  for (const auto& f : cmp.final) {
    Rule repl = rho;
    repl.guard = Guard::RelPos;
    (site->kept_side == 1 ? repl.q2 : repl.q1) = frag.state_for.at(f);
    repls.push_back(repl);
  }
  a.rules.erase(a.rules.begin() + static_cast<std::ptrdiff_t>(site->rule_index));
  for (auto& r : repls) a.rules.push_back(std::move(r));
  return elim_rec(std::move(a), b);
}

}  // namespace

Vtam eliminate_negative(const Vtam& a, const DecisionBudget& b) {
  require_no_bt(a, "negative-constraint elimination");
  if (a.relation == RelationKind::None) return a;  // nothing to eliminate
  validate(a);
  return elim_rec(a, b);
}

// ---- emptiness ----------------------------------------------------------------

bool is_empty(const Vtam& a, const DecisionBudget& b) {
  require_no_bt(a, "emptiness");
  validate(a);
  Vtam positive = a.has_neg_rules() ? eliminate_negative(a, b) : a;
  auto ml = memory_languages(positive, b);
  for (const auto& q : a.final)
    if (!ta_is_empty(ml.at(q))) return false;
  return true;
}

Term witness(const Vtam& a, const DecisionBudget& b) {
  if (is_empty(a, b)) throw ValidationError({"witness requested on an empty automaton"});
  TermEnumerator en(a.sigma.base, {b.witness_max_size, b.witness_max_count});
  Term t;
  while (en.next(t))
    if (accepts_by_runs(a, t, b.run)) return t;
  throw BudgetError("witness search budget exhausted on a nonempty automaton");
}

// ---- membership ----------------------------------------------------------------

namespace {

// The singleton automaton A_t for unconstrained membership: states are the
// positions of t, categories are inherited, pushes use fresh per-position
// memory symbols.
Vtam singleton_automaton(const Vtam& a, const Term& t) {
  Vtam out;
  out.name = "single";
  out.sigma = a.sigma;
  out.relation = RelationKind::None;

  struct Build {
    const Vtam& a;
    Vtam& out;
    int counter = 0;

    std::optional<Term> rec(const Term& t, std::string& state_out) {
      std::string me = "p" + std::to_string(counter++);
      out.states.push_back(me);
      state_out = me;

      Category cat = a.sigma.category(t.root());
      if (t.is_leaf()) {
        if (cat == Category::Int0) {
          out.rules.push_back({t.root(), "", "", Guard::None, ActionKind::EmitBot, "", me});
          return Term(kBot);
        }
        std::string c = "k" + std::to_string(counter++);
        out.gamma.add(c, 0);
        out.rules.push_back({t.root(), "", "", Guard::None, ActionKind::PushConst, c, me});
        return Term(c);
      }

      std::string s1, s2;
      auto m1 = rec(t.children()[0], s1);
      auto m2 = rec(t.children()[1], s2);
      if (!m1 || !m2) return std::nullopt;

      switch (cat) {
        case Category::Push: {
          std::string h = "h" + std::to_string(counter++);
          out.gamma.add(h, 2);
          out.rules.push_back({t.root(), s1, s2, Guard::None, ActionKind::PushBin, h, me});
          return Term(h, {*m1, *m2});
        }
        case Category::Int1:
          out.rules.push_back({t.root(), s1, s2, Guard::None, ActionKind::Keep1, "", me});
          return m1;
        case Category::Int2:
          out.rules.push_back({t.root(), s1, s2, Guard::None, ActionKind::Keep2, "", me});
          return m2;
        default: {
          if (!is_pop(cat)) throw InternalError("constrained symbol in unconstrained path");
          const Term& m = pop_side(cat) == 1 ? *m1 : *m2;
          if (m == Term(kBot)) {
            out.rules.push_back(pop_rule(t.root(), s1, s2, cat, "", me));
            return Term(kBot);
          }
          if (m.is_leaf()) return std::nullopt;  // pop over a constant memory: stuck
          out.rules.push_back(pop_rule(t.root(), s1, s2, cat, m.root(), me));
          return m.children()[static_cast<std::size_t>(pop_child(cat)) - 1];
        }
      }
    }
  };

  Build build{a, out};
  std::string root_state;
  auto mem = build.rec(t, root_state);
  if (mem) out.final.insert(root_state);
  return out;
}

// Membership for structural constraints: decorate states with the subterm
// read, resolving every guard from the input-determined memory shapes.
bool member_structural(const Vtam& a, const Term& t, const DecisionBudget& b) {
  std::map<Term, std::optional<MemShape>> shape;
  std::map<Term, int> index;
  struct Collect {
    const Vtam& a;
    std::map<Term, std::optional<MemShape>>& shape;
    std::map<Term, int>& index;
    void rec(const Term& s) {
      if (index.count(s)) return;
      for (const auto& c : s.children()) rec(c);
      int i = static_cast<int>(index.size());
      index[s] = i;
      shape[s] = memory_shape(a.sigma, s);
    }
  };
  Collect{a, shape, index}.rec(t);

  Vtam prod;
  prod.name = "memberx";
  prod.relation = RelationKind::None;
  prod.gamma = a.gamma;
  prod.sigma.base = a.sigma.base;
  for (const auto& [sym, cat] : a.sigma.category_of) {
    Category c = cat;
    if (c == Category::CInt1) c = Category::Int1;
    if (c == Category::CInt2) c = Category::Int2;
    prod.sigma.category_of[sym] = c;
  }

  auto st = [&](const Term& s, const std::string& q) {
    return "u" + std::to_string(index.at(s)) + "_" + q;
  };
  for (const auto& [s, i] : index)
    for (const auto& q : a.states) prod.states.push_back(st(s, q));
  for (const auto& qf : a.final)
    if (a.has_state(qf)) prod.final.insert(st(t, qf));

  for (const auto& [s, i] : index) {
    if (!shape.at(s)) continue;  // shape-stuck subterms never run
    for (const auto& r : a.rules) {
      if (r.symbol != s.root()) continue;
      if (s.is_leaf()) {
        Rule nr = r;
        nr.target = st(s, r.target);
        prod.rules.push_back(std::move(nr));
        continue;
      }
      const Term& s1 = s.children()[0];
      const Term& s2 = s.children()[1];
      if (!shape.at(s1) || !shape.at(s2)) continue;
      bool eq = struct_eq(*shape.at(s1), *shape.at(s2));
      if (r.guard == Guard::RelPos && !eq) continue;
      if (r.guard == Guard::RelNeg && eq) continue;
      Rule nr = r;
      nr.guard = Guard::None;
      nr.q1 = st(s1, r.q1);
      nr.q2 = st(s2, r.q2);
      nr.target = st(s, r.target);
      prod.rules.push_back(std::move(nr));
    }
  }
  return !is_empty(prod, b);
}

}  // namespace

bool member(const Vtam& a, const Term& t, const DecisionBudget& b) {
  validate(a);
  if (!well_formed(t, a.sigma.base))
    throw ValidationError({"term is not well-formed over the automaton's signature"});

  if (a.has_bt_rules()) return accepts_by_runs(a, t, b.run);
  if (is_deterministic(a) && is_complete(a)) return accepts_by_runs(a, t, b.run);

  switch (a.relation) {
    case RelationKind::None: {
      Vtam single = singleton_automaton(a, t);
      if (single.final.empty()) return false;  // shape-stuck input
      return !is_empty(vtam_intersection(single, a), b);
    }
    case RelationKind::StructEq: return member_structural(a, t, b);
    case RelationKind::SynEq: return accepts_by_runs(a, t, b.run);
  }
  return false;
}

// ---- inclusion / universality ----------------------------------------------------

namespace {

void require_complementable(const Vtam& a, const std::string& op) {
  if (a.relation == RelationKind::SynEq)
    throw UnsupportedError(
        op + " is undecidable for syntactic equality/disequality constraints "
         "(universality undecidability); refusing");
}

}  // namespace

bool included(const Vtam& a1, const Vtam& a2, const DecisionBudget& b) {
  require_complementable(a1, "inclusion");
  require_complementable(a2, "inclusion");
  return is_empty(vtam_intersection(a1, vtam_complement(a2)), b);
}

bool universal(const Vtam& a, const DecisionBudget& b) {
  require_complementable(a, "universality");
  return is_empty(vtam_complement(a), b);
}

bool equivalent(const Vtam& a1, const Vtam& a2, const DecisionBudget& b) {
  return included(a1, a2, b) && included(a2, a1, b);
}

}  // namespace vtam
