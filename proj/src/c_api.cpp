#include "vtam.h"

#include <cstring>
#include <sstream>

#include "vtamlib/decisions.hpp"
#include "vtamlib/encodings.hpp"
#include "vtamlib/format.hpp"
#include "vtamlib/oracle.hpp"
#include "vtamlib/transform.hpp"

struct vtam_aut {
  vtam::Vtam a;
};
struct vtam_ta {
  vtam::Ta t;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vtam::DecisionBudget budget_of(long budget) {
  vtam::DecisionBudget b;
  if (budget > 0) {
    b.sat.max_clauses = static_cast<std::size_t>(budget);
    b.run.max_configs_per_node = static_cast<std::size_t>(budget);
    b.witness_max_count = static_cast<std::size_t>(budget);
  }
  return b;
}

template <typename F>
vtam_status guarded(F&& fn) {
  try {
    return fn();
  } catch (const vtam::ValidationError& e) {
    g_last_error = e.what();
    return VTAM_E_INVALID;
  } catch (const vtam::UnsupportedError& e) {
    g_last_error = e.what();
    return VTAM_E_UNSUPPORTED;
  } catch (const vtam::BudgetError& e) {
    g_last_error = e.what();
    return VTAM_E_BUDGET;
  } catch (const vtam::ParseError& e) {
    g_last_error = e.what();
    return VTAM_E_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VTAM_E_INTERNAL;
  }
}

vtam_status require(bool cond, const char* what) {
  if (cond) return VTAM_OK;
  g_last_error = what;
  return VTAM_E_PARSE;
}

}  // namespace

extern "C" {

const char* vtam_last_error(void) { return g_last_error.c_str(); }

void vtam_str_free(char* s) { std::free(s); }
void vtam_aut_free(vtam_aut* a) { delete a; }
void vtam_ta_free(vtam_ta* t) { delete t; }

vtam_status vtam_aut_parse(const char* text, vtam_aut** out) {
  if (require(text && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    auto a = new vtam_aut{vtam::parse_vtam(text)};
    *out = a;
    return VTAM_OK;
  });
}

vtam_status vtam_aut_print(const vtam_aut* a, char** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = dup_string(vtam::print_vtam(a->a));
    return VTAM_OK;
  });
}

vtam_status vtam_ta_print(const vtam_ta* t, char** out) {
  if (require(t && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = dup_string(vtam::print_ta(t->t));
    return VTAM_OK;
  });
}

vtam_status vtam_check(const vtam_aut* a) {
  if (require(a != nullptr, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    vtam::validate(a->a);
    return VTAM_OK;
  });
}

vtam_status vtam_is_deterministic(const vtam_aut* a) {
  if (require(a != nullptr, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    vtam::validate(a->a);
    return vtam::is_deterministic(a->a) ? VTAM_OK : VTAM_NO;
  });
}

vtam_status vtam_determinize(const vtam_aut* a, vtam_aut** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::determinize(a->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_complete(const vtam_aut* a, vtam_aut** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::complete(a->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_complement(const vtam_aut* a, vtam_aut** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::vtam_complement(a->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_union(const vtam_aut* a, const vtam_aut* b, vtam_aut** out) {
  if (require(a && b && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::vtam_union(a->a, b->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_intersection(const vtam_aut* a, const vtam_aut* b, vtam_aut** out) {
  if (require(a && b && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::vtam_intersection(a->a, b->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_eliminate_negative(const vtam_aut* a, vtam_aut** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    *out = new vtam_aut{vtam::eliminate_negative(a->a)};
    return VTAM_OK;
  });
}

vtam_status vtam_member(const vtam_aut* a, const char* term_text, long budget) {
  if (require(a && term_text, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    vtam::Term t = vtam::parse_term(term_text, a->a.sigma.base);
    return vtam::member(a->a, t, budget_of(budget)) ? VTAM_OK : VTAM_NO;
  });
}

vtam_status vtam_empty(const vtam_aut* a, long budget, char** witness_out) {
  if (require(a != nullptr, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    auto b = budget_of(budget);
    if (vtam::is_empty(a->a, b)) {
      if (witness_out) *witness_out = nullptr;
      return VTAM_OK;
    }
    if (witness_out) *witness_out = dup_string(vtam::print_term(vtam::witness(a->a, b)));
    return VTAM_NO;
  });
}

vtam_status vtam_included(const vtam_aut* a, const vtam_aut* b, long budget,
                          char** counterexample_out) {
  if (require(a && b, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    auto bud = budget_of(budget);
    if (vtam::included(a->a, b->a, bud)) {
      if (counterexample_out) *counterexample_out = nullptr;
      return VTAM_OK;
    }
    if (counterexample_out) {
      *counterexample_out = nullptr;
      // bounded search for a separating term
      vtam::TermEnumerator en(a->a.sigma.base, {bud.witness_max_size, bud.witness_max_count});
      vtam::Term t;
      while (en.next(t)) {
        if (vtam::accepts_by_runs(a->a, t, bud.run) &&
            !vtam::accepts_by_runs(b->a, t, bud.run)) {
          *counterexample_out = dup_string(vtam::print_term(t));
          break;
        }
      }
    }
    return VTAM_NO;
  });
}

vtam_status vtam_universal(const vtam_aut* a, long budget) {
  if (require(a != nullptr, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded(
      [&] { return vtam::universal(a->a, budget_of(budget)) ? VTAM_OK : VTAM_NO; });
}

vtam_status vtam_memlang(const vtam_aut* a, const char* state, vtam_ta** out) {
  if (require(a && state && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    if (!a->a.has_state(state)) {
      g_last_error = std::string("unknown state '") + state + "'";
      return VTAM_E_INVALID;
    }
    auto ml = vtam::memory_languages(a->a);
    *out = new vtam_ta{ml.at(state)};
    return VTAM_OK;
  });
}

vtam_status vtam_memlang_trace(const vtam_aut* a, char** out) {
  if (require(a && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    vtam::SatContext ctx(vtam::with_bot(a->a.gamma));
    auto clauses = vtam::tam_to_clauses(ctx, a->a);
    if (a->a.has_guarded_rules(vtam::Guard::RelPos)) {
      auto kind = a->a.relation == vtam::RelationKind::SynEq ? vtam::RelSysKind::SynEq
                                                             : vtam::RelSysKind::StructEq;
      auto rel = vtam::relation_system(ctx, kind);
      clauses.insert(clauses.end(), rel.begin(), rel.end());
    }
    auto sat = vtam::saturate(ctx, std::move(clauses));
    *out = dup_string(vtam::clause_trace(ctx, sat));
    return VTAM_OK;
  });
}

vtam_status vtam_enum_accepted(const vtam_aut* a, int max_size, long budget,
                               char** lines_out) {
  if (require(a && lines_out && max_size >= 0, "bad argument") != VTAM_OK)
    return VTAM_E_PARSE;
  return guarded([&] {
    auto bud = budget_of(budget);
    vtam::TermEnumerator en(a->a.sigma.base,
                            {static_cast<std::size_t>(max_size), bud.witness_max_count});
    std::ostringstream os;
    vtam::Term t;
    while (en.next(t))
      if (vtam::accepts_by_runs(a->a, t, bud.run)) os << vtam::print_term(t) << "\n";
    *lines_out = dup_string(os.str());
    return VTAM_OK;
  });
}

vtam_status vtam_sat3(const char* dimacs_text, char** term_out, vtam_aut** aut_out) {
  if (require(dimacs_text && term_out && aut_out, "null argument") != VTAM_OK)
    return VTAM_E_PARSE;
  return guarded([&] {
    auto inst = vtam::encode_3sat(vtam::parse_dimacs(dimacs_text));
    *term_out = dup_string(vtam::print_term(inst.term));
    *aut_out = new vtam_aut{std::move(inst.automaton)};
    return VTAM_OK;
  });
}

vtam_status vtam_example(const char* name, vtam_aut** aut_out, char** notes_out) {
  if (require(name && aut_out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    auto e = vtam::build_example(name);
    *aut_out = new vtam_aut{std::move(e.automaton)};
    if (notes_out) *notes_out = dup_string(e.notes);
    return VTAM_OK;
  });
}

vtam_status vtam_example_translate(const char* name, const char* source_term, char** out) {
  if (require(name && source_term && out, "null argument") != VTAM_OK) return VTAM_E_PARSE;
  return guarded([&] {
    auto e = vtam::build_example(name);
    vtam::Term src = vtam::parse_term(source_term, e.translation.source_sig);
    *out = dup_string(vtam::print_term(vtam::translate_term(e.translation, src)));
    return VTAM_OK;
  });
}

}  // extern "C"
