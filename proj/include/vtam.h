/* C interface to the vtam library: visibly tree automata with memory and
 * constraints, behind opaque handles and status codes.
 *
 * Conventions:
 *   - Decision entry points answer through the return status: VTAM_OK (0)
 *     means yes, VTAM_NO (1) means no. Everything >= 2 is an error and
 *     vtam_last_error() carries the diagnostic text.
 *   - Strings returned through out-parameters are heap-allocated; release
 *     them with vtam_str_free. Handles are released with the matching
 *     *_free call.
 *   - `budget` <= 0 selects the built-in defaults; a positive value caps the
 *     run/search/saturation budgets at that many units.
 */
#ifndef VTAM_H
#define VTAM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct vtam_aut vtam_aut; /* a visibly tree automaton with memory */
typedef struct vtam_ta vtam_ta;   /* a plain bottom-up tree automaton */

typedef enum {
  VTAM_OK = 0,            /* success / boolean yes */
  VTAM_NO = 1,            /* boolean no */
  VTAM_E_INVALID = 2,     /* validation failed */
  VTAM_E_UNSUPPORTED = 3, /* operation refused by the theory */
  VTAM_E_BUDGET = 4,      /* a search or saturation budget ran out */
  VTAM_E_PARSE = 5,       /* text or file could not be parsed / io error */
  VTAM_E_INTERNAL = 7     /* internal invariant failure */
} vtam_status;

/* Diagnostic text of the most recent failing call on this thread. */
const char* vtam_last_error(void);

void vtam_str_free(char* s);
void vtam_aut_free(vtam_aut* a);
void vtam_ta_free(vtam_ta* t);

/* ---- construction and text formats ---- */

vtam_status vtam_aut_parse(const char* text, vtam_aut** out);
vtam_status vtam_aut_print(const vtam_aut* a, char** out);
vtam_status vtam_ta_print(const vtam_ta* t, char** out);

/* ---- validation and structure ---- */

/* VTAM_OK when all invariants hold, VTAM_E_INVALID with diagnostics else. */
vtam_status vtam_check(const vtam_aut* a);
vtam_status vtam_is_deterministic(const vtam_aut* a);

/* ---- transformations ---- */

vtam_status vtam_determinize(const vtam_aut* a, vtam_aut** out);
vtam_status vtam_complete(const vtam_aut* a, vtam_aut** out);
vtam_status vtam_complement(const vtam_aut* a, vtam_aut** out);
vtam_status vtam_union(const vtam_aut* a, const vtam_aut* b, vtam_aut** out);
vtam_status vtam_intersection(const vtam_aut* a, const vtam_aut* b, vtam_aut** out);
vtam_status vtam_eliminate_negative(const vtam_aut* a, vtam_aut** out);

/* ---- decision procedures ---- */

vtam_status vtam_member(const vtam_aut* a, const char* term_text, long budget);
/* VTAM_OK = empty, VTAM_NO = nonempty. When nonempty and witness_out is not
 * NULL, a minimal accepted term is stored there. */
vtam_status vtam_empty(const vtam_aut* a, long budget, char** witness_out);
vtam_status vtam_included(const vtam_aut* a, const vtam_aut* b, long budget,
                          char** counterexample_out);
vtam_status vtam_universal(const vtam_aut* a, long budget);

/* Memory language of one state as a plain tree automaton. */
vtam_status vtam_memlang(const vtam_aut* a, const char* state, vtam_ta** out);
/* Stable clause-by-clause dump of the saturated set used by memlang. */
vtam_status vtam_memlang_trace(const vtam_aut* a, char** out);

/* Accepted terms up to max_size, one per line (may be empty). */
vtam_status vtam_enum_accepted(const vtam_aut* a, int max_size, long budget, char** lines_out);

/* ---- generators ---- */

/* DIMACS-like cnf text -> encoded term + automaton; membership of the term
 * in the automaton is equivalent to satisfiability. */
vtam_status vtam_sat3(const char* dimacs_text, char** term_out, vtam_aut** aut_out);

/* name: balanced | redblack | powerlist. notes_out (optional) receives a
 * short description of the encoding. */
vtam_status vtam_example(const char* name, vtam_aut** aut_out, char** notes_out);

/* Translate a source-language term (grammar of the chosen example) into the
 * automaton's signature, e.g. g(a,a) -> g2(g1(a,a),g0) for `balanced`. */
vtam_status vtam_example_translate(const char* name, const char* source_term, char** out);

#ifdef __cplusplus
}
#endif

#endif /* VTAM_H */
