#ifndef VTAMLIB_SATURATION_HPP
#define VTAMLIB_SATURATION_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vtamlib/automaton.hpp"
#include "vtamlib/regular_ta.hpp"

namespace vtam {

// ---- Predicates ---------------------------------------------------------
//
// The finite predicate universe of the saturation engine:
//   State(q)      unary, memories reachable in automaton state q
//   SState(s)     unary, states of the relation component (S_top included)
//   Split(S,R)    unary, "some R-related term satisfies every member of S"
//   Prop(S)       nullary, "the member languages have a nonempty intersection"
//   Rel(R)        binary, the relation predicate itself

enum class PredKind { State, SState, Split, Prop, Rel };

struct PredInfo {
  PredKind kind;
  std::string name;          // State/SState/Rel: source name
  std::vector<int> members;  // Split/Prop: sorted member predicate ids
  int rel = -1;              // Split: relation predicate id
  bool fwd = true;           // Split: orientation of the defining relation atom
};

struct Arg {
  enum K { Var, Cst, Fun } k = Var;
  int v = -1;          // Var index
  int sym = -1;        // symbol id for Cst / Fun
  int a = -1, b = -1;  // Fun child variables (always plain variables)

  static Arg var(int i) { return {Var, i, -1, -1, -1}; }
  static Arg cst(int s) { return {Cst, -1, s, -1, -1}; }
  static Arg fun(int s, int x, int y) { return {Fun, -1, s, x, y}; }

  friend auto operator<=>(const Arg&, const Arg&) = default;
};

struct Atom {
  int pred = -1;
  std::vector<Arg> args;  // 0 (prop), 1 (unary) or 2 (rel)

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Clause families; inputs are Relation/Automaton clauses, everything derived
// carries one of the six generated tags.
enum class FormTag {
  Relation,      // (A)-(F)
  Pop,           // (3),(4),(3b),(4b)
  Push,          // (P1)-(P4)
  Intermediate,  // (I1)-(I4)
  Alternating,   // (A1),(A2)
  Split,         // (S1)-(S5)
  Propositional  // (E1)-(E3)
};

std::string to_string(FormTag t);

struct Clause {
  std::vector<Atom> body;
  Atom head;
  FormTag tag = FormTag::Push;

  friend auto operator<=>(const Clause&, const Clause&) = default;
};

enum class RelSysKind { SynEq, StructEq, Universal };

struct SatBudget {
  std::size_t max_clauses = 2000000;
};

// Shared interning tables for one saturation run.
class SatContext {
public:
  explicit SatContext(const RankedSignature& gamma_with_bot);

  const RankedSignature& gamma() const { return gamma_; }
  int symbol_id(const std::string& name) const;
  const std::string& symbol_name(int id) const { return sym_names_[id]; }

  int state_pred(const std::string& q);          // creates on demand
  int sstate_pred(const std::string& s);
  int s_top();
  int rel_pred(const std::string& name);
  int split_pred(std::vector<int> members, int rel, bool fwd);
  int prop_pred(std::vector<int> members);

  const PredInfo& pred(int id) const { return preds_[id]; }
  std::size_t pred_count() const { return preds_.size(); }
  std::string pred_text(int id) const;
  std::string atom_text(const Atom& a) const;
  std::string clause_text(const Clause& c) const;

  // The chain condition table: for the built-in equivalences every pair of
  // relation states resolves to the same single relation. Kept as a map so
  // other regular relations could plug in richer tables.
  std::map<std::pair<int, int>, std::pair<int, int>> chain_resolver;

private:
  int intern(PredInfo info);

  RankedSignature gamma_;
  std::vector<std::string> sym_names_;
  std::map<std::string, int> sym_ids_;
  std::vector<PredInfo> preds_;
  std::map<std::string, int> by_key_;
};

// One Horn clause per transition rule, per the memory-language reading of
// the rules. Requires guards to be RelPos only.
std::vector<Clause> tam_to_clauses(SatContext& ctx, const Vtam& a);

// Clause axiomatisation of the built-in relations over gamma; also installs
// the chain resolver entries in the context.
std::vector<Clause> relation_system(SatContext& ctx, RelSysKind kind);

class SaturatedSet {
public:
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool has_prop_fact(int prop_pred_id) const;
  std::size_t count_tag(FormTag t) const;

private:
  friend SaturatedSet saturate(SatContext&, std::vector<Clause>, const SatBudget&);
  std::vector<Clause> clauses_;
};

// Resolution with the six-case selection strategy and eager splitting,
// closed under inference, with forward subsumption.
SaturatedSet saturate(SatContext& ctx, std::vector<Clause> input,
                      const SatBudget& budget = {});

// Exposed for white-box tests: eager splitting / chain collapsing of one
// clause. Returns the rewritten clause followed by any definition clauses.
std::vector<Clause> normalize_and_split(SatContext& ctx, Clause c);

// The plain-TA rendering of the saturated push clauses.
struct MemoryTaSet {
  Ta base;  // deterministic subset automaton over gamma (no finals)
  // predicate id -> the base states whose subset contains it
  std::map<int, std::set<std::string>> finals_of_pred;
  // readable dump of the alternating automaton (the push clauses)
  std::vector<std::string> push_clause_text;

  Ta for_pred(int pred, const std::string& name) const;
};

MemoryTaSet extract_memory_ta(const SatContext& ctx, const SaturatedSet& sat);

// Stable clause-by-clause dump: "<form_tag> | body => head".
std::string clause_trace(const SatContext& ctx, const SaturatedSet& sat);

// Structural upper bound on the number of distinct retained clauses;
// saturates at a large double. Used by the termination monotone check.
double clause_universe_bound(const SatContext& ctx);

}  // namespace vtam

#endif
