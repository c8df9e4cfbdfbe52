#ifndef VTAMLIB_ENCODINGS_HPP
#define VTAMLIB_ENCODINGS_HPP

#include <map>
#include <string>
#include <vector>

#include "vtamlib/automaton.hpp"
#include "vtamlib/regular_ta.hpp"

namespace vtam {

// Hole markers inside context terms: _1, _2, ... in left-to-right order.
std::string hole_name(int i);
bool is_hole(const std::string& sym);

// One source symbol rewritten into a context of target symbols.
struct ContextDef {
  std::string source;
  Term context;  // over target symbols and hole markers
};

struct Translation {
  RankedSignature source_sig;  // relaxed: any arities
  std::vector<ContextDef> defs;

  const ContextDef& def_for(const std::string& source_symbol) const;
};

// Homomorphic replacement of every source symbol by its context.
Term translate_term(const Translation& tr, const Term& t);

// Regular language of well-formed translations over the target signature.
Ta translation_guard_ta(const Translation& tr, const RankedSignature& target_sig);

struct ExampleBundle {
  Vtam automaton;
  Translation translation;
  std::string notes;  // human-readable description of the encoding
};

// name: balanced | redblack | powerlist
ExampleBundle build_example(const std::string& name);

// ---- 3-SAT -----------------------------------------------------------------

struct Cnf {
  int vars = 0;
  std::vector<std::vector<int>> clauses;  // literals: +v / -v, deduplicated
};

// "p cnf <n> <m>" header, clause lines of up to three literals ended by 0,
// 'c' comment lines. A variable may appear at most once per clause.
Cnf parse_dimacs(const std::string& text);

struct Sat3Instance {
  Term term;
  Vtam automaton;
};

// The syntactic-equality membership instance: member(automaton, term) holds
// iff the formula is satisfiable.
Sat3Instance encode_3sat(const Cnf& cnf);

// ---- lifting plain TAs into memory languages --------------------------------

struct VtamFragment {
  std::vector<SymbolDecl> symbols;  // fresh input symbols
  std::map<std::string, Category> categories;
  std::vector<std::string> states;
  std::vector<Rule> rules;
  std::map<std::string, std::string> state_for;  // TA state -> fragment state
};

// Fresh push/int0 input symbols realizing M(fragment, state_for[s]) = L(b, s).
// All fresh names carry `prefix`.
VtamFragment lift_ta_to_memory(const Ta& b, const std::string& prefix);

// Splices a fragment into an automaton (symbols, states, rules).
void merge_fragment(Vtam& a, const VtamFragment& frag);

}  // namespace vtam

#endif
