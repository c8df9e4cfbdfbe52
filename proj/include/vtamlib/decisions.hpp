#ifndef VTAMLIB_DECISIONS_HPP
#define VTAMLIB_DECISIONS_HPP

#include <map>
#include <string>

#include "vtamlib/oracle.hpp"
#include "vtamlib/regular_ta.hpp"
#include "vtamlib/saturation.hpp"

namespace vtam {

struct DecisionBudget {
  SatBudget sat;
  RunBudget run;
  // witness search over input terms
  std::size_t witness_max_size = 41;
  std::size_t witness_max_count = 2000000;
};

// Per-state regular memory languages via clause saturation. Requires an
// automaton free of negative and bt guards.
std::map<std::string, Ta> memory_languages(const Vtam& a, const DecisionBudget& b = {});

// Replaces every negatively constrained rule while preserving the memory
// language of every original state. The result may carry fresh auxiliary
// input symbols and states (never final).
Vtam eliminate_negative(const Vtam& a, const DecisionBudget& b = {});

bool is_empty(const Vtam& a, const DecisionBudget& b = {});

// A minimal accepted term; only callable when the language is nonempty.
Term witness(const Vtam& a, const DecisionBudget& b = {});

bool member(const Vtam& a, const Term& t, const DecisionBudget& b = {});

bool included(const Vtam& a1, const Vtam& a2, const DecisionBudget& b = {});
bool universal(const Vtam& a, const DecisionBudget& b = {});
bool equivalent(const Vtam& a1, const Vtam& a2, const DecisionBudget& b = {});

// All members of the equivalence class of m (finite for both relations).
std::vector<Term> equivalence_class(RelationKind kind, const Term& m,
                                    const RankedSignature& gamma);

}  // namespace vtam

#endif
