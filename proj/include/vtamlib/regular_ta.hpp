#ifndef VTAMLIB_REGULAR_TA_HPP
#define VTAMLIB_REGULAR_TA_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vtamlib/term.hpp"

namespace vtam {

struct TaRule {
  std::string symbol;
  std::vector<std::string> children;  // empty for constants
  std::string target;

  friend auto operator<=>(const TaRule&, const TaRule&) = default;
};

// A plain bottom-up tree automaton over a memory signature (bot included
// as an ordinary constant when present).
struct Ta {
  std::string name = "b";
  RankedSignature gamma;
  std::vector<std::string> states;
  std::set<std::string> final;
  std::vector<TaRule> rules;

  bool has_state(const std::string& s) const;
};

void ta_validate(const Ta& b);

bool ta_accepts(const Ta& b, const Term& m);

bool ta_is_empty(const Ta& b);

// A minimal-size accepted term, ties broken by print order; throws
// ValidationError when the language is empty.
Term ta_witness(const Ta& b);

enum class TaProductMode { Intersect, Unite };

Ta ta_product(const Ta& b1, const Ta& b2, TaProductMode mode);
Ta ta_complement(const Ta& b);
Ta ta_determinize(const Ta& b);

// Accepts exactly T(gamma) minus the given finite set.
Ta ta_complement_of_finite_set(const std::vector<Term>& ms, const RankedSignature& gamma);

// Accepts exactly the given finite set.
Ta ta_of_finite_set(const std::vector<Term>& ms, const RankedSignature& gamma);

}  // namespace vtam

#endif
