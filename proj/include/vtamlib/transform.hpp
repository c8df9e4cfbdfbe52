#ifndef VTAMLIB_TRANSFORM_HPP
#define VTAMLIB_TRANSFORM_HPP

#include "vtamlib/automaton.hpp"

namespace vtam {

// Subset-with-track determinization. Works for relation none and struct
// (and bt symbols); refused for syn, whose class cannot be determinized.
Vtam determinize(const Vtam& a);

Vtam vtam_union(const Vtam& a1, const Vtam& a2);
Vtam vtam_intersection(const Vtam& a1, const Vtam& a2);

// determinize + complete + flip final states.
Vtam vtam_complement(const Vtam& a);

}  // namespace vtam

#endif
