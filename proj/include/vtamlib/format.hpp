#ifndef VTAMLIB_FORMAT_HPP
#define VTAMLIB_FORMAT_HPP

#include <string>

#include "vtamlib/automaton.hpp"
#include "vtamlib/regular_ta.hpp"

namespace vtam {

// Automaton text format: `;`-terminated entries, `#` comments, sections
// vtam/relation/sigma/gamma/states/final/rules. See README for the grammar.
Vtam parse_vtam(const std::string& text);
std::string print_vtam(const Vtam& a);

// Plain tree automaton format: header `ta`, sections gamma/states/final/rules.
Ta parse_ta(const std::string& text);
std::string print_ta(const Ta& b);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace vtam

#endif
