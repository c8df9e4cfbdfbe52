#ifndef VTAMLIB_ERRORS_HPP
#define VTAMLIB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace vtam {

// Syntax errors in any of the text formats (terms, automata, TA, DIMACS).
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, std::size_t offset)
      : std::runtime_error(std::move(msg)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Structural violations found by validation; carries one line per problem.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> diags)
      : std::runtime_error(join(diags)), diags_(std::move(diags)) {}
  const std::vector<std::string>& diagnostics() const { return diags_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& d : v) {
      if (!out.empty()) out += "\n";
      out += d;
    }
    return out;
  }
  std::vector<std::string> diags_;
};

// Operation is refused because the underlying problem is undecidable or
// excluded for the given constraint class.
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A configured search/enumeration budget was exhausted.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed (e.g. a derived clause outside every schema).
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace vtam

#endif
