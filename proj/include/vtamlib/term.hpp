#ifndef VTAMLIB_TERM_HPP
#define VTAMLIB_TERM_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vtamlib/errors.hpp"

namespace vtam {

// The reserved name of the empty-memory constant.
inline const std::string kBot = "bot";

struct SymbolDecl {
  std::string name;
  int arity = 0;  // 0 or 2 (translation sources may carry other arities)

  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

// A finite set of named symbols with arities. Arities are restricted to
// {0,2} unless the signature is constructed as `relaxed` (used only for
// translation sources, where e.g. unary or ternary symbols are rewritten
// into contexts over a {0,2} signature).
class RankedSignature {
public:
  RankedSignature() = default;

  void add(const std::string& name, int arity);
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  int arity(const std::string& name) const;  // throws if unknown
  const std::vector<SymbolDecl>& symbols() const { return symbols_; }

  std::vector<std::string> constants() const;
  std::vector<std::string> binaries() const;

  void set_relaxed(bool r) { relaxed_ = r; }
  bool relaxed() const { return relaxed_; }

  friend bool operator==(const RankedSignature&, const RankedSignature&);

private:
  std::vector<SymbolDecl> symbols_;
  std::map<std::string, int> index_;
  bool relaxed_ = false;
};

// An immutable ordered labeled tree. Arity discipline is enforced by the
// functions that pair a term with a signature, not by the type itself.
class Term {
public:
  Term() = default;
  explicit Term(std::string root) : root_(std::move(root)) {}
  Term(std::string root, std::vector<Term> children)
      : root_(std::move(root)), children_(std::move(children)) {}

  const std::string& root() const { return root_; }
  const std::vector<Term>& children() const { return children_; }
  bool is_leaf() const { return children_.empty(); }

  friend bool operator==(const Term& a, const Term& b) {
    return a.root_ == b.root_ && a.children_ == b.children_;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.root_ != b.root_) return a.root_ < b.root_;
    return a.children_ < b.children_;
  }

private:
  std::string root_;
  std::vector<Term> children_;
};

// A path from the root; entries are 1 or 2.
using Position = std::vector<int>;

bool is_identifier(const std::string& s);

// Grammar: term := ident | ident "(" term "," term ")".
// Checks every symbol against `sig` (arity and membership); in relaxed
// signatures commas may separate any declared number of arguments.
Term parse_term(const std::string& text, const RankedSignature& sig);

std::string print_term(const Term& t);

// Number of symbol occurrences.
std::size_t term_size(const Term& t);

// The subtree addressed by `p`; throws on invalid positions.
const Term& subterm_at(const Term& t, const Position& p);

// True iff every node's child count matches its symbol's declared arity.
bool well_formed(const Term& t, const RankedSignature& sig);

// `sig` extended with bot/0 (memory signatures keep bot implicit).
RankedSignature with_bot(const RankedSignature& gamma);

}  // namespace vtam

#endif
