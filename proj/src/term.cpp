#include "vtamlib/term.hpp"

#include <cctype>
#include <sstream>

namespace vtam {

void RankedSignature::add(const std::string& name, int arity) {
  if (!is_identifier(name))
    throw ValidationError({"symbol name '" + name + "' is not a valid identifier"});
  if (name == kBot && arity != 0)
    throw ValidationError({"'bot' is reserved for the empty memory (arity 0)"});
  if (!relaxed_ && arity != 0 && arity != 2)
    throw ValidationError({"symbol '" + name + "': arity must be 0 or 2, got " +
                           std::to_string(arity)});
  if (relaxed_ && arity < 0)
    throw ValidationError({"symbol '" + name + "': negative arity"});
  if (index_.count(name))
    throw ValidationError({"duplicate symbol '" + name + "'"});
  index_[name] = arity;
  symbols_.push_back({name, arity});
}

int RankedSignature::arity(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError({"unknown symbol '" + name + "'"});
  return it->second;
}

std::vector<std::string> RankedSignature::constants() const {
  std::vector<std::string> out;
  for (const auto& s : symbols_)
    if (s.arity == 0) out.push_back(s.name);
  return out;
}

std::vector<std::string> RankedSignature::binaries() const {
  std::vector<std::string> out;
  for (const auto& s : symbols_)
    if (s.arity == 2) out.push_back(s.name);
  return out;
}

bool operator==(const RankedSignature& a, const RankedSignature& b) {
  return a.symbols_ == b.symbols_;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

namespace {

struct TermLexer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected identifier", pos);
    std::string s = text.substr(start, pos - start);
    if (!is_identifier(s)) throw ParseError("bad identifier '" + s + "'", start);
    return s;
  }
};

Term parse_rec(TermLexer& lx, const RankedSignature& sig) {
  std::size_t at = lx.pos;
  std::string name = lx.ident();
  if (!sig.contains(name)) throw ParseError("unknown symbol '" + name + "'", at);
  int ar = sig.arity(name);
  std::vector<Term> children;
  if (lx.peek() == '(') {
    lx.expect('(');
    children.push_back(parse_rec(lx, sig));
    while (lx.peek() == ',') {
      lx.expect(',');
      children.push_back(parse_rec(lx, sig));
    }
    lx.expect(')');
  }
  if (static_cast<int>(children.size()) != ar)
    throw ParseError("arity mismatch for '" + name + "': declared " + std::to_string(ar) +
                         ", got " + std::to_string(children.size()),
                     at);
  return Term(name, std::move(children));
}

}  // namespace

Term parse_term(const std::string& text, const RankedSignature& sig) {
  TermLexer lx{text};
  Term t = parse_rec(lx, sig);
  if (!lx.eof()) throw ParseError("trailing input after term", lx.pos);
  return t;
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  struct P {
    static void rec(std::ostream& os, const Term& t) {
      os << t.root();
      if (!t.children().empty()) {
        os << '(';
        for (std::size_t i = 0; i < t.children().size(); ++i) {
          if (i) os << ',';
          rec(os, t.children()[i]);
        }
        os << ')';
      }
    }
  };
  P::rec(os, t);
  return os.str();
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += term_size(c);
  return n;
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int k = p[i];
    if (k < 1 || static_cast<std::size_t>(k) > cur->children().size())
      throw ValidationError({"invalid position at step " + std::to_string(i + 1)});
    cur = &cur->children()[static_cast<std::size_t>(k) - 1];
  }
  return *cur;
}

bool well_formed(const Term& t, const RankedSignature& sig) {
  if (!sig.contains(t.root())) return false;
  if (sig.arity(t.root()) != static_cast<int>(t.children().size())) return false;
  for (const auto& c : t.children())
    if (!well_formed(c, sig)) return false;
  return true;
}

RankedSignature with_bot(const RankedSignature& gamma) {
  RankedSignature out = gamma;
  if (!out.contains(kBot)) out.add(kBot, 0);
  return out;
}

}  // namespace vtam
