#include "vtamlib/format.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace vtam {

namespace {

struct Lexer {
  std::string text;
  std::size_t pos = 0;

  explicit Lexer(std::string t) : text(std::move(t)) {}

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip();
    return pos >= text.size();
  }
  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool try_char(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!try_char(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  // Word: identifier or punctuation-free token. Also used for keywords.
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected identifier", pos);
    return text.substr(start, pos - start);
  }
  void keyword(const std::string& kw) {
    std::size_t at = pos;
    std::string got = ident();
    if (got != kw) throw ParseError("expected '" + kw + "', got '" + got + "'", at);
  }
  // Matches "->" or "-[label]->"; returns the label ("" for plain arrows).
  std::string arrow() {
    skip();
    expect('-');
    std::string label;
    if (try_char('[')) {
      skip();
      std::size_t start = pos;
      while (pos < text.size() && text[pos] != ']') ++pos;
      label = text.substr(start, pos - start);
      expect(']');
      expect('-');
    }
    expect('>');
    return label;
  }
};

struct SymArity {
  std::string name;
  int arity;
};

SymArity parse_sym_decl(Lexer& lx) {
  std::string name = lx.ident();
  lx.expect('/');
  std::string num = lx.ident();
  if (num != "0" && num != "2")
    throw ParseError("arity must be 0 or 2 in '" + name + "/" + num + "'", lx.pos);
  return {name, num == "0" ? 0 : 2};
}

Guard guard_from_label(const std::string& label, std::size_t at) {
  if (label.empty()) return Guard::None;
  if (label == "eq") return Guard::RelPos;
  if (label == "neq") return Guard::RelNeg;
  if (label == "bt-eq") return Guard::BtEq;
  if (label == "bt-neq") return Guard::BtNeq;
  throw ParseError("unknown guard label '" + label + "'", at);
}

// Left pattern inside q(...): either a variable token, bot, or h(y.., y..).
struct LeftMem {
  std::string var;     // y1/y2/y11/... when pattern is a bare variable
  std::string popped;  // top symbol when pattern is h(yi1,yi2)
  bool is_bot = false;
};

bool is_rule_var(const std::string& tok) {
  return tok == "y1" || tok == "y2" || tok == "y11" || tok == "y12" || tok == "y21" ||
         tok == "y22";
}

LeftMem parse_left_mem(Lexer& lx, int side) {
  LeftMem out;
  std::size_t at = lx.pos;
  std::string tok = lx.ident();
  if (tok == kBot) {
    out.is_bot = true;
    return out;
  }
  if (is_rule_var(tok)) {
    out.var = tok;
    return out;
  }
  out.popped = tok;
  lx.expect('(');
  std::string v1 = lx.ident();
  lx.expect(',');
  std::string v2 = lx.ident();
  lx.expect(')');
  std::string want1 = side == 1 ? "y11" : "y21";
  std::string want2 = side == 1 ? "y12" : "y22";
  if (v1 != want1 || v2 != want2)
    throw ParseError("pop pattern variables must be (" + want1 + "," + want2 + ")", at);
  return out;
}

Rule parse_rule(Lexer& lx, const Vtam& a) {
  Rule r;
  std::size_t at = lx.pos;
  r.symbol = lx.ident();
  if (!a.sigma.base.contains(r.symbol))
    throw ParseError("rule uses undeclared symbol '" + r.symbol + "'", at);
  Category cat = a.sigma.category(r.symbol);
  int arity = a.sigma.base.arity(r.symbol);

  LeftMem m1, m2;
  if (arity == 2) {
    lx.expect('(');
    r.q1 = lx.ident();
    lx.expect('(');
    m1 = parse_left_mem(lx, 1);
    lx.expect(')');
    lx.expect(',');
    r.q2 = lx.ident();
    lx.expect('(');
    m2 = parse_left_mem(lx, 2);
    lx.expect(')');
    lx.expect(')');
  }

  std::size_t arrow_at = lx.pos;
  std::string label = lx.arrow();
  r.guard = guard_from_label(label, arrow_at);

  r.target = lx.ident();
  lx.expect('(');
  std::size_t rhs_at = lx.pos;
  std::string rhs = lx.ident();
  std::string rhs2a, rhs2b;
  bool rhs_app = false;
  if (lx.try_char('(')) {
    rhs_app = true;
    rhs2a = lx.ident();
    lx.expect(',');
    rhs2b = lx.ident();
    lx.expect(')');
  }
  lx.expect(')');

  auto fail = [&](const std::string& why) -> Rule {
    throw ParseError("rule for '" + r.symbol + "' (" + to_string(cat) + "): " + why, rhs_at);
  };

  auto require_plain_vars = [&]() {
    if (!m1.var.empty() && m1.var != "y1") fail("left pattern of son 1 must be y1");
    if (!m2.var.empty() && m2.var != "y2") fail("left pattern of son 2 must be y2");
    if (m1.popped.size() || m2.popped.size() || m1.is_bot || m2.is_bot)
      fail("only pop rules may match the memory structure");
  };

  switch (cat) {
    case Category::Push:
      if (arity == 0) {
        if (rhs_app || rhs == kBot) fail("push constant must emit a nullary memory symbol");
        r.action = ActionKind::PushConst;
        r.mem_symbol = rhs;
      } else {
        require_plain_vars();
        if (!rhs_app || rhs2a != "y1" || rhs2b != "y2")
          fail("push rule must emit h(y1,y2)");
        r.action = ActionKind::PushBin;
        r.mem_symbol = rhs;
      }
      break;
    case Category::Int0:
      if (rhs != kBot || rhs_app) fail("int0 rule must emit bot");
      r.action = ActionKind::EmitBot;
      break;
    case Category::Int1:
    case Category::CInt1:
    case Category::Bt1:
      require_plain_vars();
      if (rhs_app || rhs != "y1") fail("keep rule must emit y1");
      r.action = ActionKind::Keep1;
      break;
    case Category::Int2:
    case Category::CInt2:
    case Category::Bt2:
      require_plain_vars();
      if (rhs_app || rhs != "y2") fail("keep rule must emit y2");
      r.action = ActionKind::Keep2;
      break;
    default: {  // pop
      int side = pop_side(cat), child = pop_child(cat);
      const LeftMem& pm = side == 1 ? m1 : m2;
      const LeftMem& om = side == 1 ? m2 : m1;
      if (!om.var.empty()) {
        std::string want = side == 1 ? "y2" : "y1";
        if (om.var != want) fail("the unread son's pattern must be " + want);
      } else {
        fail("the unread son must carry a plain variable");
      }
      if (pm.is_bot) {
        if (rhs != kBot || rhs_app) fail("bot-variant pop must emit bot");
        r.action = ActionKind::PopBot;
        r.pop_side = side;
      } else if (!pm.popped.empty()) {
        std::string want = "y" + std::to_string(side) + std::to_string(child);
        if (rhs_app || rhs != want) fail("pop rule must emit " + want);
        r.action = ActionKind::PopSym;
        r.mem_symbol = pm.popped;
        r.pop_side = side;
        r.pop_child = child;
      } else {
        fail("pop rule must match h(...) or bot on the read son");
      }
      break;
    }
  }
  return r;
}

}  // namespace

Vtam parse_vtam(const std::string& text) {
  Lexer lx(text);
  Vtam a;
  lx.keyword("vtam");
  a.name = lx.ident();

  lx.keyword("relation");
  {
    std::size_t at = lx.pos;
    std::string rel = lx.ident();
    auto r = relation_from_string(rel);
    if (!r) throw ParseError("unknown relation '" + rel + "'", at);
    a.relation = *r;
  }

  lx.keyword("sigma");
  lx.expect('{');
  while (lx.peek() != '}') {
    std::size_t at = lx.pos;
    std::string catname = lx.ident();
    auto cat = category_from_string(catname);
    if (!cat) throw ParseError("unknown category '" + catname + "'", at);
    lx.expect(':');
    while (lx.peek() != ';' && lx.peek() != '}') {
      auto sd = parse_sym_decl(lx);
      if (sd.name == kBot) throw ParseError("'bot' may not appear in sigma", lx.pos);
      a.sigma.base.add(sd.name, sd.arity);
      a.sigma.category_of[sd.name] = *cat;
    }
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("gamma");
  lx.expect('{');
  while (lx.peek() != '}') {
    auto sd = parse_sym_decl(lx);
    if (sd.name == kBot) throw ParseError("'bot' is implicit in gamma", lx.pos);
    a.gamma.add(sd.name, sd.arity);
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("states");
  lx.expect('{');
  while (lx.peek() != '}') {
    a.states.push_back(lx.ident());
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("final");
  lx.expect('{');
  while (lx.peek() != '}') {
    a.final.insert(lx.ident());
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("rules");
  lx.expect('{');
  while (lx.peek() != '}') {
    a.rules.push_back(parse_rule(lx, a));
    lx.expect(';');
  }
  lx.expect('}');

  if (!lx.eof()) throw ParseError("trailing input after rules section", lx.pos);
  return a;
}

std::string print_vtam(const Vtam& a) {
  std::ostringstream os;
  os << "vtam " << a.name << "\n";
  os << "relation " << to_string(a.relation) << "\n";

  os << "sigma {";
  bool first_cat = true;
  // stable category order
  for (Category cat :
       {Category::Push, Category::Pop11, Category::Pop12, Category::Pop21, Category::Pop22,
        Category::Int0, Category::Int1, Category::Int2, Category::CInt1, Category::CInt2,
        Category::Bt1, Category::Bt2}) {
    std::ostringstream line;
    bool any = false;
    for (const auto& s : a.sigma.base.symbols()) {
      auto it = a.sigma.category_of.find(s.name);
      if (it == a.sigma.category_of.end() || it->second != cat) continue;
      line << " " << s.name << "/" << s.arity;
      any = true;
    }
    if (any) {
      os << (first_cat ? " " : " ; ") << to_string(cat) << ":" << line.str();
      first_cat = false;
    }
  }
  os << " }\n";

  os << "gamma {";
  for (const auto& s : a.gamma.symbols()) os << " " << s.name << "/" << s.arity;
  os << " }\n";

  os << "states {";
  for (const auto& q : a.states) os << " " << q;
  os << " }\n";

  os << "final {";
  for (const auto& q : a.final) os << " " << q;
  os << " }\n";

  os << "rules {\n";
  for (const auto& r : a.rules)
    os << "  " << print_rule(r) << " ;\n";
  os << "}\n";
  return os.str();
}

Ta parse_ta(const std::string& text) {
  Lexer lx(text);
  Ta b;
  lx.keyword("ta");
  b.name = lx.ident();

  lx.keyword("gamma");
  lx.expect('{');
  while (lx.peek() != '}') {
    auto sd = parse_sym_decl(lx);
    if (sd.name == kBot) throw ParseError("'bot' is implicit in gamma", lx.pos);
    b.gamma.add(sd.name, sd.arity);
    lx.try_char(';');
  }
  lx.expect('}');
  b.gamma = with_bot(b.gamma);

  lx.keyword("states");
  lx.expect('{');
  while (lx.peek() != '}') {
    b.states.push_back(lx.ident());
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("final");
  lx.expect('{');
  while (lx.peek() != '}') {
    b.final.insert(lx.ident());
    lx.try_char(';');
  }
  lx.expect('}');

  lx.keyword("rules");
  lx.expect('{');
  while (lx.peek() != '}') {
    TaRule r;
    std::size_t at = lx.pos;
    r.symbol = lx.ident();
    if (!b.gamma.contains(r.symbol))
      throw ParseError("rule uses undeclared symbol '" + r.symbol + "'", at);
    if (lx.try_char('(')) {
      r.children.push_back(lx.ident());
      while (lx.try_char(',')) r.children.push_back(lx.ident());
      lx.expect(')');
    }
    std::string label = lx.arrow();
    if (!label.empty()) throw ParseError("ta rules carry no guards", at);
    r.target = lx.ident();
    lx.expect(';');
    b.rules.push_back(std::move(r));
  }
  lx.expect('}');
  if (!lx.eof()) throw ParseError("trailing input after rules section", lx.pos);
  return b;
}

std::string print_ta(const Ta& b) {
  std::ostringstream os;
  os << "ta " << b.name << "\n";
  os << "gamma {";
  for (const auto& s : b.gamma.symbols())
    if (s.name != kBot) os << " " << s.name << "/" << s.arity;
  os << " }\n";
  os << "states {";
  for (const auto& q : b.states) os << " " << q;
  os << " }\n";
  os << "final {";
  for (const auto& q : b.final) os << " " << q;
  os << " }\n";
  os << "rules {\n";
  for (const auto& r : b.rules) {
    os << "  " << r.symbol;
    if (!r.children.empty()) {
      os << "(";
      for (std::size_t i = 0; i < r.children.size(); ++i) {
        if (i) os << ",";
        os << r.children[i];
      }
      os << ")";
    }
    os << " -> " << r.target << " ;\n";
  }
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file '" + path + "'", 0);
  out << content;
}

}  // namespace vtam
