#include "vtamlib/automaton.hpp"

#include <algorithm>
#include <sstream>

namespace vtam {

std::string to_string(Category c) {
  switch (c) {
    case Category::Push: return "push";
    case Category::Pop11: return "pop11";
    case Category::Pop12: return "pop12";
    case Category::Pop21: return "pop21";
    case Category::Pop22: return "pop22";
    case Category::Int0: return "int0";
    case Category::Int1: return "int1";
    case Category::Int2: return "int2";
    case Category::CInt1: return "cint1";
    case Category::CInt2: return "cint2";
    case Category::Bt1: return "bt1";
    case Category::Bt2: return "bt2";
  }
  return "?";
}

std::optional<Category> category_from_string(const std::string& s) {
  static const std::map<std::string, Category> m = {
      {"push", Category::Push},   {"pop11", Category::Pop11}, {"pop12", Category::Pop12},
      {"pop21", Category::Pop21}, {"pop22", Category::Pop22}, {"int0", Category::Int0},
      {"int1", Category::Int1},   {"int2", Category::Int2},   {"cint1", Category::CInt1},
      {"cint2", Category::CInt2}, {"bt1", Category::Bt1},     {"bt2", Category::Bt2}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool is_pop(Category c) {
  return c == Category::Pop11 || c == Category::Pop12 || c == Category::Pop21 ||
         c == Category::Pop22;
}

int pop_side(Category c) {
  return (c == Category::Pop11 || c == Category::Pop12) ? 1 : 2;
}

int pop_child(Category c) {
  return (c == Category::Pop11 || c == Category::Pop21) ? 1 : 2;
}

std::string guard_text(Guard g) {
  switch (g) {
    case Guard::None: return "";
    case Guard::RelPos: return "eq";
    case Guard::RelNeg: return "neq";
    case Guard::BtEq: return "bt-eq";
    case Guard::BtNeq: return "bt-neq";
  }
  return "";
}

std::string to_string(RelationKind r) {
  switch (r) {
    case RelationKind::None: return "none";
    case RelationKind::SynEq: return "syn";
    case RelationKind::StructEq: return "struct";
  }
  return "?";
}

std::optional<RelationKind> relation_from_string(const std::string& s) {
  if (s == "none") return RelationKind::None;
  if (s == "syn") return RelationKind::SynEq;
  if (s == "struct") return RelationKind::StructEq;
  return std::nullopt;
}

Category PartitionedSignature::category(const std::string& sym) const {
  auto it = category_of.find(sym);
  if (it == category_of.end())
    throw ValidationError({"symbol '" + sym + "' has no category"});
  return it->second;
}

Rule pop_rule(const std::string& sym, const std::string& q1, const std::string& q2,
              Category cat, const std::string& popped_or_empty, const std::string& tgt) {
  Rule r;
  r.symbol = sym;
  r.q1 = q1;
  r.q2 = q2;
  r.target = tgt;
  r.pop_side = pop_side(cat);
  if (popped_or_empty.empty()) {
    r.action = ActionKind::PopBot;
  } else {
    r.action = ActionKind::PopSym;
    r.mem_symbol = popped_or_empty;
    r.pop_child = pop_child(cat);
  }
  return r;
}

std::string print_rule(const Rule& r) {
  std::ostringstream os;
  bool pop = r.action == ActionKind::PopSym || r.action == ActionKind::PopBot;
  os << r.symbol;
  if (!r.q2.empty()) {
    os << "(" << r.q1 << "(";
    if (pop && r.pop_side == 1) {
      if (r.action == ActionKind::PopBot)
        os << kBot;
      else
        os << r.mem_symbol << "(y11,y12)";
    } else {
      os << "y1";
    }
    os << "), " << r.q2 << "(";
    if (pop && r.pop_side == 2) {
      if (r.action == ActionKind::PopBot)
        os << kBot;
      else
        os << r.mem_symbol << "(y21,y22)";
    } else {
      os << "y2";
    }
    os << "))";
  }
  if (r.guard == Guard::None)
    os << " -> ";
  else
    os << " -[" << guard_text(r.guard) << "]-> ";
  os << r.target << "(";
  switch (r.action) {
    case ActionKind::PushConst: os << r.mem_symbol; break;
    case ActionKind::PushBin: os << r.mem_symbol << "(y1,y2)"; break;
    case ActionKind::EmitBot: os << kBot; break;
    case ActionKind::Keep1: os << "y1"; break;
    case ActionKind::Keep2: os << "y2"; break;
    case ActionKind::PopBot: os << kBot; break;
    case ActionKind::PopSym:
      os << "y" << r.pop_side << r.pop_child;
      break;
  }
  os << ")";
  return os.str();
}

bool Vtam::has_state(const std::string& q) const {
  return std::find(states.begin(), states.end(), q) != states.end();
}

bool Vtam::has_guarded_rules(Guard g) const {
  for (const auto& r : rules)
    if (r.guard == g) return true;
  return false;
}

bool Vtam::has_bt_rules() const {
  return has_guarded_rules(Guard::BtEq) || has_guarded_rules(Guard::BtNeq);
}

bool Vtam::has_neg_rules() const { return has_guarded_rules(Guard::RelNeg); }

namespace {

// Action families allowed per category; guard legality is checked separately.
bool action_fits(Category cat, ActionKind act) {
  switch (cat) {
    case Category::Push: return act == ActionKind::PushConst || act == ActionKind::PushBin;
    case Category::Int0: return act == ActionKind::EmitBot;
    case Category::Int1:
    case Category::CInt1:
    case Category::Bt1: return act == ActionKind::Keep1;
    case Category::Int2:
    case Category::CInt2:
    case Category::Bt2: return act == ActionKind::Keep2;
    case Category::Pop11:
    case Category::Pop12:
    case Category::Pop21:
    case Category::Pop22: return act == ActionKind::PopSym || act == ActionKind::PopBot;
  }
  return false;
}

void check_rule_shape(const Vtam& a, const Rule& r, bool require_visibility,
                      std::vector<std::string>& diags) {
  auto bad = [&](const std::string& why) {
    diags.push_back("rule '" + r.symbol + "(" + r.q1 +
                    (r.q2.empty() ? "" : "," + r.q2) + ") -> " + r.target + "': " + why);
  };
  if (!a.sigma.base.contains(r.symbol)) {
    bad("undeclared input symbol");
    return;
  }
  int ar = a.sigma.base.arity(r.symbol);
  if (ar == 0 ? !(r.q1.empty() && r.q2.empty()) : (r.q1.empty() || r.q2.empty())) {
    bad("left-state count does not match symbol arity");
    return;
  }
  if ((!r.q1.empty() && !a.has_state(r.q1)) || (!r.q2.empty() && !a.has_state(r.q2)) ||
      !a.has_state(r.target)) {
    bad("undeclared state");
    return;
  }

  Category cat = a.sigma.category_of.count(r.symbol) ? a.sigma.category(r.symbol)
                                                     : Category::Int0;
  if (require_visibility) {
    if (!action_fits(cat, r.action)) {
      bad("visibility violated: action does not match category " + to_string(cat));
      return;
    }
  }

  RankedSignature gb = with_bot(a.gamma);
  switch (r.action) {
    case ActionKind::PushConst:
      if (!a.gamma.contains(r.mem_symbol) || a.gamma.arity(r.mem_symbol) != 0)
        bad("push constant payload must be a nullary memory symbol");
      else if (r.mem_symbol == kBot)
        bad("push constant payload may not be bot");
      if (ar != 0) bad("push-constant action on a binary symbol");
      break;
    case ActionKind::PushBin:
      if (!a.gamma.contains(r.mem_symbol) || a.gamma.arity(r.mem_symbol) != 2)
        bad("push payload must be a binary memory symbol");
      if (ar != 2) bad("push action on a constant symbol");
      break;
    case ActionKind::PopSym:
      if (!gb.contains(r.mem_symbol) || gb.arity(r.mem_symbol) != 2)
        bad("pop top symbol must be a binary memory symbol");
      if (ar != 2) bad("pop action on a constant symbol");
      if (r.pop_side < 1 || r.pop_side > 2 || r.pop_child < 1 || r.pop_child > 2)
        bad("pop rule lacks side/child coordinates");
      else if (require_visibility &&
               (r.pop_side != pop_side(cat) || r.pop_child != pop_child(cat)))
        bad("pop coordinates disagree with the symbol category");
      break;
    case ActionKind::PopBot:
      if (!r.mem_symbol.empty()) bad("pop-bot rule carries no memory symbol");
      if (ar != 2) bad("pop action on a constant symbol");
      if (r.pop_side < 1 || r.pop_side > 2)
        bad("pop rule lacks a side coordinate");
      else if (require_visibility && r.pop_side != pop_side(cat))
        bad("pop coordinates disagree with the symbol category");
      break;
    case ActionKind::EmitBot:
      if (ar != 0) bad("int0 action on a binary symbol");
      break;
    case ActionKind::Keep1:
    case ActionKind::Keep2:
      if (ar != 2) bad("keep action on a constant symbol");
      break;
  }

  bool rel_guard = r.guard == Guard::RelPos || r.guard == Guard::RelNeg;
  bool bt_guard = r.guard == Guard::BtEq || r.guard == Guard::BtNeq;
  if (require_visibility) {
    bool cint = cat == Category::CInt1 || cat == Category::CInt2;
    bool bt = cat == Category::Bt1 || cat == Category::Bt2;
    if (cint && !rel_guard) bad("cint rule requires an eq or neq guard");
    if (bt && !bt_guard) bad("bt rule requires a bt-eq or bt-neq guard");
    if (!cint && rel_guard) bad("eq/neq guard only allowed on cint symbols");
    if (!bt && bt_guard) bad("bt guard only allowed on bt symbols");
  } else {
    if (rel_guard && !(r.action == ActionKind::Keep1 || r.action == ActionKind::Keep2))
      bad("eq/neq guard only allowed on keep rules");
    if (bt_guard && !(r.action == ActionKind::Keep1 || r.action == ActionKind::Keep2))
      bad("bt guard only allowed on keep rules");
  }
  if (rel_guard && a.relation == RelationKind::None)
    bad("eq/neq guard requires a relation kind other than none");
}

void check_common(const Vtam& a, std::vector<std::string>& diags) {
  std::set<std::string> seen;
  for (const auto& q : a.states) {
    if (!is_identifier(q)) diags.push_back("state '" + q + "' is not a valid identifier");
    if (!seen.insert(q).second) diags.push_back("duplicate state '" + q + "'");
  }
  for (const auto& q : a.final)
    if (!a.has_state(q)) diags.push_back("final state '" + q + "' not declared");
  if (a.gamma.contains(kBot))
    diags.push_back("gamma must not declare 'bot' (it is implicit)");
  for (const auto& s : a.sigma.base.symbols())
    if (s.name == kBot) diags.push_back("input signature must not use 'bot'");
}

}  // namespace

void validate(const Vtam& a) {
  std::vector<std::string> diags;
  check_common(a, diags);
  for (const auto& s : a.sigma.base.symbols()) {
    if (!a.sigma.category_of.count(s.name)) {
      diags.push_back("symbol '" + s.name + "' missing from the partition");
      continue;
    }
    Category c = a.sigma.category(s.name);
    if (s.arity == 0 && !(c == Category::Push || c == Category::Int0))
      diags.push_back("constant '" + s.name + "' may only be push or int0");
    if (s.arity == 2 && c == Category::Int0)
      diags.push_back("binary symbol '" + s.name + "' may not be int0");
    if ((c == Category::CInt1 || c == Category::CInt2) && a.relation == RelationKind::None)
      diags.push_back("cint symbol '" + s.name + "' requires relation syn or struct");
  }
  for (const auto& [sym, cat] : a.sigma.category_of)
    if (!a.sigma.base.contains(sym))
      diags.push_back("partition mentions undeclared symbol '" + sym + "'");
  for (const auto& r : a.rules) check_rule_shape(a, r, true, diags);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

void validate_rules_only(const Vtam& a) {
  std::vector<std::string> diags;
  check_common(a, diags);
  for (const auto& r : a.rules) check_rule_shape(a, r, false, diags);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

bool is_deterministic(const Vtam& a) {
  // Key: (symbol, q1, q2, popped-top or "") -> rules
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           std::vector<const Rule*>>
      groups;
  for (const auto& r : a.rules) {
    Category c = a.sigma.category(r.symbol);
    std::string top;
    if (is_pop(c)) top = r.action == ActionKind::PopBot ? kBot : r.mem_symbol;
    groups[{r.symbol, r.q1, r.q2, top}].push_back(&r);
  }
  for (const auto& [key, rs] : groups) {
    Category c = a.sigma.category(rs.front()->symbol);
    bool guarded = c == Category::CInt1 || c == Category::CInt2 || c == Category::Bt1 ||
                   c == Category::Bt2;
    if (!guarded) {
      if (rs.size() > 1) return false;
    } else {
      if (rs.size() > 2) return false;
      if (rs.size() == 2) {
        Guard g1 = rs[0]->guard, g2 = rs[1]->guard;
        bool opposite = (g1 == Guard::RelPos && g2 == Guard::RelNeg) ||
                        (g1 == Guard::RelNeg && g2 == Guard::RelPos) ||
                        (g1 == Guard::BtEq && g2 == Guard::BtNeq) ||
                        (g1 == Guard::BtNeq && g2 == Guard::BtEq);
        if (!opposite) return false;
      }
    }
  }
  return true;
}

// ---- MemShape ----------------------------------------------------------

MemShape MemShape::node(MemShape l, MemShape r) {
  MemShape s(Node);
  s.kids_ = std::make_shared<std::pair<MemShape, MemShape>>(std::move(l), std::move(r));
  return s;
}

bool operator==(const MemShape& a, const MemShape& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != MemShape::Node) return true;
  return a.left() == b.left() && a.right() == b.right();
}

std::optional<MemShape> memory_shape(const PartitionedSignature& p, const Term& t) {
  Category c = p.category(t.root());
  if (t.is_leaf()) {
    if (c == Category::Push) return MemShape::cst();
    return MemShape::bot();  // int0
  }
  auto s1 = memory_shape(p, t.children()[0]);
  auto s2 = memory_shape(p, t.children()[1]);
  if (!s1 || !s2) return std::nullopt;
  switch (c) {
    case Category::Push: return MemShape::node(*s1, *s2);
    case Category::Int1:
    case Category::CInt1:
    case Category::Bt1: return s1;
    case Category::Int2:
    case Category::CInt2:
    case Category::Bt2: return s2;
    default: break;
  }
  // pop: take a child of the designated son's shape
  const MemShape& picked = pop_side(c) == 1 ? *s1 : *s2;
  switch (picked.kind()) {
    case MemShape::BotLeaf: return MemShape::bot();
    case MemShape::ConstLeaf: return std::nullopt;  // stuck
    case MemShape::Node:
      return pop_child(c) == 1 ? picked.left() : picked.right();
  }
  return std::nullopt;
}

bool struct_eq(const MemShape& m1, const MemShape& m2) {
  bool leaf1 = m1.kind() != MemShape::Node;
  bool leaf2 = m2.kind() != MemShape::Node;
  if (leaf1 || leaf2) return leaf1 && leaf2;
  return struct_eq(m1.left(), m2.left()) && struct_eq(m1.right(), m2.right());
}

MemShape shape_of_memory(const Term& memory) {
  if (memory.is_leaf())
    return memory.root() == kBot ? MemShape::bot() : MemShape::cst();
  return MemShape::node(shape_of_memory(memory.children()[0]),
                        shape_of_memory(memory.children()[1]));
}

bool relation_holds(RelationKind kind, const Term& m1, const Term& m2) {
  switch (kind) {
    case RelationKind::None:
      throw UnsupportedError("no relation kind configured for guard evaluation");
    case RelationKind::SynEq: return m1 == m2;
    case RelationKind::StructEq:
      return struct_eq(shape_of_memory(m1), shape_of_memory(m2));
  }
  return false;
}

// ---- Completion ---------------------------------------------------------

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  int i = 1;
  while (used.count(base + std::to_string(i))) ++i;
  return base + std::to_string(i);
}

}  // namespace

namespace {

// Appends every rule missing for full coverage of `states` pairs to `sink`.
// Gamma symbols are taken from `a.gamma`; the caller guarantees it already
// holds whatever fresh symbols completion needs.
std::vector<Rule> completion_gaps(const Vtam& a, const std::vector<std::string>& states,
                                  const std::string& sink, const std::string& push_const,
                                  const std::string& push_bin) {
  std::vector<Rule> added;
  auto key_of = [](const Rule& r) { return std::make_tuple(r.symbol, r.q1, r.q2); };
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const Rule*>> have;
  for (const auto& r : a.rules) have[key_of(r)].push_back(&r);

  for (const auto& s : a.sigma.base.symbols()) {
    Category cat = a.sigma.category(s.name);
    if (s.arity == 0) {
      bool any = false;
      for (const auto& r : a.rules)
        if (r.symbol == s.name) any = true;
      if (!any) {
        if (cat == Category::Int0)
          added.push_back({s.name, "", "", Guard::None, ActionKind::EmitBot, "", sink});
        else
          added.push_back(
              {s.name, "", "", Guard::None, ActionKind::PushConst, push_const, sink});
      }
      continue;
    }
    for (const auto& q1 : states) {
      for (const auto& q2 : states) {
        auto it = have.find({s.name, q1, q2});
        static const std::vector<const Rule*> none;
        const auto& rs = it == have.end() ? none : it->second;
        switch (cat) {
          case Category::Push:
            if (rs.empty())
              added.push_back({s.name, q1, q2, Guard::None, ActionKind::PushBin, push_bin, sink});
            break;
          case Category::Int1:
          case Category::Int2:
            if (rs.empty())
              added.push_back({s.name, q1, q2, Guard::None,
                               cat == Category::Int1 ? ActionKind::Keep1 : ActionKind::Keep2,
                               "", sink});
            break;
          case Category::CInt1:
          case Category::CInt2:
          case Category::Bt1:
          case Category::Bt2: {
            bool is_bt = cat == Category::Bt1 || cat == Category::Bt2;
            Guard pos = is_bt ? Guard::BtEq : Guard::RelPos;
            Guard neg = is_bt ? Guard::BtNeq : Guard::RelNeg;
            ActionKind act = (cat == Category::CInt1 || cat == Category::Bt1)
                                 ? ActionKind::Keep1
                                 : ActionKind::Keep2;
            bool have_pos = false, have_neg = false;
            for (const Rule* r : rs) {
              if (r->guard == pos) have_pos = true;
              if (r->guard == neg) have_neg = true;
            }
            if (!have_pos) added.push_back({s.name, q1, q2, pos, act, "", sink});
            if (!have_neg) added.push_back({s.name, q1, q2, neg, act, "", sink});
            break;
          }
          default: {  // pop categories
            std::set<std::string> covered;
            bool covered_bot = false;
            for (const Rule* r : rs) {
              if (r->action == ActionKind::PopBot)
                covered_bot = true;
              else
                covered.insert(r->mem_symbol);
            }
            for (const auto& h : a.gamma.binaries())
              if (!covered.count(h)) added.push_back(pop_rule(s.name, q1, q2, cat, h, sink));
            if (!covered_bot) added.push_back(pop_rule(s.name, q1, q2, cat, "", sink));
            break;
          }
        }
      }
    }
  }
  return added;
}

}  // namespace

bool is_complete(const Vtam& a) {
  return completion_gaps(a, a.states, "?", "?", "?").empty();
}

Vtam prune_unreachable_rules(const Vtam& a) {
  std::set<std::string> reach;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& r : a.rules) {
      if (reach.count(r.target)) continue;
      bool ok = (r.q1.empty() || reach.count(r.q1)) && (r.q2.empty() || reach.count(r.q2));
      if (ok) {
        reach.insert(r.target);
        grew = true;
      }
    }
  }
  Vtam out = a;
  out.rules.clear();
  for (const auto& r : a.rules) {
    if ((r.q1.empty() || reach.count(r.q1)) && (r.q2.empty() || reach.count(r.q2)))
      out.rules.push_back(r);
  }
  return out;
}

Vtam complete(const Vtam& a) {
  validate(a);

  // First probe against the original state set and memory signature.
  auto gaps = completion_gaps(a, a.states, "?", "?", "?");
  if (gaps.empty()) return a;

  Vtam out = a;
  std::set<std::string> used_states(a.states.begin(), a.states.end());
  std::string trash = fresh_name("q_trash", used_states);

  std::set<std::string> used_mem;
  for (const auto& s : a.gamma.symbols()) used_mem.insert(s.name);
  used_mem.insert(kBot);

  bool has_push_const = false, has_push_bin = false;
  for (const auto& s : a.sigma.base.symbols()) {
    if (a.sigma.category(s.name) != Category::Push) continue;
    (s.arity == 0 ? has_push_const : has_push_bin) = true;
  }
  std::string push_const, push_bin;
  if (has_push_const) {
    for (const auto& s : out.gamma.symbols())
      if (s.arity == 0) push_const = s.name;
    if (push_const.empty()) {
      push_const = fresh_name("k_trash", used_mem);
      out.gamma.add(push_const, 0);
    }
  }
  if (has_push_bin) {
    for (const auto& s : out.gamma.symbols())
      if (s.arity == 2) push_bin = s.name;
    if (push_bin.empty()) {
      push_bin = fresh_name("h_trash", used_mem);
      out.gamma.add(push_bin, 2);
    }
  }

  std::vector<std::string> all_states = a.states;
  all_states.push_back(trash);
  out.states.push_back(trash);

  Vtam probe = out;  // carries the possibly extended gamma
  auto added = completion_gaps(probe, all_states, trash, push_const, push_bin);
  for (auto& r : added) out.rules.push_back(std::move(r));
  return out;
}

}  // namespace vtam
