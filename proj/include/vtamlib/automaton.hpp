#ifndef VTAMLIB_AUTOMATON_HPP
#define VTAMLIB_AUTOMATON_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vtamlib/term.hpp"

namespace vtam {

enum class Category {
  Push,
  Pop11,
  Pop12,
  Pop21,
  Pop22,
  Int0,
  Int1,
  Int2,
  CInt1,
  CInt2,
  Bt1,
  Bt2,
};

std::string to_string(Category c);
std::optional<Category> category_from_string(const std::string& s);
bool is_pop(Category c);
// For pop categories: which son's memory is read (1 or 2) and which child
// of that memory is kept (1 or 2).
int pop_side(Category c);
int pop_child(Category c);

enum class Guard { None, RelPos, RelNeg, BtEq, BtNeq };

std::string guard_text(Guard g);  // "", "eq", "neq", "bt-eq", "bt-neq"

enum class RelationKind { None, SynEq, StructEq };

std::string to_string(RelationKind r);
std::optional<RelationKind> relation_from_string(const std::string& s);

// Input signature plus the total symbol -> category map.
struct PartitionedSignature {
  RankedSignature base;
  std::map<std::string, Category> category_of;

  Category category(const std::string& sym) const;

  friend bool operator==(const PartitionedSignature&, const PartitionedSignature&) = default;
};

enum class ActionKind {
  PushConst,  // constant push symbol: a -> q(c), c in Gamma_0 \ {bot}
  PushBin,    // f(q1(y1),q2(y2)) -> q(h(y1,y2)), h in Gamma_2
  EmitBot,    // a -> q(bot)
  Keep1,      // -> q(y1)
  Keep2,      // -> q(y2)
  PopSym,     // pop top symbol h of the designated son's memory
  PopBot,     // the bot variant of a pop rule
};

struct Rule {
  std::string symbol;
  std::string q1;
  std::string q2;  // empty for constant symbols
  Guard guard = Guard::None;
  ActionKind action = ActionKind::EmitBot;
  std::string mem_symbol;  // payload for PushConst/PushBin/PopSym
  std::string target;
  // pop rules only: which son's memory is read and which child is kept
  // (PopBot uses pop_side alone). Must agree with the symbol's category in
  // visibly automata; general TAM rules stand on their own.
  int pop_side = 0;
  int pop_child = 0;

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

Rule pop_rule(const std::string& sym, const std::string& q1, const std::string& q2,
              Category cat, const std::string& popped_or_empty, const std::string& tgt);

std::string print_rule(const Rule& r);

struct Vtam {
  std::string name = "a";
  PartitionedSignature sigma;
  RankedSignature gamma;  // bot implicit, never declared here
  RelationKind relation = RelationKind::None;
  std::vector<std::string> states;
  std::set<std::string> final;
  std::vector<Rule> rules;

  bool has_state(const std::string& q) const;
  bool has_guarded_rules(Guard g) const;
  bool has_bt_rules() const;
  bool has_neg_rules() const;
};

struct Configuration {
  std::string state;
  Term memory;

  friend bool operator<(const Configuration& a, const Configuration& b) {
    if (a.state != b.state) return a.state < b.state;
    return a.memory < b.memory;
  }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Checks all Vtam invariants (visibility, category/action/guard legality,
// declared states and symbols, guard/relation coherence). Throws
// ValidationError carrying one diagnostic per violation.
void validate(const Vtam& a);

// Weaker check used for general TAMs fed to the saturation engine: every
// rule is internally well-formed against the signatures and states, but no
// visibility (rule category = symbol category) is required.
void validate_rules_only(const Vtam& a);

// Per-category uniqueness conditions.
bool is_deterministic(const Vtam& a);

// Adds a trash state (and trash rules) so that every term whose memory
// shape is defined reaches at least one state. Completion may add fresh
// memory symbols when gamma lacks a usable constant or binary symbol.
Vtam complete(const Vtam& a);

// Structural coverage check: every left-member pattern has a rule.
bool is_complete(const Vtam& a);

// Drops rules whose left states can never be reached (bottom-up state
// reachability ignoring memories and guards). States are kept.
Vtam prune_unreachable_rules(const Vtam& a);

// ---- Memory shapes ----------------------------------------------------

// The label-free abstraction of the memory reached after reading a term;
// determined by the signature partition alone.
class MemShape {
public:
  enum Kind { BotLeaf, ConstLeaf, Node };

  static MemShape bot() { return MemShape(BotLeaf); }
  static MemShape cst() { return MemShape(ConstLeaf); }
  static MemShape node(MemShape l, MemShape r);

  Kind kind() const { return kind_; }
  const MemShape& left() const { return kids_->first; }
  const MemShape& right() const { return kids_->second; }

  friend bool operator==(const MemShape& a, const MemShape& b);

private:
  explicit MemShape(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<std::pair<MemShape, MemShape>> kids_;
};

// Stuck is reported as nullopt (a pop reached a non-bot constant memory).
std::optional<MemShape> memory_shape(const PartitionedSignature& p, const Term& t);

// Shape equality identifying BotLeaf with ConstLeaf.
bool struct_eq(const MemShape& m1, const MemShape& m2);

MemShape shape_of_memory(const Term& memory);

// True when the two memory terms are related under `kind`.
bool relation_holds(RelationKind kind, const Term& m1, const Term& m2);

}  // namespace vtam

#endif
