#include "vtamlib/run.hpp"

#include <map>

namespace vtam {

namespace {

// Applies one rule to matching child configurations; nullopt when the rule
// does not fire (wrong states, guard false, memory pattern mismatch).
std::optional<Configuration> apply_rule(const Vtam& a, const Rule& r,
                                        const std::vector<std::pair<Configuration, Term>>& kids) {
  if (kids.empty()) {
    switch (r.action) {
      case ActionKind::PushConst: return Configuration{r.target, Term(r.mem_symbol)};
      case ActionKind::EmitBot: return Configuration{r.target, Term(kBot)};
      default: return std::nullopt;
    }
  }
  const Configuration& c1 = kids[0].first;
  const Configuration& c2 = kids[1].first;
  if (c1.state != r.q1 || c2.state != r.q2) return std::nullopt;

  switch (r.guard) {
    case Guard::None: break;
    case Guard::RelPos:
      if (!relation_holds(a.relation, c1.memory, c2.memory)) return std::nullopt;
      break;
    case Guard::RelNeg:
      if (relation_holds(a.relation, c1.memory, c2.memory)) return std::nullopt;
      break;
    case Guard::BtEq:
      if (!(kids[0].second == kids[1].second)) return std::nullopt;
      break;
    case Guard::BtNeq:
      if (kids[0].second == kids[1].second) return std::nullopt;
      break;
  }

  switch (r.action) {
    case ActionKind::PushBin:
      return Configuration{r.target, Term(r.mem_symbol, {c1.memory, c2.memory})};
    case ActionKind::Keep1: return Configuration{r.target, c1.memory};
    case ActionKind::Keep2: return Configuration{r.target, c2.memory};
    case ActionKind::PopSym: {
      const Term& m = r.pop_side == 1 ? c1.memory : c2.memory;
      if (m.root() != r.mem_symbol || m.children().size() != 2) return std::nullopt;
      return Configuration{r.target, m.children()[static_cast<std::size_t>(r.pop_child) - 1]};
    }
    case ActionKind::PopBot: {
      const Term& m = r.pop_side == 1 ? c1.memory : c2.memory;
      if (!(m == Term(kBot))) return std::nullopt;
      return Configuration{r.target, Term(kBot)};
    }
    default: return std::nullopt;
  }
}

// Rules keyed by (symbol, q1, q2) so run sets scale with matches, not with
// the full rule table.
struct RunIndex {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const Rule*>> bin;
  std::map<std::string, std::vector<const Rule*>> leaf;

  explicit RunIndex(const Vtam& a) {
    for (const auto& r : a.rules) {
      if (r.q1.empty())
        leaf[r.symbol].push_back(&r);
      else
        bin[{r.symbol, r.q1, r.q2}].push_back(&r);
    }
  }
  const std::vector<const Rule*>& leaf_rules(const std::string& sym) const {
    static const std::vector<const Rule*> none;
    auto it = leaf.find(sym);
    return it == leaf.end() ? none : it->second;
  }
  const std::vector<const Rule*>& bin_rules(const std::string& sym, const std::string& q1,
                                            const std::string& q2) const {
    static const std::vector<const Rule*> none;
    auto it = bin.find({sym, q1, q2});
    return it == bin.end() ? none : it->second;
  }
};

std::set<Configuration> configs_rec(const Vtam& a, const RunIndex& idx, const Term& t,
                                    std::map<Term, std::set<Configuration>>& memo,
                                    const RunBudget& budget) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;

  std::set<Configuration> out;
  if (t.is_leaf()) {
    for (const Rule* r : idx.leaf_rules(t.root()))
      if (auto c = apply_rule(a, *r, {})) out.insert(*c);
  } else {
    auto left = configs_rec(a, idx, t.children()[0], memo, budget);
    auto right = configs_rec(a, idx, t.children()[1], memo, budget);
    for (const auto& cl : left) {
      for (const auto& cr : right) {
        std::vector<std::pair<Configuration, Term>> kids = {{cl, t.children()[0]},
                                                            {cr, t.children()[1]}};
        for (const Rule* r : idx.bin_rules(t.root(), cl.state, cr.state))
          if (auto c = apply_rule(a, *r, kids)) out.insert(*c);
        if (out.size() > budget.max_configs_per_node)
          throw BudgetError("configuration budget exceeded at node " + print_term(t));
      }
    }
  }
  memo.emplace(t, out);
  return out;
}

}  // namespace

std::set<Configuration> step_root(const Vtam& a, const std::string& symbol,
                                  const std::vector<std::pair<Configuration, Term>>& children) {
  std::set<Configuration> out;
  for (const auto& r : a.rules) {
    if (r.symbol != symbol) continue;
    if (auto c = apply_rule(a, r, children)) out.insert(*c);
  }
  return out;
}

std::set<Configuration> all_root_configs(const Vtam& a, const Term& t, const RunBudget& budget) {
  RunIndex idx(a);
  std::map<Term, std::set<Configuration>> memo;
  return configs_rec(a, idx, t, memo, budget);
}

bool accepts_by_runs(const Vtam& a, const Term& t, const RunBudget& budget) {
  for (const auto& c : all_root_configs(a, t, budget))
    if (a.final.count(c.state)) return true;
  return false;
}

struct RunEvaluator::Impl {
  Vtam a;
  RunBudget budget;
  RunIndex idx;
  std::map<Term, std::set<Configuration>> memo;

  Impl(const Vtam& src, RunBudget b) : a(src), budget(b), idx(a) {}
};

RunEvaluator::RunEvaluator(const Vtam& a, RunBudget budget)
    : impl_(std::make_unique<Impl>(a, budget)) {}

RunEvaluator::~RunEvaluator() = default;

std::set<Configuration> RunEvaluator::configs(const Term& t) {
  return configs_rec(impl_->a, impl_->idx, t, impl_->memo, impl_->budget);
}

bool RunEvaluator::accepts(const Term& t) {
  for (const auto& c : configs(t))
    if (impl_->a.final.count(c.state)) return true;
  return false;
}

}  // namespace vtam
