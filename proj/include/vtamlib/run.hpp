#ifndef VTAMLIB_RUN_HPP
#define VTAMLIB_RUN_HPP

#include <cstdint>
#include <memory>
#include <set>

#include "vtamlib/automaton.hpp"

namespace vtam {

struct RunBudget {
  // Cap on the configuration-set size at any single node.
  std::size_t max_configs_per_node = 1000000;
};

// One bottom-up step at the root of `symbol(children...)`. Children carry the
// configuration reached below plus the input subterm (needed by bt guards).
// Rules are matched individually, so this also serves general TAMs.
std::set<Configuration> step_root(
    const Vtam& a, const std::string& symbol,
    const std::vector<std::pair<Configuration, Term>>& children);

// Exactly { (q,m) | t ->* q(m) }, bottom-up with per-subterm memoization.
std::set<Configuration> all_root_configs(const Vtam& a, const Term& t,
                                         const RunBudget& budget = {});

bool accepts_by_runs(const Vtam& a, const Term& t, const RunBudget& budget = {});

// Amortizes the rule index and the per-subterm memo across many queries
// against one automaton.
class RunEvaluator {
public:
  explicit RunEvaluator(const Vtam& a, RunBudget budget = {});
  ~RunEvaluator();
  RunEvaluator(const RunEvaluator&) = delete;
  RunEvaluator& operator=(const RunEvaluator&) = delete;

  std::set<Configuration> configs(const Term& t);
  bool accepts(const Term& t);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vtam

#endif
