#include "vtamlib/oracle.hpp"

#include <algorithm>

namespace vtam {

TermEnumerator::TermEnumerator(const RankedSignature& sig, EnumBudget budget)
    : sig_(sig), budget_(budget) {
  if (sig.constants().empty())
    throw ValidationError({"term enumeration needs at least one constant"});
  by_size_.resize(budget_.max_size + 1);
  if (budget_.max_size >= 1) fill_size(1);
}

void TermEnumerator::fill_size(std::size_t size) {
  auto& bucket = by_size_[size];
  bucket.clear();
  if (size == 1) {
    for (const auto& c : sig_.constants()) bucket.emplace_back(c);
  } else if (size % 2 == 1) {
    // size = 1 + left + right with left,right odd
    for (std::size_t left = 1; left + 2 <= size; left += 2) {
      std::size_t right = size - 1 - left;
      for (const auto& f : sig_.binaries())
        for (const auto& lt : by_size_[left])
          for (const auto& rt : by_size_[right])
            bucket.push_back(Term(f, {lt, rt}));
    }
  }
  std::sort(bucket.begin(), bucket.end(), [](const Term& a, const Term& b) {
    return print_term(a) < print_term(b);
  });
}

bool TermEnumerator::next(Term& out) {
  if (emitted_ >= budget_.max_count) return false;
  while (size_ <= budget_.max_size) {
    if (index_ < by_size_[size_].size()) {
      out = by_size_[size_][index_++];
      ++emitted_;
      return true;
    }
    size_ += 1;
    index_ = 0;
    if (size_ <= budget_.max_size) fill_size(size_);
  }
  return false;
}

std::vector<Term> enumerate_terms(const RankedSignature& sig, const EnumBudget& b) {
  TermEnumerator en(sig, b);
  std::vector<Term> out;
  Term t;
  while (en.next(t)) out.push_back(t);
  return out;
}

bool brute_accepts(const Vtam& a, const Term& t, const RunBudget& rb) {
  return accepts_by_runs(a, t, rb);
}

std::set<Term> brute_memory(const Vtam& a, const std::string& q, const EnumBudget& b,
                            const RunBudget& rb) {
  std::set<Term> out;
  TermEnumerator en(a.sigma.base, b);
  Term t;
  while (en.next(t)) {
    for (const auto& c : all_root_configs(a, t, rb))
      if (c.state == q) out.insert(c.memory);
  }
  return out;
}

MemoryFixpoint memory_fixpoint(const Vtam& a, std::size_t retain_size,
                               std::size_t max_total) {
  for (const auto& r : a.rules)
    if (r.guard == Guard::BtEq || r.guard == Guard::BtNeq)
      throw UnsupportedError("memory fixpoint has no reading for bt guards");

  MemoryFixpoint fx;
  for (const auto& q : a.states) {
    fx.memories[q];
    fx.inhabited[q] = false;
  }
  std::size_t total = 0;

  auto add = [&](const std::string& q, const Term& m) {
    bool changed = !fx.inhabited[q];
    fx.inhabited[q] = true;
    if (term_size(m) <= retain_size && fx.memories[q].insert(m).second) {
      if (++total > max_total) throw BudgetError("memory fixpoint budget exceeded");
      changed = true;
    }
    return changed;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : a.rules) {
      switch (r.action) {
        case ActionKind::PushConst:
          changed |= add(r.target, Term(r.mem_symbol));
          break;
        case ActionKind::EmitBot:
          changed |= add(r.target, Term(kBot));
          break;
        case ActionKind::PushBin:
          for (const auto& m1 : fx.memories[r.q1])
            for (const auto& m2 : fx.memories[r.q2])
              changed |= add(r.target, Term(r.mem_symbol, {m1, m2}));
          break;
        case ActionKind::Keep1:
        case ActionKind::Keep2: {
          const std::string& kept = r.action == ActionKind::Keep1 ? r.q1 : r.q2;
          const std::string& other = r.action == ActionKind::Keep1 ? r.q2 : r.q1;
          for (const auto& m : fx.memories[kept]) {
            if (r.guard == Guard::None) {
              if (fx.inhabited[other]) changed |= add(r.target, m);
            } else {
              for (const auto& mo : fx.memories[other]) {
                bool rel = relation_holds(a.relation, r.action == ActionKind::Keep1 ? m : mo,
                                          r.action == ActionKind::Keep1 ? mo : m);
                if ((r.guard == Guard::RelPos) == rel) {
                  changed |= add(r.target, m);
                  break;
                }
              }
            }
          }
          break;
        }
        case ActionKind::PopSym: {
          const std::string& side = r.pop_side == 1 ? r.q1 : r.q2;
          const std::string& other = r.pop_side == 1 ? r.q2 : r.q1;
          if (!fx.inhabited[other]) break;
          for (const auto& m : fx.memories[side]) {
            if (m.root() != r.mem_symbol || m.children().size() != 2) continue;
            changed |= add(r.target,
                           m.children()[static_cast<std::size_t>(r.pop_child) - 1]);
          }
          break;
        }
        case ActionKind::PopBot: {
          const std::string& side = r.pop_side == 1 ? r.q1 : r.q2;
          const std::string& other = r.pop_side == 1 ? r.q2 : r.q1;
          if (!fx.inhabited[other]) break;
          if (fx.memories[side].count(Term(kBot))) changed |= add(r.target, Term(kBot));
          break;
        }
      }
    }
  }
  return fx;
}

}  // namespace vtam
