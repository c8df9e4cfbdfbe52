#ifndef VTAMLIB_ORACLE_HPP
#define VTAMLIB_ORACLE_HPP

#include <cstddef>
#include <set>
#include <vector>

#include "vtamlib/run.hpp"

namespace vtam {

struct EnumBudget {
  std::size_t max_size = 7;
  std::size_t max_count = 1000000;
};

// Streams all ground terms of size <= max_size, each exactly once, in
// size-then-print-lexicographic order, truncated at max_count.
class TermEnumerator {
public:
  TermEnumerator(const RankedSignature& sig, EnumBudget budget);

  // Fills `out` and returns true, or returns false when exhausted.
  bool next(Term& out);

private:
  void fill_size(std::size_t size);

  RankedSignature sig_;
  EnumBudget budget_;
  std::size_t emitted_ = 0;
  std::size_t size_ = 1;
  std::size_t index_ = 0;
  std::vector<std::vector<Term>> by_size_;  // by_size_[s] = sorted terms of size s
};

// Convenience: the whole stream as a vector.
std::vector<Term> enumerate_terms(const RankedSignature& sig, const EnumBudget& b);

bool brute_accepts(const Vtam& a, const Term& t, const RunBudget& rb = {});

// Union over enumerated inputs of the memories reached in state q.
std::set<Term> brute_memory(const Vtam& a, const std::string& q, const EnumBudget& b,
                            const RunBudget& rb = {});

// Least-fixpoint under-approximation of the memory languages: memories up
// to `retain_size` are kept per state, larger derivable memories only flip
// the state's inhabited flag (which unguarded partners need). Everything
// reported is genuinely derivable; completeness up to a size k needs
// retain_size comfortably above k when pop rules are present.
struct MemoryFixpoint {
  std::map<std::string, std::set<Term>> memories;
  std::map<std::string, bool> inhabited;
};

MemoryFixpoint memory_fixpoint(const Vtam& a, std::size_t retain_size,
                               std::size_t max_total = 2000000);

}  // namespace vtam

#endif
