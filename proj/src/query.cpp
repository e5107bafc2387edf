#include "xpadic/query.hpp"

#include "xpadic/errors.hpp"

namespace xpadic {

std::int64_t valuation(const ExactElement& x, std::optional<int> budget) {
  const int limit = budget.value_or(lazy::config().max_epoch);
  std::optional<std::int64_t> last;
  for (int n = 1; n <= limit; ++n) {
    const ApproxElement a = x.at(n, limit);
    if (a.valuation_known()) return a.weak_valuation();
    last = a.weak_valuation();
  }
  throw BudgetExhausted("valuation not determined within the epoch budget (the element may be zero)",
                        limit, last);
}

int valuation_cmp(const ExactElement& x, std::int64_t v, std::optional<int> budget) {
  const int limit = budget.value_or(lazy::config().max_epoch);
  std::optional<std::int64_t> last;
  for (int n = 1; n <= limit; ++n) {
    const ApproxElement a = x.at(n, limit);
    if (a.valuation_known() || a.absolute_precision() > v) {
      const std::int64_t w = a.weak_valuation();
      return w < v ? -1 : (w == v ? 0 : 1);
    }
    last = a.weak_valuation();
  }
  throw BudgetExhausted("valuation comparison needs more than the epoch budget", limit, last);
}

bool is_weakly_zero_at(const ExactElement& x, int epoch) { return x.at(epoch).is_weakly_zero(); }

std::int64_t weak_valuation_at(const ExactElement& x, int epoch) {
  return x.at(epoch).weak_valuation();
}

std::int64_t abs_precision_at(const ExactElement& x, int epoch) {
  return x.at(epoch).absolute_precision();
}

int distinguishing_epoch(const ExactElement& x, const ExactElement& y, std::optional<int> budget) {
  const int limit = budget.value_or(lazy::config().max_epoch);
  const ExactElement d = x - y;
  std::optional<std::int64_t> last;
  for (int n = 1; n <= limit; ++n) {
    const ApproxElement a = d.at(n, limit);
    if (!a.is_weakly_zero()) return n;
    last = a.weak_valuation();
    if (a.is_precise_zero()) break;
  }
  throw BudgetExhausted("elements not distinguished within the epoch budget (they may be equal)",
                        limit, last);
}

bool are_distinct(const ExactElement& x, const ExactElement& y, std::optional<int> budget) {
  distinguishing_epoch(x, y, budget);
  return true;
}

}  // namespace xpadic
