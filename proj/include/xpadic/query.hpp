#pragma once

// Queries on exact elements. Those that may not terminate (the element might
// be zero) loop over epochs up to a budget and then raise BudgetExhausted
// carrying the last weak valuation seen.

#include <cstdint>
#include <optional>

#include "xpadic/rings.hpp"

namespace xpadic {

/// The valuation of x, or kInfinity for a precise zero.
std::int64_t valuation(const ExactElement& x, std::optional<int> budget = std::nullopt);

/// Sign of val(x) - v. Terminates once the valuation is known or the
/// absolute precision exceeds v.
int valuation_cmp(const ExactElement& x, std::int64_t v, std::optional<int> budget = std::nullopt);

bool is_weakly_zero_at(const ExactElement& x, int epoch);
std::int64_t weak_valuation_at(const ExactElement& x, int epoch);
std::int64_t abs_precision_at(const ExactElement& x, int epoch);

/// First epoch at which x - y is not weakly zero.
int distinguishing_epoch(const ExactElement& x, const ExactElement& y,
                         std::optional<int> budget = std::nullopt);

/// True once x and y are seen to differ. Never returns false: equal inputs
/// exhaust the budget.
bool are_distinct(const ExactElement& x, const ExactElement& y,
                  std::optional<int> budget = std::nullopt);

}  // namespace xpadic
