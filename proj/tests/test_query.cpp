#include "doctest.h"

#include <random>

#include "xpadic/errors.hpp"
#include "xpadic/query.hpp"

using namespace xpadic;

namespace {

struct BudgetScope {
  int saved;
  explicit BudgetScope(int n) : saved(lazy::config().max_epoch) { lazy::config().max_epoch = n; }
  ~BudgetScope() { lazy::config().max_epoch = saved; }
};

// Valuation of a nonzero rational by trial division.
long rational_valuation(const mpq_class& q, long p) {
  long v = 0;
  mpz_class n = q.get_num(), d = q.get_den();
  while (n % p == 0) n /= p, ++v;
  while (d % p == 0) d /= p, --v;
  return v;
}

}  // namespace

TEST_CASE("valuation of coerced integers and zeros") {
  BudgetScope scope(8);
  auto q2 = ExactStructure::prime_field(2);
  CHECK(valuation(ExactElement::from_integer(q2, 12)) == 2);
  CHECK(valuation(ExactElement::zero(q2)) == kInfinity);
  auto one = ExactElement::from_integer(q2, 1);
  CHECK_THROWS_AS(valuation(one - one), BudgetExhausted);
  try {
    valuation(one - one, 5);
  } catch (const BudgetExhausted& e) {
    CHECK(e.last_weak_valuation() == 32);
  }
}

TEST_CASE("valuation comparison terminates") {
  BudgetScope scope(8);
  auto q2 = ExactStructure::prime_field(2);
  auto eight = ExactElement::from_integer(q2, 8);
  CHECK(valuation_cmp(eight, 0) == 1);
  CHECK(valuation_cmp(eight, 3) == 0);
  CHECK(valuation_cmp(eight, 4) == -1);
  auto one = ExactElement::from_integer(q2, 1);
  CHECK(valuation_cmp(one - one, 5) == 1);
  for (int v = 0; v <= 50; ++v) CHECK(valuation_cmp(one - one, v) == 1);
}

TEST_CASE("epoch reads") {
  BudgetScope scope(8);
  auto q2 = ExactStructure::prime_field(2);
  auto four = ExactElement::from_integer(q2, 4);
  auto diff = four - four;
  CHECK(is_weakly_zero_at(diff, 3));
  CHECK(weak_valuation_at(diff, 3) == 8);
  auto one = ExactElement::from_integer(q2, 1);
  for (int n = 1; n <= 6; ++n) CHECK_FALSE(is_weakly_zero_at(one, n));
  CHECK(abs_precision_at(ExactElement::from_integer(ExactStructure::prime_field(3), 1), 2) == 4);
}

TEST_CASE("distinctness is semi-decidable") {
  BudgetScope scope(8);
  auto q2 = ExactStructure::prime_field(2);
  auto one = ExactElement::from_integer(q2, 1);
  CHECK(are_distinct(one, ExactElement::from_integer(q2, 1 + 1024)));
  CHECK(distinguishing_epoch(one, ExactElement::from_integer(q2, 1 + 1024)) == 4);
  CHECK(distinguishing_epoch(one, ExactElement::from_integer(q2, 3)) == 1);
  CHECK_THROWS_AS(are_distinct(one, one), BudgetExhausted);
}

TEST_CASE("valuations agree with rational valuations") {
  BudgetScope scope(10);
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
  for (long p : {2L, 3L, 7L}) {
    auto s = ExactStructure::prime_field(p);
    for (int i = 0; i < 100; ++i) {
      long a = num(rng);
      if (a == 0) a = 7;
      mpq_class q(a, den(rng));
      q.canonicalize();
      const ExactElement x = ExactElement::from_rational(s, q);
      const long v = rational_valuation(q, p);
      CHECK(valuation(x) == v);
      for (long w = v - 2; w <= v + 2; ++w) CHECK(valuation_cmp(x, w) == (v < w ? -1 : v == w ? 0 : 1));
      std::int64_t prev = weak_valuation_at(x, 1);
      for (int n = 2; n <= 6; ++n) {
        const std::int64_t cur = weak_valuation_at(x, n);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
  }
}
