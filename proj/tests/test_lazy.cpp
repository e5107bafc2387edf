#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "xpadic/errors.hpp"
#include "xpadic/lazy.hpp"
#include "xpadic/rings.hpp"

using namespace xpadic;
using lazy::approximation;
using lazy::Dep;
using lazy::NodePtr;
using lazy::Type;
using lazy::Value;

namespace {

struct BudgetScope {
  int saved;
  bool saved_validate;
  explicit BudgetScope(int n) : saved(lazy::config().max_epoch), saved_validate(lazy::config().validate) {
    lazy::config().max_epoch = n;
  }
  ~BudgetScope() {
    lazy::config().max_epoch = saved;
    lazy::config().validate = saved_validate;
    lazy::config().on_get_approx = {};
  }
};

const ApproxElement& elt(const Value& v) { return std::get<ApproxElement>(v); }

}  // namespace

TEST_CASE("epoch precision doubles") {
  CHECK(lazy::epoch_precision(1) == 2);
  CHECK(lazy::epoch_precision(4) == 16);
  CHECK(lazy::epoch_precision(16) == 65536);
}

TEST_CASE("coercion of 1 into Z_3 refines by squaring the modulus") {
  BudgetScope scope(10);
  auto z3 = ExactStructure::prime_ring(3);
  auto one = ExactElement::from_integer(z3, 1);
  CHECK(one.at(1).to_string() == "1 + O(3^2)");
  CHECK(one.at(2).to_string() == "1 + O(3^4)");
  CHECK(one.at(3).to_string() == "1 + O(3^8)");
}

TEST_CASE("cached approximations are not recomputed") {
  BudgetScope scope(10);
  auto q2 = ExactStructure::prime_field(2);
  auto x = ExactElement::from_integer(q2, 3) * ExactElement::from_integer(q2, 5);
  std::map<std::uint64_t, int> calls;
  lazy::config().on_get_approx = [&](const lazy::Node& n, int) { ++calls[n.id()]; };
  x.at(4);
  const int first = calls[x.node()->id()];
  x.at(4);
  x.at(2);
  CHECK(calls[x.node()->id()] == first);
  CHECK(first == 4);
}

TEST_CASE("division waits for a certified divisor") {
  BudgetScope scope(10);
  auto q2 = ExactStructure::prime_field(2);
  auto z = ExactElement::from_integer(q2, 1) / ExactElement::from_integer(q2, 4);
  CHECK(z.node()->min_epoch() == 2);
  // the epoch-1 value is the epoch-2 value restricted to precision 2
  const ApproxElement z1 = z.at(1);
  const ApproxElement z2 = z.at(2);
  CHECK(z1.ring().precision() == 2);
  CHECK(z2.weak_valuation() == -2);
  CHECK(z1.weak_valuation() == -2);
  CHECK(z1.relative_precision() == 2);
  CHECK(weakly_equal(z1, z2));
}

TEST_CASE("division by zero exhausts the budget") {
  BudgetScope scope(6);
  auto q2 = ExactStructure::prime_field(2);
  auto one = ExactElement::from_integer(q2, 1);
  CHECK_THROWS_AS(one / (one - one), BudgetExhausted);
  try {
    (void)(one / (one - one));
  } catch (const BudgetExhausted& e) {
    CHECK(e.last_weak_valuation() == 64);
  }
  CHECK_THROWS_AS(one / ExactElement::zero(q2), BudgetExhausted);
}

TEST_CASE("validation rejects regressions") {
  BudgetScope scope(10);
  auto q2 = ExactStructure::prime_field(2);
  auto node = ExactElement::from_integer(q2, 1).node();
  approximation(node, 2);
  const ApproxRing r = q2.at(3);
  CHECK(lazy::is_valid_approximation(ApproxElement::from_rational(r, 1), *node, 3));
  CHECK_FALSE(lazy::is_valid_approximation(ApproxElement::from_rational(r, 3), *node, 3));
  // digit 1 differs from 1 + O(2^2)
  auto r2 = q2.at(2);
  auto node1 = ExactElement::from_integer(q2, 1).node();
  approximation(node1, 1);
  CHECK(lazy::is_valid_approximation(ApproxElement::from_rational(r2, 1), *node1, 2));
  CHECK_FALSE(lazy::is_valid_approximation(ApproxElement::from_rational(r2, 3), *node1, 2));
  // precision lost: 1 + O(2^2) after 1 + O(2^4)
  auto node2 = ExactElement::from_integer(q2, 1).node();
  approximation(node2, 2);
  const ApproxElement coarse = ApproxElement::from_rational(q2.at(3), 1).truncated(2);
  CHECK_FALSE(lazy::is_valid_approximation(coarse, *node2, 3));
}

TEST_CASE("a faulty kind is caught at the epoch where it contradicts itself") {
  BudgetScope scope(10);
  auto q2 = ExactStructure::prime_field(2);
  auto node = lazy::make_user_node(
      Type::element, q2.node(),
      [](int n, const lazy::Args& deps) -> Value {
        const ApproxRing& r = deps.get<ApproxRing>(0);
        return ApproxElement::from_rational(r, n >= 3 ? 3 : 1);
      },
      {Dep::lazy(q2.node())}, "faulty");
  CHECK_NOTHROW(approximation(node, 2));
  CHECK_THROWS_AS(approximation(node, 3), ValidationError);
}

TEST_CASE("user kinds") {
  BudgetScope scope(10);
  auto q5 = ExactStructure::prime_field(5);
  auto x = ExactElement::from_rational(q5, mpq_class(2, 7));
  auto id = lazy::make_user_node(
      Type::element, q5.node(),
      [](int, const lazy::Args& deps) -> Value { return deps[0]; }, {Dep::lazy(x.node())});
  for (int n = 1; n <= 6; ++n) CHECK(weakly_equal(elt(approximation(id, n)), x.at(n)));

  auto q3 = ExactStructure::prime_field(3);
  auto wrong = lazy::make_user_node(
      Type::element, q5.node(),
      [q3](int n, const lazy::Args&) -> Value { return ApproxElement::from_rational(q3.at(n), 1); },
      {});
  CHECK_THROWS_AS(approximation(wrong, 1), ValidationError);
}

TEST_CASE("disabling validation does not change values") {
  BudgetScope scope(10);
  auto q3 = ExactStructure::prime_field(3);
  auto build = [&] {
    auto a = ExactElement::from_rational(q3, mpq_class(5, 2));
    auto b = ExactElement::from_rational(q3, 9);
    return (a * a - b) / (a + b);
  };
  auto checked = build();
  lazy::config().validate = false;
  auto unchecked = build();
  for (int n = 1; n <= 8; ++n) {
    const ApproxElement u = unchecked.at(n);
    const ApproxElement c = checked.at(n);
    CHECK(u.to_string() == c.to_string());
  }
}

TEST_CASE("budget is enforced") {
  BudgetScope scope(4);
  auto q2 = ExactStructure::prime_field(2);
  auto x = ExactElement::from_integer(q2, 1);
  CHECK_THROWS_AS(x.at(5), BudgetExhausted);
  CHECK_NOTHROW(x.at(6, 6));
}

TEST_CASE("long chains do not exhaust the call stack") {
  BudgetScope scope(10);
  auto q2 = ExactStructure::prime_field(2);
  auto one = ExactElement::from_integer(q2, 1);
  ExactElement acc = one;
  for (int i = 0; i < 20000; ++i) acc = acc + one;
  CHECK(weakly_equal(acc.at(5), ApproxElement::from_rational(q2.at(5), 20001)));
}

TEST_CASE("optimize builds a straight-line program") {
  BudgetScope scope(12);
  auto q7 = ExactStructure::prime_field(7);
  auto x = ExactElement::from_rational(q7, mpq_class(3, 5));
  auto y = ExactElement::from_rational(q7, 14);
  auto z = (x + y) + x;
  auto opt = lazy::optimize(z.node(), {x.node(), y.node()});
  CHECK(opt->deps().size() == 3);
  const auto& program = std::get<std::shared_ptr<const lazy::StraightLineProgram>>(opt->deps()[0].constant);
  CHECK(program->code.size() == 2);
  for (int n = 1; n <= 10; ++n) CHECK(weakly_equal(elt(approximation(opt, n)), z.at(n)));

  auto w = x / y;
  CHECK_THROWS_AS(lazy::optimize(w.node(), {x.node()}), DomainError);
}

TEST_CASE("optimize takes the largest intermediate min_epoch") {
  BudgetScope scope(12);
  auto q2 = ExactStructure::prime_field(2);
  auto x = ExactElement::from_integer(q2, 3);
  auto big = ExactElement::from_integer(q2, 1 << 9);
  auto z = x / (x * big) + x;
  auto opt = lazy::optimize(z.node(), {x.node(), big.node()});
  CHECK(opt->min_epoch() == z.node()->deps()[0].node->min_epoch());
  for (int n = 1; n <= 8; ++n) CHECK(weakly_equal(elt(approximation(opt, n)), z.at(n)));
}

namespace {

struct Expr {
  mpq_class exact;
  ExactElement node;
};

// Random DAG over + - * / with a rational oracle; division only by nonzero
// values.
std::vector<Expr> random_dag(std::mt19937_64& rng, const ExactStructure& s, int size) {
  std::vector<Expr> pool;
  std::uniform_int_distribution<long> num(-60, 60), den(1, 30);
  for (int i = 0; i < 3; ++i) {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    pool.push_back({q, ExactElement::from_rational(s, q)});
  }
  std::uniform_int_distribution<int> op(0, 3);
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const Expr& a = pool[pick(rng)];
    const Expr& b = pool[pick(rng)];
    switch (op(rng)) {
      case 0: pool.push_back({a.exact + b.exact, a.node + b.node}); break;
      case 1: pool.push_back({a.exact - b.exact, a.node - b.node}); break;
      case 2: pool.push_back({a.exact * b.exact, a.node * b.node}); break;
      default:
        if (b.exact != 0) pool.push_back({a.exact / b.exact, a.node / b.node});
    }
  }
  return pool;
}

}  // namespace

TEST_CASE("optimized random expressions agree with the unoptimized graph") {
  BudgetScope scope(12);
  std::mt19937_64 rng(99);
  for (long p : {2L, 3L, 7L}) {
    auto s = ExactStructure::prime_field(p);
    for (int t = 0; t < 10; ++t) {
      auto pool = random_dag(rng, s, 12);
      std::vector<NodePtr> inputs{pool[0].node.node(), pool[1].node.node(), pool[2].node.node()};
      auto opt = lazy::optimize(pool.back().node.node(), inputs);
      for (int n = 1; n <= 10; ++n) {
        CHECK(weakly_equal(elt(approximation(opt, n)), pool.back().node.at(n)));
      }
    }
  }
}

TEST_CASE("each node computes each epoch at most once") {
  BudgetScope scope(12);
  std::mt19937_64 rng(5);
  auto s = ExactStructure::prime_field(3);
  auto pool = random_dag(rng, s, 40);
  std::map<std::pair<std::uint64_t, int>, int> calls;
  lazy::config().on_get_approx = [&](const lazy::Node& n, int e) { ++calls[{n.id(), e}]; };
  for (int n : {3, 1, 7, 5, 9}) {
    for (auto& e : pool) e.node.at(n);
  }
  for (const auto& [key, count] : calls) CHECK(count == 1);
}
