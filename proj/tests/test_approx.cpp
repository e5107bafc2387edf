#include "doctest.h"

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xpadic/approx.hpp"
#include "xpadic/errors.hpp"

using namespace xpadic;

namespace {

using E = ApproxElement;

// Base-p expansion of q to absolute precision n, computed by repeated
// division in plain integer arithmetic.
std::string series_oracle(mpq_class q, long p, long n) {
  if (q == 0) return "0";
  long v = 0;
  mpz_class num = q.get_num(), den = q.get_den();
  while (num % p == 0) num /= p, ++v;
  while (den % p == 0) den /= p, --v;
  mpz_class mod = 1;
  for (long i = v; i < n; ++i) mod *= p;
  mpz_class inv;
  mpz_class r = 0;
  if (v < n) {
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    r = num * inv % mod;
    if (r < 0) r += mod;
  }
  std::string out;
  for (long i = v; i < n; ++i) {
    const long d = mpz_class(r % p).get_si();
    r /= p;
    if (d == 0) continue;
    std::string pw = i == 1 ? std::to_string(p) : std::to_string(p) + "^" + std::to_string(i);
    std::string term = i == 0 ? std::to_string(d) : (d == 1 ? pw : std::to_string(d) + "*" + pw);
    out += (out.empty() ? "" : " + ") + term;
  }
  return out + (out.empty() ? "" : " + ") + "O(" + std::to_string(p) + "^" + std::to_string(n) + ")";
}

long vp(mpz_class z, long p) {
  long v = 0;
  while (z != 0 && z % p == 0) z /= p, ++v;
  return v;
}

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 500);
  long a = num(rng);
  if (a == 0) a = 1;
  return mpq_class(a, den(rng));
}

}  // namespace

TEST_CASE("rational coercion renders canonical series") {
  CHECK(E::from_rational(ApproxRing::prime(3, 2), 1).to_string() == "1 + O(3^2)");
  CHECK(E::from_rational(ApproxRing::prime(2, 4), 7).to_string() == "1 + 2 + 2^2 + O(2^4)");
  CHECK(E::from_rational(ApproxRing::prime(3, 2), 5).to_string() == "2 + 3 + O(3^2)");
  CHECK(E::from_rational(ApproxRing::prime(3, 3), mpq_class(1, 3)).to_string() ==
        "3^-1 + O(3^2)");
  CHECK(E::precise_zero(ApproxRing::prime(2, 5)).to_string() == "0");
  CHECK(E::weak_zero(ApproxRing::prime(2, 5), 5).to_string() == "O(2^5)");
}

TEST_CASE("rendering matches an independent digit expansion") {
  std::mt19937_64 rng(7);
  for (long p : {2L, 3L, 5L, 7L}) {
    auto ring = ApproxRing::prime(p, 9);
    for (int i = 0; i < 50; ++i) {
      const mpq_class q = random_rational(rng);
      const E x = E::from_rational(ring, q);
      CHECK(x.to_string() == series_oracle(q, p, x.absolute_precision()));
    }
  }
}

TEST_CASE("coercion of 12 into Q_2 keeps the full relative cap") {
  const E x = E::from_rational(ApproxRing::prime(2, 8), 12);
  CHECK(x.weak_valuation() == 2);
  CHECK(x.relative_precision() == 8);
}

TEST_CASE("product of elements with known valuation") {
  auto q2 = ApproxRing::prime(2, 8);
  const E a = E::from_parts(q2, 1, 3, Integral{1, {}});
  const E b = E::from_parts(q2, 1, 4, Integral{3, {}});
  const E c = a * b;
  CHECK(c.weak_valuation() == 2);
  CHECK(c.relative_precision() == 3);
}

TEST_CASE("inspect reports the representation") {
  auto q2 = ApproxRing::prime(2, 5);
  CHECK(inspect(E::from_rational(q2, 12)) == Inspection{2, 7, 5, false, false, true});
  CHECK(inspect(E::weak_zero(q2, 5)) == Inspection{5, 5, 0, true, false, false});
  CHECK(inspect(E::precise_zero(q2)) ==
        Inspection{kInfinity, kInfinity, 0, true, true, true});
}

TEST_CASE("arithmetic agrees with exact rational arithmetic") {
  std::mt19937_64 rng(11);
  for (long p : {2L, 3L, 7L}) {
    auto ring = ApproxRing::prime(p, 12);
    for (int i = 0; i < 200; ++i) {
      const mpq_class a = random_rational(rng), b = random_rational(rng);
      const E x = E::from_rational(ring, a), y = E::from_rational(ring, b);
      CHECK(weakly_equal(x + y, E::from_rational(ring, a + b)));
      CHECK(weakly_equal(x - y, E::from_rational(ring, a - b)));
      CHECK(weakly_equal(x * y, E::from_rational(ring, a * b)));
      CHECK(weakly_equal(x / y, E::from_rational(ring, a / b)));
      const E s = x + y;
      if (a + b != 0) {
        const long v = vp(mpq_class(a + b).get_num(), p) - vp(mpq_class(a + b).get_den(), p);
        if (s.valuation_known()) CHECK(s.weak_valuation() == v);
        else CHECK(s.weak_valuation() <= v);
      }
      CHECK((x * y).weak_valuation() == x.weak_valuation() + y.weak_valuation());
    }
  }
}

TEST_CASE("cancellation loses relative precision but keeps absolute precision") {
  auto q2 = ApproxRing::prime(2, 6);
  const E x = E::from_rational(q2, 1);
  const E y = E::from_rational(q2, 17);
  const E d = y - x;
  CHECK(d.weak_valuation() == 4);
  CHECK(d.absolute_precision() == 6);
  CHECK((x - x).is_weakly_zero());
  CHECK((x - x).absolute_precision() == 6);
  CHECK_FALSE((x - x).is_precise_zero());
}

TEST_CASE("division by a weakly zero element raises a precision error") {
  auto q2 = ApproxRing::prime(2, 6);
  const E one = E::from_rational(q2, 1);
  CHECK_THROWS_AS(one / (one - one), PrecisionError);
  CHECK_THROWS_AS((one - one).pow(-1), PrecisionError);
  CHECK(one.pow(0).relative_precision() == 6);
}

TEST_CASE("integer ring rejects negative valuation") {
  auto z3 = ApproxRing::prime(3, 5, false);
  CHECK_THROWS_AS(E::from_rational(z3, mpq_class(1, 3)), DomainError);
  CHECK_THROWS_AS(E::from_rational(z3, 1) / E::from_rational(z3, 3), DomainError);
}

TEST_CASE("elements of different families do not mix") {
  auto a = ApproxRing::prime(2, 5);
  auto b = ApproxRing::prime(2, 5);
  CHECK_THROWS_AS(E::from_rational(a, 1) + E::from_rational(b, 1), DomainError);
  CHECK_THROWS_AS(weakly_equal(E::from_rational(a, 1), E::from_rational(b, 1)), DomainError);
}

TEST_CASE("weak equality coerces to the finer ring") {
  auto a = ApproxRing::prime(5, 10);
  auto coarse = a.change_precision(3);
  const E x = E::from_rational(a, 1 + 125 * 7);
  const E y = E::from_rational(coarse, 1);
  CHECK(weakly_equal(x, y));
  CHECK_FALSE(weakly_equal(x, E::from_rational(coarse, 2)));
}

TEST_CASE("unramified quadratic extension of Q_2") {
  auto q2 = ApproxRing::prime(2, 10);
  std::vector<E> g{E::from_rational(q2, 1), E::from_rational(q2, 1), E::from_rational(q2, 1)};
  auto q4 = ApproxRing::extend(q2, g, ExtensionMode::unramified);
  CHECK(q4.ramification_index() == 1);
  CHECK(q4.residue_degree() == 2);
  CHECK(q4.precision() == 10);
  const E a = E::generator(q4);
  const E one = E::from_rational(q4, 1);
  CHECK((a * a + a + one).is_weakly_zero());
  CHECK(a.pow(3).to_string() == "1 + O(2^10)");

  // valuation of x + y*a is half the 2-adic valuation of its norm x^2 - xy + y^2
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> dist(-300, 300);
  for (int i = 0; i < 100; ++i) {
    const long x = dist(rng), y = dist(rng);
    if (x == 0 && y == 0) continue;
    const E z = E::from_rational(q4, x) + E::from_rational(q4, y) * a;
    const long norm = x * x - x * y + y * y;
    CHECK(z.valuation_known());
    CHECK(2 * z.weak_valuation() == vp(norm, 2));
    CHECK(weakly_equal(z * (one / z), one));
  }
}

TEST_CASE("Eisenstein extension by x^2 - 2") {
  auto q2 = ApproxRing::prime(2, 10);
  std::vector<E> g{E::from_rational(q2, -2), E::precise_zero(q2), E::from_rational(q2, 1)};
  auto r = ApproxRing::extend(q2, g, ExtensionMode::eisenstein);
  CHECK(r.ramification_index() == 2);
  CHECK(r.residue_degree() == 1);
  CHECK(r.precision() == 20);
  const E pi = E::generator(r);
  CHECK(weakly_equal(pi * pi, E::from_rational(r, 2)));
  CHECK(E::from_rational(r, 2).weak_valuation() == 2);
  CHECK(E::from_rational(r, 1).relative_precision() == 20);

  // v(x + y*pi) = v_2(x^2 - 2y^2)
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> dist(-300, 300);
  const E one = E::from_rational(r, 1);
  for (int i = 0; i < 100; ++i) {
    const long x = dist(rng), y = dist(rng);
    if (x == 0 && y == 0) continue;
    const E z = E::from_rational(r, x) + E::from_rational(r, y) * pi;
    CHECK(z.valuation_known());
    CHECK(z.weak_valuation() == vp(x * x - 2 * y * y, 2));
    CHECK(weakly_equal((z * z) / z, z));
  }
}

TEST_CASE("Eisenstein extension with a nontrivial unit in the constant term") {
  auto q3 = ApproxRing::prime(3, 8);
  // x^3 + 3x + 6
  std::vector<E> g{E::from_rational(q3, 6), E::from_rational(q3, 3), E::precise_zero(q3),
                   E::from_rational(q3, 1)};
  auto r = ApproxRing::extend(q3, g, ExtensionMode::eisenstein);
  const E pi = E::generator(r);
  const E three = E::from_rational(r, 3);
  CHECK(three.weak_valuation() == 3);
  CHECK((pi.pow(3) + three * pi + E::from_rational(r, 6)).is_weakly_zero());
  CHECK(weakly_equal(three / pi, three * pi.pow(-1)));
  CHECK(weakly_equal((three / pi) * pi, three));
}

TEST_CASE("extension tests reject bad defining polynomials") {
  auto q2 = ApproxRing::prime(2, 10);
  std::vector<E> reducible{E::from_rational(q2, -3), E::precise_zero(q2), E::from_rational(q2, 1)};
  CHECK_THROWS_AS(ApproxRing::extend(q2, reducible, ExtensionMode::unramified), DomainError);
  CHECK_THROWS_AS(ApproxRing::extend(q2, reducible, ExtensionMode::eisenstein), DomainError);
  std::vector<E> linear{E::from_rational(q2, 2), E::from_rational(q2, 1)};
  CHECK_THROWS_AS(ApproxRing::extend(q2, linear, ExtensionMode::eisenstein), DomainError);
  std::vector<E> not_monic{E::from_rational(q2, 2), E::precise_zero(q2), E::from_rational(q2, 3)};
  CHECK_THROWS_AS(ApproxRing::extend(q2, not_monic, ExtensionMode::eisenstein), DomainError);
}

TEST_CASE("towers compose ramification and residue degree") {
  auto q2 = ApproxRing::prime(2, 8);
  std::vector<E> g1{E::from_rational(q2, 1), E::from_rational(q2, 1), E::from_rational(q2, 1)};
  auto q4 = ApproxRing::extend(q2, g1, ExtensionMode::unramified);
  const E a = E::generator(q4);
  std::vector<E> g2{E::uniformizer(q4) * a, E::precise_zero(q4), E::from_rational(q4, 1)};
  auto top = ApproxRing::extend(q4, g2, ExtensionMode::eisenstein);
  CHECK(top.level() == 2);
  CHECK(top.ramification_index() == 2);
  CHECK(top.residue_degree() == 2);
  const E pi = E::generator(top);
  const E lifted = E::from_base(top, a);
  CHECK(weakly_equal(pi * pi + E::from_base(top, E::uniformizer(q4) * a), E::precise_zero(top)));
  CHECK(weakly_equal(lifted.pow(3), E::from_rational(top, 1)));
  CHECK(E::from_rational(top, 4).weak_valuation() == 4);
  CHECK(pi.to_string().find("pi2") != std::string::npos);
}

TEST_CASE("change_precision lowers and refuses to invent digits") {
  auto q2 = ApproxRing::prime(2, 6);
  std::vector<E> g{E::from_rational(q2, -2), E::precise_zero(q2), E::from_rational(q2, 1)};
  auto r = ApproxRing::extend(q2, g, ExtensionMode::eisenstein);
  auto low = r.change_precision(5);
  CHECK(low.precision() == 5);
  CHECK(low.family() == r.family());
  CHECK_THROWS_AS(r.change_precision(40), PrecisionError);
  CHECK(ApproxRing::prime(2, 6).change_precision(40).precision() == 40);
}

TEST_CASE("doubling one normalizes the leading digit away") {
  auto q2 = ApproxRing::prime(2, 4);
  const E two = E::from_rational(q2, 1) + E::from_rational(q2, 1);
  CHECK(two.weak_valuation() == 1);
  CHECK(two.relative_precision() == 3);
}

TEST_CASE("weak equality depends on the working precision") {
  auto r10 = ApproxRing::prime(2, 10);
  auto r11 = ApproxRing::prime(2, 11);
  CHECK(weakly_equal(E::from_rational(r10, 1), E::from_rational(r10, 1 + 1024)));
  CHECK_FALSE(weakly_equal(E::from_rational(r11, 1), E::from_rational(r11, 1 + 1024)));
  const E x = E::from_rational(r10, mpq_class(5, 9));
  CHECK(weakly_equal(x, x));
}

namespace {

struct Tree {
  mpq_class exact;
  E approx;
};

// Builds a random expression over small rationals, evaluated both exactly
// and in approximate arithmetic. Returns nullopt when a division hits an
// exactly zero divisor.
std::optional<Tree> random_tree(std::mt19937_64& rng, const ApproxRing& ring, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  const int op = depth == 0 ? 5 : pick(rng);
  if (op == 5) {
    const mpq_class q = random_rational(rng);
    return Tree{q, E::from_rational(ring, q)};
  }
  auto a = random_tree(rng, ring, depth - 1);
  if (!a) return std::nullopt;
  if (op == 4) {
    std::uniform_int_distribution<int> ex(-2, 3);
    const int n = ex(rng);
    if (n < 0 && (a->exact == 0 || a->approx.is_weakly_zero())) return std::nullopt;
    mpq_class r = 1;
    for (int i = 0; i < std::abs(n); ++i) r *= a->exact;
    if (n < 0) r = 1 / r;
    return Tree{r, a->approx.pow(n)};
  }
  auto b = random_tree(rng, ring, depth - 1);
  if (!b) return std::nullopt;
  switch (op) {
    case 0: return Tree{a->exact + b->exact, a->approx + b->approx};
    case 1: return Tree{a->exact - b->exact, a->approx - b->approx};
    case 2: return Tree{a->exact * b->exact, a->approx * b->approx};
    default:
      if (b->exact == 0 || b->approx.is_weakly_zero()) return std::nullopt;
      return Tree{a->exact / b->exact, a->approx / b->approx};
  }
}

}  // namespace

TEST_CASE("random expression trees agree with the rational oracle") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (long p : {2L, 3L, 7L}) {
    auto ring = ApproxRing::prime(p, 40);
    for (int i = 0; i < 150; ++i) {
      std::uniform_int_distribution<int> depth(1, 8);
      auto t = random_tree(rng, ring, depth(rng));
      if (!t) continue;
      ++checked;
      CHECK(weakly_equal(t->approx, E::from_rational(ring, t->exact)));
      if (t->approx.relative_precision() > 0) {
        // normalized: leading digit is nonzero
        CHECK(t->approx.unit().z % p != 0);
      }
    }
  }
  CHECK(checked > 200);
}
