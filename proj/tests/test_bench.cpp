#include "doctest.h"

#include <cmath>
#include <sstream>

#include "xpadic/bench.hpp"
#include "xpadic/dsl.hpp"
#include "xpadic/errors.hpp"
#include "xpadic/overhead.hpp"
#include "xpadic/query.hpp"

using namespace xpadic;

namespace {

struct BudgetScope {
  int saved;
  explicit BudgetScope(int n) : saved(lazy::config().max_epoch) { lazy::config().max_epoch = n; }
  ~BudgetScope() { lazy::config().max_epoch = saved; }
};

}  // namespace

TEST_CASE("overhead formulas") {
  const OverheadModel m = overhead(1, 2);
  CHECK(*m.r == 4);
  CHECK(*m.b_star == 2);
  CHECK(*m.r_star == 4);
  CHECK(*overhead(3, 2).r == mpq_class(16, 7));
  CHECK_FALSE(overhead(3, 2).b_star.has_value());
  CHECK(overhead(3, 2).r_star_approx == doctest::Approx(4.0 * std::cbrt(4.0) / 3.0));
  CHECK(*overhead(1, 3).r == mpq_class(9, 2));
  CHECK(overhead_within(3, 2, mpq_class(108, 100)));
  CHECK_FALSE(overhead_within(3, 2, mpq_class(107, 100)));
  CHECK(overhead_within(1, 2, 1));
  CHECK_THROWS_AS(overhead(0, 2), DomainError);
  CHECK_THROWS_AS(overhead(1, 1), DomainError);
}

TEST_CASE("b* minimizes r for small integer alpha") {
  for (long a = 1; a <= 6; ++a) {
    const long double best = overhead(a, 2).r_star_approx;
    for (int t = 101; t <= 400; ++t) {
      CHECK(overhead(a, mpq_class(t, 100)).r_approx >= best - 1e-12L);
    }
    // within 8% of the optimum up to cubic cost, within 2x always; r <= 4 for alpha >= 1
    if (a <= 3) CHECK(overhead_within(a, 2, mpq_class(108, 100)));
    CHECK(overhead_within(a, 2, 2));
    CHECK(*overhead(a, 2).r <= 4);
  }
}

TEST_CASE("expression language") {
  BudgetScope scope(8);
  auto q2 = ExactStructure::prime_field(2);
  CHECK(valuation(parse_element("(12)", q2)) == 2);
  CHECK(valuation(parse_element("let a = 1/3; let b = a*a; 4*b - 8", q2)) == 2);
  CHECK(weakly_equal(parse_element("2^-3 * 16", q2).at(4), ApproxElement::from_integer(q2.at(4), 2)));
  CHECK(weakly_equal(parse_element("-(3 - 5)", q2).at(4), ApproxElement::from_integer(q2.at(4), 2)));
  const ExactPoly f = parse_polynomial("x^2 - 2", q2);
  CHECK(f.degree() == 2);
  CHECK(weakly_equal(f.at(3), ApproxPoly(q2.at(3), {ApproxElement::from_integer(q2.at(3), -2),
                                                    ApproxElement::precise_zero(q2.at(3)),
                                                    ApproxElement::from_integer(q2.at(3), 1)})));
  const ExactPoly g = parse_polynomial("(x + 1)*(x - 1)/2", q2);
  CHECK(weakly_equal(g.at(3).coeff(0), ApproxElement::from_rational(q2.at(3), mpq_class(-1, 2))));
  CHECK(parse_expression("1 + 2 * 3", q2).literals.size() == 3);
  CHECK_THROWS_AS(parse_element("1 +", q2), ParseError);
  CHECK_THROWS_AS(parse_element("y", q2), ParseError);
  CHECK_THROWS_AS(parse_element("x", q2), ParseError);
  CHECK_THROWS_AS(parse_element("1/x", q2), ParseError);
  CHECK_THROWS_AS(parse_element("1 2", q2), ParseError);
  CHECK_THROWS_AS(valuation(parse_element("1-1", q2), 5), BudgetExhausted);
}

TEST_CASE("sum experiments agree across modes and with the rational oracle") {
  BudgetScope scope(10);
  for (int experiment : {1, 2}) {
    SumSpec spec;
    spec.experiment = experiment;
    spec.n = 40;
    spec.p = experiment == 1 ? 2 : 7;
    spec.seed = 11;
    spec.max_epoch = 7;
    std::vector<std::string> reference;
    for (Mode m : all_modes()) {
      const SumRun run = run_sum(spec, m);
      REQUIRE(run.residues.size() == 7);
      if (reference.empty()) {
        reference = run.residues;
      } else {
        CHECK(run.residues == reference);
      }
      if (m == Mode::exact_optimized) CHECK(run.y_deps == 3);
      for (double t : run.epoch_s) CHECK(t >= 0);
    }
    const mpq_class y = sum_oracle(spec);
    const ExactStructure s = ExactStructure::prime_field(spec.p);
    for (int n = 1; n <= 7; ++n) {
      const ApproxElement e = ExactElement::from_rational(s, y).at(n);
      CHECK(reference[static_cast<std::size_t>(n - 1)] ==
            std::to_string(e.weak_valuation()) + ":" + std::to_string(e.relative_precision()) + ":" +
                e.unit().z.get_str(16));
    }
  }
}

TEST_CASE("small sums match the integer oracle") {
  BudgetScope scope(10);
  SumSpec spec;
  spec.n = 4;
  spec.seed = 3;
  spec.max_epoch = 6;
  const mpq_class y = sum_oracle(spec);
  const SumRun run = run_sum(spec, Mode::exact_default);
  const ApproxRing r = ExactStructure::prime_field(2).at(6);
  const ApproxElement e = ApproxElement::from_rational(r, y).truncated(64);
  CHECK(run.residues.back() == std::to_string(e.weak_valuation()) + ":" +
                                   std::to_string(e.relative_precision()) + ":" + e.unit().z.get_str(16));
}

TEST_CASE("bench reports and CSV") {
  BudgetScope scope(10);
  SumSpec spec;
  spec.n = 20;
  spec.max_epoch = 4;
  const BenchReport r = bench_sum(spec, Mode::exact_default, 3);
  CHECK(r.repetitions == 3);
  CHECK(r.total.mean >= r.approx.mean);
  std::ostringstream os;
  write_csv_header(os);
  write_csv(os, r);
  const std::string csv = os.str();
  CHECK(csv.rfind("experiment,mode,N,p,seed,epoch,construct_s,approx_s,final_s\n", 0) == 0);
  CHECK(csv.find("exp1,exact-default,20,2,1,4,") != std::string::npos);
  CHECK(csv.find("exp1,exact-default,20,2,1,all,") != std::string::npos);
  CHECK(parse_mode("exact-no-checks") == Mode::exact_no_checks);
  CHECK_THROWS_AS(parse_mode("fast"), DomainError);
}

TEST_CASE("factor experiment") {
  BudgetScope scope(10);
  FactorSpec f;
  f.d = 2;
  f.u = 0;
  f.max_epoch = 7;
  const FactorReport r = bench_factor(f);
  CHECK(r.shifted_outcome == "irreducible");
  CHECK(r.certification_epoch == 5);  // 2^5 > 21 >= 2^4
  for (std::size_t n = 1; n < r.cumulative_s.size(); ++n) CHECK(r.cumulative_s[n] >= r.cumulative_s[n - 1]);

  f.d = 4;
  f.u = 5;
  const FactorReport r4 = bench_factor(f);
  CHECK(r4.direct_outcome == "requires_further_methods");
  CHECK(r4.shifted_outcome == "irreducible");
  CHECK(r4.certification_epoch == 6);  // 2^6 > 41 >= 2^5

  f.d = 2;
  f.reducible = true;
  const FactorReport g = bench_factor(f);
  CHECK(g.shifted_outcome == "requires_further_methods");
}
