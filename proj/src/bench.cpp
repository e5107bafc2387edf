#include "xpadic/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "xpadic/errors.hpp"
#include "xpadic/newton.hpp"
#include "xpadic/rings.hpp"

namespace xpadic {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Exact identity of a prime-level value, much cheaper than the series form.
std::string fingerprint(const ApproxElement& a) {
  return std::to_string(a.weak_valuation()) + ":" + std::to_string(a.relative_precision()) + ":" +
         a.unit().z.get_str(16);
}

struct Seeds {
  mpq_class x1, x2;
};

Seeds seeds(int experiment) {
  if (experiment == 1) return {mpq_class(1), mpq_class(2)};
  if (experiment == 2) return {mpq_class(1, 3), mpq_class(1, 5)};
  throw DomainError("sum experiments are exp1 and exp2");
}

// (j, k) for x_3 .. x_N, zero-based.
std::vector<std::pair<std::size_t, std::size_t>> choices(const SumSpec& spec) {
  if (spec.n < 2) throw DomainError("sum experiments need N >= 2");
  std::mt19937_64 rng(spec.seed);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 2; i < static_cast<std::size_t>(spec.n); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    const std::size_t j = pick(rng);
    out.emplace_back(j, pick(rng));
  }
  return out;
}

struct ValidateScope {
  bool saved = lazy::config().validate;
  explicit ValidateScope(bool on) { lazy::config().validate = on; }
  ~ValidateScope() { lazy::config().validate = saved; }
};

SumRun run_replay(const SumSpec& spec) {
  const Seeds x = seeds(spec.experiment);
  const auto picks = choices(spec);
  SumRun out;
  for (int n = 1; n <= spec.max_epoch; ++n) {
    const auto t = Clock::now();
    const std::int64_t precision = lazy::epoch_precision(n);
    const ApproxRing ring = ApproxRing::prime(spec.p, precision);
    // the same truncation the lazy rational coercion applies
    std::vector<ApproxElement> xs{ApproxElement::from_rational(ring, x.x1).truncated(precision),
                                  ApproxElement::from_rational(ring, x.x2).truncated(precision)};
    xs.reserve(static_cast<std::size_t>(spec.n));
    for (auto [j, k] : picks) xs.push_back(xs[j] + xs[k]);
    ApproxElement y = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) y = y + xs[i];
    out.epoch_s.push_back(seconds_since(t));
    out.residues.push_back(fingerprint(y));
  }
  for (double s : out.epoch_s) out.approx_s += s;
  out.final_s = out.epoch_s.back();
  return out;
}

SumRun run_exact(const SumSpec& spec, Mode mode) {
  const Seeds x = seeds(spec.experiment);
  const auto picks = choices(spec);
  ValidateScope scope(mode != Mode::exact_no_checks);
  SumRun out;
  auto t = Clock::now();
  const ExactStructure s = ExactStructure::prime_field(spec.p);
  std::vector<ExactElement> xs{ExactElement::from_rational(s, x.x1), ExactElement::from_rational(s, x.x2)};
  xs.reserve(static_cast<std::size_t>(spec.n));
  for (auto [j, k] : picks) xs.push_back(xs[j] + xs[k]);
  ExactElement y = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) y = y + xs[i];
  lazy::NodePtr node = y.node();
  if (mode == Mode::exact_optimized) node = lazy::optimize(node, {xs[0].node(), xs[1].node()});
  out.construct_s = seconds_since(t);
  out.y_deps = node->deps().size();

  const int budget = std::max(spec.max_epoch, lazy::config().max_epoch);
  for (int n = 1; n <= spec.max_epoch; ++n) {
    t = Clock::now();
    const lazy::Value& v = lazy::approximation(node, n, budget);
    out.epoch_s.push_back(seconds_since(t));
    out.residues.push_back(fingerprint(std::get<ApproxElement>(v)));
  }
  for (double e : out.epoch_s) out.approx_s += e;
  out.final_s = out.epoch_s.back();
  return out;
}

std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// f_{d,u}(x) = (x - u)^d - 2^(10d+1), low to high.
std::vector<mpz_class> f_du(int d, const mpz_class& u) {
  std::vector<mpz_class> out{1};
  for (int i = 0; i < d; ++i) out = poly_mul(out, {-u, 1});
  mpz_class c;
  mpz_ui_pow_ui(c.get_mpz_t(), 2, static_cast<unsigned long>(10 * d + 1));
  out[0] -= c;
  return out;
}

void fixed(std::ostream& os, double x) { os << std::fixed << std::setprecision(6) << x; }

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::inexact_replay: return "inexact-replay";
    case Mode::exact_default: return "exact-default";
    case Mode::exact_no_checks: return "exact-no-checks";
    case Mode::exact_optimized: return "exact-optimized";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : all_modes()) {
    if (name == to_string(m)) return m;
  }
  throw DomainError("unknown mode '" + name + "'");
}

const std::vector<Mode>& all_modes() {
  static const std::vector<Mode> modes{Mode::inexact_replay, Mode::exact_default, Mode::exact_no_checks,
                                       Mode::exact_optimized};
  return modes;
}

SumRun run_sum(const SumSpec& spec, Mode mode) {
  if (spec.max_epoch < 1) throw DomainError("max epoch must be positive");
  return mode == Mode::inexact_replay ? run_replay(spec) : run_exact(spec, mode);
}

mpq_class sum_oracle(const SumSpec& spec) {
  const Seeds x = seeds(spec.experiment);
  std::vector<mpq_class> xs{x.x1, x.x2};
  for (auto [j, k] : choices(spec)) xs.push_back(xs[j] + xs[k]);
  mpq_class y = 0;
  for (const auto& v : xs) y += v;
  return y;
}

Stats stats(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

BenchReport bench_sum(const SumSpec& spec, Mode mode, int repetitions) {
  if (repetitions < 1) throw DomainError("need at least one repetition");
  BenchReport r;
  r.experiment = "exp" + std::to_string(spec.experiment);
  r.mode = mode;
  r.spec = spec;
  r.repetitions = repetitions;
  std::vector<double> total, construct, approx, final;
  r.epoch_mean.assign(static_cast<std::size_t>(spec.max_epoch), 0.0);
  for (int rep = 0; rep < repetitions; ++rep) {
    SumSpec one = spec;
    one.seed = spec.seed + static_cast<std::uint64_t>(rep);
    SumRun run = run_sum(one, mode);
    total.push_back(run.construct_s + run.approx_s);
    construct.push_back(run.construct_s);
    approx.push_back(run.approx_s);
    final.push_back(run.final_s);
    for (std::size_t n = 0; n < run.epoch_s.size(); ++n) r.epoch_mean[n] += run.epoch_s[n] / repetitions;
    if (rep == 0) {
      r.residues = std::move(run.residues);
      r.y_deps = run.y_deps;
    }
  }
  r.total = stats(total);
  r.construct = stats(construct);
  r.approx = stats(approx);
  r.final = stats(final);
  return r;
}

FactorReport bench_factor(const FactorSpec& spec) {
  if (spec.d < 1) throw DomainError("degree must be positive");
  FactorReport r;
  r.spec = spec;
  const ExactStructure s = ExactStructure::prime_field(2);
  std::vector<mpz_class> coeffs = f_du(spec.d, spec.u);
  if (spec.reducible) coeffs = poly_mul(coeffs, f_du(spec.d, spec.u + 2048));
  std::vector<mpq_class> q(coeffs.begin(), coeffs.end());
  const ExactPoly f = ExactPoly::from_rationals(s, q);

  auto outcome = [&](const ExactPoly& g, std::optional<SplitResult>& keep) -> std::string {
    try {
      keep = segment_split(g, spec.max_epoch);
      return to_string(keep->outcome);
    } catch (const BudgetExhausted&) {
      return "budget_exhausted";
    }
  };
  std::optional<SplitResult> direct, shifted;
  r.direct_outcome = outcome(f, direct);

  auto t = Clock::now();
  const ExactPoly g = f.shift(ExactElement::from_integer(s, spec.u));
  r.shifted_outcome = outcome(g, shifted);
  r.split_s = seconds_since(t);
  if (!shifted) return r;
  r.certification_epoch = shifted->epoch;
  r.factor_count = shifted->factors.size();

  // factors of f itself: undo the substitution
  std::vector<ExactPoly> factors;
  for (const auto& h : shifted->factors) factors.push_back(h.shift(ExactElement::from_integer(s, -spec.u)));
  double cumulative = 0;
  for (int n = 1; n <= spec.max_epoch; ++n) {
    t = Clock::now();
    for (const auto& h : factors) h.at(n, spec.max_epoch);
    cumulative += seconds_since(t);
    r.cumulative_s.push_back(cumulative);
  }
  return r;
}

void write_csv_header(std::ostream& os) {
  os << "experiment,mode,N,p,seed,epoch,construct_s,approx_s,final_s\n";
}

void write_csv(std::ostream& os, const BenchReport& r) {
  auto row = [&](const std::string& epoch, double approx) {
    os << r.experiment << ',' << to_string(r.mode) << ',' << r.spec.n << ',' << r.spec.p << ','
       << r.spec.seed << ',' << epoch << ',';
    fixed(os, r.construct.mean);
    os << ',';
    fixed(os, approx);
    os << ',';
    fixed(os, r.final.mean);
    os << '\n';
  };
  for (std::size_t n = 0; n < r.epoch_mean.size(); ++n) row(std::to_string(n + 1), r.epoch_mean[n]);
  row("all", r.approx.mean);
}

void write_csv(std::ostream& os, const FactorReport& r) {
  const std::string name = r.spec.reducible ? "exp3-g" : "exp3-f";
  double previous = 0;
  for (std::size_t n = 0; n < r.cumulative_s.size(); ++n) {
    os << name << ",exact," << r.spec.d << ",2," << r.spec.u << ',' << n + 1 << ',';
    fixed(os, r.split_s);
    os << ',';
    fixed(os, r.cumulative_s[n]);
    os << ',';
    fixed(os, r.cumulative_s[n] - previous);
    os << '\n';
    previous = r.cumulative_s[n];
  }
}

void write_text(std::ostream& os, const std::vector<BenchReport>& rows) {
  if (rows.empty()) return;
  const BenchReport& first = rows.front();
  os << first.experiment << "  N=" << first.spec.n << "  p=" << first.spec.p << "  epochs 1.."
     << first.spec.max_epoch << "  repetitions=" << first.repetitions << "  seed=" << first.spec.seed << '\n';
  os << std::left << std::setw(18) << "mode" << std::right << std::setw(12) << "total" << std::setw(11)
     << "sd" << std::setw(12) << "constr" << std::setw(12) << "approx" << std::setw(12) << "final" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(18) << to_string(r.mode) << std::right << std::fixed << std::setprecision(4)
       << std::setw(12) << r.total.mean << std::setw(11) << r.total.sd << std::setw(12) << r.construct.mean
       << std::setw(12) << r.approx.mean << std::setw(12) << r.final.mean << '\n';
  }
}

void write_text(std::ostream& os, const FactorReport& r) {
  os << (r.spec.reducible ? "g" : "f") << "  d=" << r.spec.d << "  u=" << r.spec.u << '\n';
  os << "segment split as given: " << r.direct_outcome << '\n';
  os << "segment split after x -> x + u: " << r.shifted_outcome;
  if (r.certification_epoch > 0) os << " at epoch " << r.certification_epoch;
  os << '\n';
  for (std::size_t n = 0; n < r.cumulative_s.size(); ++n) {
    os << "  epoch " << std::setw(2) << n + 1 << "  cumulative " << std::fixed << std::setprecision(4)
       << r.cumulative_s[n] << " s\n";
  }
}

}  // namespace xpadic
