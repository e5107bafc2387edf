#pragma once

// Benchmark harness for three experiments:
//   exp1  y = x_1 + ... + x_N, x_1 = 1, x_2 = 2, x_i = x_j + x_k (j, k < i random)
//   exp2  the same with x_1 = 1/3, x_2 = 1/5
//   exp3  factoring f_{d,u}(x) = (x - u)^d - 2^(10d+1) and
//         g_{2d,u}(x) = f_{d,u}(x) f_{d,u+2^11}(x) over Q_2
// Sum experiments run in four modes; the inexact replay recomputes the whole
// DAG with fixed-precision elements at each epoch's precision.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace xpadic {

enum class Mode { inexact_replay, exact_default, exact_no_checks, exact_optimized };

const char* to_string(Mode m);
Mode parse_mode(const std::string& name);
const std::vector<Mode>& all_modes();

struct SumSpec {
  int experiment = 1;  // 1 or 2
  int n = 1000;        // number of x_i
  mpz_class p = 2;
  std::uint64_t seed = 1;
  int max_epoch = 12;
};

struct SumRun {
  double construct_s = 0;
  double approx_s = 0;
  double final_s = 0;
  std::vector<double> epoch_s;         // index n-1
  std::vector<std::string> residues;   // y at each epoch as valuation:precision:unit (hex)
  std::size_t y_deps = 0;              // dependency count of y (exact modes)
};

/// One repetition with the given seed.
SumRun run_sum(const SumSpec& spec, Mode mode);

/// Exact value of y for the given seed, for oracle checks.
mpq_class sum_oracle(const SumSpec& spec);

struct Stats {
  double mean = 0;
  double sd = 0;
};

Stats stats(const std::vector<double>& xs);

struct BenchReport {
  std::string experiment;
  Mode mode;
  SumSpec spec;
  int repetitions = 0;
  Stats total, construct, approx, final;
  std::vector<double> epoch_mean;
  std::vector<std::string> residues;  // from the first repetition
  std::size_t y_deps = 0;
};

/// Repetition r uses seed spec.seed + r, so every mode sees the same DAGs.
BenchReport bench_sum(const SumSpec& spec, Mode mode, int repetitions);

struct FactorSpec {
  int d = 2;
  mpz_class u = 1;
  int max_epoch = 10;
  bool reducible = false;  // g_{2d,u} instead of f_{d,u}
};

struct FactorReport {
  FactorSpec spec;
  std::string direct_outcome;   // segment_split on the polynomial itself
  std::string shifted_outcome;  // after substituting x -> x + u
  int certification_epoch = 0;  // of the shifted split
  std::size_t factor_count = 0;
  double split_s = 0;
  std::vector<double> cumulative_s;  // factor approximations through epoch n
};

FactorReport bench_factor(const FactorSpec& spec);

/// CSV with header experiment,mode,N,p,seed,epoch,construct_s,approx_s,final_s.
void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const BenchReport& r);
void write_csv(std::ostream& os, const FactorReport& r);
void write_text(std::ostream& os, const std::vector<BenchReport>& rows);
void write_text(std::ostream& os, const FactorReport& r);

}  // namespace xpadic
