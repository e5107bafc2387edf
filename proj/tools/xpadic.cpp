#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "xpadic/bench.hpp"
#include "xpadic/dsl.hpp"
#include "xpadic/errors.hpp"
#include "xpadic/newton.hpp"
#include "xpadic/overhead.hpp"
#include "xpadic/query.hpp"

using namespace xpadic;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBudget = 2, kValidation = 3 };

struct Options {
  std::string prime = "2";
  std::optional<int> max_epoch;
  std::optional<int> epoch;
  bool no_checks = false;
  bool optimize = false;
  std::uint64_t seed = 1;
  std::string format = "text";
};

std::string rational_string(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("not a rational: " + s);
  q.canonicalize();
  return q;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

// Digits of a prime-level element modulo p, p^2, ... up to its absolute
// precision (at most `count` of them).
std::vector<std::string> residues(const ApproxElement& a, int count) {
  std::vector<std::string> out;
  if (a.ring().level() != 0 || a.weak_valuation() < 0) return out;
  const mpz_class& p = a.ring().prime_number();
  mpz_class value = 0;
  if (!a.is_weakly_zero()) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(a.weak_valuation()));
    value = scale * a.unit().z;
  }
  mpz_class modulus = 1;
  for (int k = 1; k <= count && k <= a.absolute_precision(); ++k) {
    modulus *= p;
    mpz_class r = value % modulus;
    if (r < 0) r += modulus;
    out.push_back(r.get_str());
  }
  return out;
}

int cmd_eval(const Options& o, const ExactStructure& s, const std::string& text) {
  Parsed parsed = parse_expression(text, s);
  if (parsed.poly) {
    const int n = o.epoch.value_or(3);
    const std::string v = parsed.poly->at(n).to_string();
    emit(o, {{"epoch", n}, {"value", v}}, "epoch " + std::to_string(n) + ": " + v + "\n");
    return kOk;
  }
  ExactElement x = *parsed.element;
  if (o.optimize) x = ExactElement::from_node(s, lazy::optimize(x.node(), parsed.literals));
  int n = 0;
  if (o.epoch) {
    n = *o.epoch;
  } else {
    // smallest epoch at which the value is certified nonzero
    const int limit = lazy::config().max_epoch;
    std::optional<std::int64_t> last;
    for (int e = 1; e <= limit && n == 0; ++e) {
      const ApproxElement a = x.at(e);
      if (a.valuation_known()) n = e;
      last = a.weak_valuation();
    }
    if (n == 0) throw BudgetExhausted("value not certified nonzero within the epoch budget", limit, last);
  }
  const std::string v = x.at(n).to_string();
  emit(o, {{"epoch", n}, {"value", v}}, "epoch " + std::to_string(n) + ": " + v + "\n");
  return kOk;
}

int cmd_val(const Options& o, const ExactStructure& s, const std::string& text) {
  const std::int64_t v = valuation(parse_element(text, s));
  const std::string shown = v == kInfinity ? "inf" : std::to_string(v);
  emit(o, {{"valuation", shown}}, shown + "\n");
  return kOk;
}

int cmd_valcmp(const Options& o, const ExactStructure& s, const std::string& text, long v) {
  const int c = valuation_cmp(parse_element(text, s), v);
  const char* rel = c < 0 ? "<" : (c == 0 ? "=" : ">");
  emit(o, {{"cmp", c}}, std::string("val ") + rel + " " + std::to_string(v) + "\n");
  return kOk;
}

json polygon_json(const NewtonPolygon& p) {
  json vs = json::array(), fs = json::array();
  for (const auto& v : p.vertices()) vs.push_back({v.i, rational_string(v.v)});
  for (const auto& f : p.faces()) {
    fs.push_back({{"slope", rational_string(f.slope())}, {"width", f.width()},
                  {"root_valuation", rational_string(-f.slope())}});
  }
  return {{"vertices", vs}, {"faces", fs}};
}

std::string polygon_text(const NewtonPolygon& p) {
  std::ostringstream os;
  os << "vertices:";
  for (const auto& v : p.vertices()) os << " (" << v.i << "," << v.v << ")";
  os << '\n';
  for (const auto& f : p.faces()) {
    os << "face slope " << f.slope() << " width " << f.width() << ": " << f.width()
       << " roots of valuation " << mpq_class(-f.slope()) << '\n';
  }
  return os.str();
}

int cmd_polygon(const Options& o, const ExactStructure& s, const std::string& text) {
  const PolygonResult r = newton_polygon(parse_polynomial(text, s));
  json j = polygon_json(r.polygon);
  j["epoch"] = r.epoch;
  emit(o, j, polygon_text(r.polygon) + "resolved at epoch " + std::to_string(r.epoch) + "\n");
  return kOk;
}

int cmd_root(const Options& o, const ExactStructure& s, const std::string& poly, const std::string& at) {
  const HenselResult r = is_hensel_liftable(parse_polynomial(poly, s), parse_element(at, s));
  if (!r.liftable) {
    emit(o, {{"liftable", false}, {"epoch", r.epoch}},
         "not liftable (decided at epoch " + std::to_string(r.epoch) + ")\n");
    return kOk;
  }
  const int n = o.epoch.value_or(std::max(r.epoch, std::min(lazy::config().max_epoch, 4)));
  const ApproxElement b = r.root->at(n);
  const auto res = residues(b, 3);
  std::ostringstream os;
  os << "liftable (certified at epoch " << r.epoch << ")\nroot at epoch " << n << ": " << b.to_string() << '\n';
  for (std::size_t k = 0; k < res.size(); ++k) {
    os << "  mod " << s.prime() << '^' << k + 1 << ": " << res[k] << '\n';
  }
  emit(o, {{"liftable", true}, {"epoch", r.epoch}, {"root_epoch", n}, {"root", b.to_string()}, {"residues", res}},
       os.str());
  return kOk;
}

int cmd_factor(const Options& o, const ExactStructure& s, const std::string& text) {
  const SplitResult r = segment_split(parse_polynomial(text, s));
  const int n = o.epoch.value_or(std::max(r.epoch, std::min(lazy::config().max_epoch, 4)));
  std::ostringstream os;
  os << to_string(r.outcome) << " (polygon resolved at epoch " << r.epoch << ")\n" << polygon_text(r.polygon);
  json factors = json::array();
  for (const auto& f : r.factors) {
    const std::string v = f.at(n).to_string();
    os << "factor at epoch " << n << ": " << v << '\n';
    factors.push_back(v);
  }
  json j = polygon_json(r.polygon);
  j["outcome"] = to_string(r.outcome);
  j["epoch"] = r.epoch;
  j["factors"] = factors;
  emit(o, j, os.str());
  return kOk;
}

json report_json(const BenchReport& r) {
  return {{"experiment", r.experiment},
          {"mode", to_string(r.mode)},
          {"N", r.spec.n},
          {"p", r.spec.p.get_str()},
          {"seed", r.spec.seed},
          {"max_epoch", r.spec.max_epoch},
          {"repetitions", r.repetitions},
          {"total_mean", r.total.mean},
          {"total_sd", r.total.sd},
          {"construct_mean", r.construct.mean},
          {"approx_mean", r.approx.mean},
          {"final_mean", r.final.mean},
          {"epoch_mean", r.epoch_mean},
          {"y_deps", r.y_deps},
          {"final_residue", r.residues.empty() ? "" : r.residues.back()}};
}

struct BenchArgs {
  std::string experiment;
  int n = 0;
  int reps = 5;
  std::string mode = "all";
  int d = 2;
  std::string u = "1";
  bool reducible = false;
};

int cmd_bench(const Options& o, const BenchArgs& a) {
  const int max_epoch = o.max_epoch.value_or(16);
  if (a.experiment == "exp3") {
    FactorSpec f;
    f.d = a.d;
    f.u = mpz_class(a.u);
    f.max_epoch = max_epoch;
    f.reducible = a.reducible;
    const FactorReport r = bench_factor(f);
    if (o.format == "csv") {
      write_csv_header(std::cout);
      write_csv(std::cout, r);
    } else if (o.format == "json") {
      std::cout << json{{"experiment", r.spec.reducible ? "exp3-g" : "exp3-f"},
                        {"d", r.spec.d},
                        {"u", r.spec.u.get_str()},
                        {"direct_outcome", r.direct_outcome},
                        {"shifted_outcome", r.shifted_outcome},
                        {"certification_epoch", r.certification_epoch},
                        {"factor_count", r.factor_count},
                        {"split_s", r.split_s},
                        {"cumulative_s", r.cumulative_s}}
                       .dump(2)
                << '\n';
    } else {
      write_text(std::cout, r);
    }
    return kOk;
  }
  SumSpec spec;
  if (a.experiment == "exp1") {
    spec.experiment = 1;
    spec.n = a.n > 0 ? a.n : 10000;
  } else if (a.experiment == "exp2") {
    spec.experiment = 2;
    spec.n = a.n > 0 ? a.n : 500;
  } else {
    throw ParseError("unknown experiment '" + a.experiment + "' (exp1, exp2 or exp3)");
  }
  spec.p = mpz_class(o.prime);
  spec.seed = o.seed;
  spec.max_epoch = max_epoch;
  std::vector<Mode> modes;
  if (a.mode == "all") {
    modes = all_modes();
  } else {
    modes.push_back(parse_mode(a.mode));
  }
  std::vector<BenchReport> reports;
  for (Mode m : modes) reports.push_back(bench_sum(spec, m, a.reps));
  if (o.format == "csv") {
    write_csv_header(std::cout);
    for (const auto& r : reports) write_csv(std::cout, r);
  } else if (o.format == "json") {
    json out = json::array();
    for (const auto& r : reports) out.push_back(report_json(r));
    std::cout << out.dump(2) << '\n';
  } else {
    write_text(std::cout, reports);
  }
  return kOk;
}

int cmd_overhead(const Options& o, const std::string& alpha, const std::string& b) {
  const OverheadModel m = overhead(parse_rational(alpha), parse_rational(b));
  auto show = [](const std::optional<mpq_class>& exact, long double approx) {
    std::ostringstream os;
    if (exact) {
      os << *exact;
      if (exact->get_den() != 1) os << " (" << static_cast<double>(approx) << ")";
    } else {
      os << static_cast<double>(approx);
    }
    return os.str();
  };
  const std::string r = show(m.r, m.r_approx), bs = show(m.b_star, m.b_star_approx),
                    rs = show(m.r_star, m.r_star_approx);
  emit(o, {{"alpha", alpha}, {"b", b}, {"r", r}, {"b_star", bs}, {"r_star", rs}},
       "r = " + r + "\nb* = " + bs + "\nr* = " + rs + "\n");
  return kOk;
}

// A kind whose epoch-3 value contradicts its epoch-2 value.
int cmd_faulty(const ExactStructure& s) {
  auto node = lazy::make_user_node(
      lazy::Type::element, s.node(),
      [](int n, const lazy::Args& deps) -> lazy::Value {
        return ApproxElement::from_rational(deps.get<ApproxRing>(0), n >= 3 ? 3 : 1);
      },
      {lazy::Dep::lazy(s.node())}, "faulty");
  for (int n = 1; n <= 3; ++n) {
    lazy::approximation(node, n);
    std::cout << "epoch " << n << " ok\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact p-adic arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--prime", o.prime, "prime p of the base field Q_p")->capture_default_str();
  app.add_option("--max-epoch", o.max_epoch, "epoch budget (default 31 for queries, 16 for bench)");
  app.add_option("--epoch", o.epoch, "epoch at which to print approximations");
  app.add_flag("--no-checks", o.no_checks, "disable validation of approximations");
  app.add_flag("--optimize", o.optimize, "replace the expression DAG by a straight-line program");
  app.add_option("--seed", o.seed, "random seed for benchmarks")->capture_default_str();
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  std::string expr, expr2, alpha, b;
  long cmp_to = 0;
  auto* eval = app.add_subcommand("eval", "evaluate an expression");
  eval->add_option("EXPR", expr)->required();
  auto* val = app.add_subcommand("val", "valuation of an expression");
  val->add_option("EXPR", expr)->required();
  auto* valcmp = app.add_subcommand("valcmp", "compare the valuation with V");
  valcmp->add_option("EXPR", expr)->required();
  valcmp->add_option("V", cmp_to)->required();
  auto* polygon = app.add_subcommand("polygon", "Newton polygon of a polynomial in x");
  polygon->add_option("POLY", expr)->required();
  auto* root = app.add_subcommand("root", "Hensel-lift a root of POLY near AT");
  root->add_option("POLY", expr)->required();
  root->add_option("AT", expr2)->required();
  auto* factor = app.add_subcommand("factor", "split POLY along its Newton polygon");
  factor->add_option("POLY", expr)->required();
  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run a benchmark experiment");
  bench->add_option("EXPERIMENT", bench_args.experiment)->required()->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
  bench->add_option("--N", bench_args.n, "number of summands (exp1: 10000, exp2: 500)");
  bench->add_option("--reps", bench_args.reps, "repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--mode", bench_args.mode, "mode or 'all'")->capture_default_str();
  bench->add_option("--d", bench_args.d, "exp3 degree")->capture_default_str();
  bench->add_option("--u", bench_args.u, "exp3 unit")->capture_default_str();
  bench->add_flag("--reducible", bench_args.reducible, "exp3: use g_{2d,u}");
  auto* over = app.add_subcommand("overhead", "recomputation overhead model");
  over->add_option("ALPHA", alpha)->required();
  over->add_option("B", b)->required();
  auto* diag = app.add_subcommand("diag", "diagnostics");
  std::string which;
  diag->add_option("WHAT", which)->required()->check(CLI::IsMember({"faulty-kind"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (o.max_epoch) lazy::config().max_epoch = *o.max_epoch;
  if (o.no_checks) lazy::config().validate = false;
  try {
    const ExactStructure s = ExactStructure::prime_field(mpz_class(o.prime));
    if (*eval) return cmd_eval(o, s, expr);
    if (*val) return cmd_val(o, s, expr);
    if (*valcmp) return cmd_valcmp(o, s, expr, cmp_to);
    if (*polygon) return cmd_polygon(o, s, expr);
    if (*root) return cmd_root(o, s, expr, expr2);
    if (*factor) return cmd_factor(o, s, expr);
    if (*bench) return cmd_bench(o, bench_args);
    if (*over) return cmd_overhead(o, alpha, b);
    if (*diag) return cmd_faulty(s);
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << " (epoch budget " << e.last_epoch();
    if (e.last_weak_valuation()) std::cerr << ", last weak valuation " << *e.last_weak_valuation();
    std::cerr << ")\n";
    if (o.format == "json") {
      json j{{"error", "budget"}, {"last_epoch", e.last_epoch()}};
      if (e.last_weak_valuation()) j["last_weak_valuation"] = *e.last_weak_valuation();
      std::cout << j.dump(2) << '\n';
    }
    return kBudget;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
