#include "symuniv/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symuniv/error.hpp"
#include "symuniv/lvalue.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/prime_stats.hpp"
#include "symuniv/random_model.hpp"
#include "symuniv/sympower.hpp"
#include "symuniv/universality.hpp"
#include "symuniv/version.hpp"

namespace symuniv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Semantic problems found before any computation, reported together.
struct ConfigError {
  std::vector<std::string> problems;
};

class Validator {
 public:
  void require(bool ok, std::string problem) {
    if (!ok) problems_.push_back(std::move(problem));
  }
  void finish() const {
    if (!problems_.empty()) throw ConfigError{problems_};
  }

 private:
  std::vector<std::string> problems_;
};

struct Common {
  bool json_out = false;
  unsigned threads = 0;
  std::optional<std::string> cache_dir;
  std::uint64_t seed = kDefaultSeed;
  std::string report;
};

fs::path resolve_cache_dir(const Common& c) {
  if (c.cache_dir) return *c.cache_dir == "none" ? fs::path() : fs::path(*c.cache_dir);
  if (const char* env = std::getenv("SYMUNIV_CACHE")) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "symuniv";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "symuniv";
  return {};
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json provenance(const std::string& command, int weight, const std::string& kind, std::size_t N,
                std::optional<std::uint64_t> seed) {
  json p;
  p["software"] = kSoftwareName;
  p["version"] = kVersion;
  p["command"] = command;
  p["weight"] = weight;
  p["kind"] = kind;
  p["N"] = N;
  p["seed"] = seed ? json(*seed) : json(nullptr);
  return p;
}

std::optional<LKind> parse_kind(const std::string& s) {
  try {
    return LKind::parse(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void check_weight(Validator& v, int k) {
  v.require(is_supported_weight(k), "weight " + std::to_string(k) + " is not one of 12, 16, 18, 20, 22, 26");
}

std::optional<LKind> check_kind(Validator& v, const std::string& s) {
  auto kind = parse_kind(s);
  v.require(kind.has_value(), "kind '" + s + "' is not one of sym1..sym4, rs1..rs4");
  return kind;
}

void write_report(const json& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::io_error, "cannot write " + path);
  f << result.dump(2) << '\n';
}

void emit(const json& result, const Common& c, std::ostream& out) {
  if (!c.report.empty()) write_report(result, c.report);
  if (c.json_out) {
    out << result.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : result.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

// ---------------------------------------------------------------- coeffs

struct CoeffsArgs {
  int weight = 12;
  std::size_t n = 0;
  std::string kind;
  std::string out;
};

json run_coeffs(const CoeffsArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  v.require(a.n >= 2, "--n must be at least 2");
  std::optional<LKind> kind;
  if (!a.kind.empty()) kind = check_kind(v, a.kind);
  v.finish();
  const HeckeEigenform f = load_or_build(a.weight, a.n, resolve_cache_dir(c));
  json r;
  r["provenance"] = provenance("coeffs", a.weight, kind ? kind->name() : "form", a.n, std::nullopt);
  if (kind) {
    const auto dc = dirichlet_coefficients(f, *kind, a.n);
    write_dirichlet_csv(dc, a.weight, a.out);
    r["lambda_F_2"] = dc[2];
  } else {
    write_coefficient_cache(f, a.out);
    r["c_2"] = f.exact(2).get_str();
    r["lambda_2"] = f.lambda(2);
  }
  r["rows"] = a.n;
  r["out"] = a.out;
  return r;
}

// ---------------------------------------------------------------- angles

struct AnglesArgs {
  int weight = 12;
  std::uint64_t p_max = 1000;
  std::string out;
};

json run_angles(const AnglesArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  v.require(a.p_max >= 2, "--p-max must be at least 2");
  v.finish();
  const HeckeEigenform f = load_or_build(a.weight, a.p_max, resolve_cache_dir(c));
  const PrimeTable primes(a.p_max);
  double sum2 = 0.0, sum4 = 0.0;
  std::ofstream csv;
  if (!a.out.empty()) {
    csv.open(a.out);
    if (!csv) throw Error(Errc::io_error, "cannot write " + a.out);
    csv << "p,lambda,theta\n";
  }
  char buf[96];
  for (const std::uint32_t p : primes.primes()) {
    const double lam = f.lambda(p);
    const SatakeAngle s = satake_angle(f, p);
    sum2 += lam * lam;
    sum4 += lam * lam * lam * lam;
    if (csv.is_open()) {
      std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g\n", p, lam, s.theta);
      csv << buf;
    }
  }
  const auto d = deligne_scan(f, a.p_max);
  const double n = static_cast<double>(primes.size());
  json r;
  r["provenance"] = provenance("angles", a.weight, "sym1", a.p_max, std::nullopt);
  r["primes"] = primes.size();
  r["max_abs_lambda"] = d.max_abs_lambda;
  r["argmax_p"] = d.argmax_p;
  r["mean_lambda2"] = sum2 / n;  // 1 under Sato-Tate
  r["mean_lambda4"] = sum4 / n;  // 2 under Sato-Tate
  if (!a.out.empty()) r["out"] = a.out;
  return r;
}

// ---------------------------------------------------------------- pnt

struct PntArgs {
  int weight = 12;
  int m = 1;
  std::uint64_t x = 1000000;
  std::vector<double> delta;
  std::string csv;
  unsigned per_decade = 8;
};

json run_pnt(const PntArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  v.require(a.m >= 1 && a.m <= 4, "--m must lie in 1..4");
  v.require(a.x >= 10, "--x must be at least 10");
  for (double d : a.delta) v.require(d > 0.0 && d < 2.0, "--delta values must lie in (0, 2)");
  v.require(a.per_decade >= 1, "--per-decade must be positive");
  v.finish();
  const HeckeEigenform f = load_or_build(a.weight, a.x, resolve_cache_dir(c));
  const auto p = prime_sums(f, a.m, a.x);
  json r;
  r["provenance"] = provenance("pnt", a.weight, "rs" + std::to_string(a.m), a.x, std::nullopt);
  r["m"] = p.m;
  r["x"] = p.x;
  r["psi"] = p.psi;
  r["theta"] = p.theta;
  r["pi_w"] = p.pi_w;
  r["pi_x"] = p.pi_x;
  r["psi_ratio"] = p.psi_ratio;
  r["theta_ratio"] = p.theta_ratio;
  r["pi_w_ratio"] = p.pi_w_ratio;
  r["r_bound"] = p.r_bound;
  json windows = json::array();
  for (double d : a.delta) {
    const auto w = pi_delta(f, a.m, d, a.x);
    windows.push_back({{"delta", w.delta}, {"count", w.count}, {"pi_x", w.pi_x}, {"a", w.a}, {"b", w.b},
                       {"window_count", w.window_count}, {"window_primes", w.window_primes}, {"ratio", w.ratio},
                       {"lower_bound", w.lower_bound}});
  }
  if (!a.delta.empty()) r["pi_delta"] = windows;
  if (!a.csv.empty()) {
    write_theta_csv(theta_samples(f, a.m, a.x, a.per_decade), a.csv);
    r["csv"] = a.csv;
  }
  return r;
}

// ---------------------------------------------------------------- lvalue

struct LvalueArgs {
  std::string kind = "sym2";
  int weight = 12;
  double sigma = 0.8;
  double t = 0.0;
  std::string mode = "smoothed";
  double X = 0.0;
  unsigned levels = 2;
  std::size_t n = 0;
};

json run_lvalue(const LvalueArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  const auto kind = check_kind(v, a.kind);
  v.require(a.mode == "smoothed" || a.mode == "euler", "--mode must be smoothed or euler");
  v.require(a.levels <= 4, "--levels must lie in 0..4");
  v.require(a.X >= 0.0, "--X must be non-negative");
  v.finish();
  EvalParams p;
  p.mode = a.mode == "euler" ? EvalMode::euler_product : EvalMode::smoothed;
  p.X = a.X;
  p.levels = a.levels;
  p.n_terms = a.n;
  std::size_t N = a.n;
  if (N == 0) N = p.mode == EvalMode::smoothed ? smoothed_terms(a.X > 0 ? a.X : default_X(a.t), a.levels) : 100000;
  const HeckeEigenform f = load_or_build(a.weight, N, resolve_cache_dir(c));
  const LFunction L(f, *kind, N);
  const LValue val = L.eval(cplx(a.sigma, a.t), p);
  json r;
  r["provenance"] = provenance("lvalue", a.weight, kind->name(), N, std::nullopt);
  r["s"] = complex_json(cplx(a.sigma, a.t));
  r["mode"] = a.mode;
  r["value"] = complex_json(val.value);
  r["abs"] = std::abs(val.value);
  r["stability"] = val.stability;
  if (p.mode == EvalMode::smoothed) r["X"] = val.X;
  r["n_terms"] = val.n_terms;
  r["sigma_F"] = kind->sigma_F();
  return r;
}

// ---------------------------------------------------------------- mean-square

struct MeanSquareArgs {
  std::string kind = "sym2";
  int weight = 12;
  double sigma = 0.8;
  double T = 2000.0;
  double dt = 0.25;
  unsigned levels = 2;
};

json run_mean_square(const MeanSquareArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  const auto kind = check_kind(v, a.kind);
  v.require(a.T >= 100.0, "--T must be at least 100");
  v.require(a.dt > 0.0 && a.dt <= a.T, "--dt must lie in (0, T]");
  v.require(a.levels <= 4, "--levels must lie in 0..4");
  v.finish();
  const std::size_t N = smoothed_terms(default_X(a.T), a.levels);
  const HeckeEigenform f = load_or_build(a.weight, N, resolve_cache_dir(c));
  const LFunction L(f, *kind, N);
  const auto m = mean_square(L, a.sigma, a.T, a.dt, c.threads, a.levels);
  json r;
  r["provenance"] = provenance("mean-square", a.weight, kind->name(), N, std::nullopt);
  r["sigma"] = m.sigma;
  r["T"] = m.T;
  r["dt"] = m.dt;
  r["points"] = m.points;
  r["M_emp"] = m.M_emp;
  r["M_ref"] = m.M_ref;
  r["ratio"] = m.ratio;
  r["max_stability"] = m.max_stability;
  return r;
}

// ---------------------------------------------------------------- random-model

struct RandomModelArgs {
  std::string kind = "sym2";
  int weight = 12;
  double sigma = 0.8;
  double t = 0.0;
  std::uint64_t p_max = 100000;
  std::size_t n_model = 10000;
  std::size_t n_shift = 2000;
  double T = 5000.0;
  std::string samples;
  bool support = false;
};

json moments_json(const PopulationMoments& m) {
  return {{"mean", complex_json(m.mean)}, {"se_mean", m.se_mean}, {"mean_abs2", m.mean_abs2}, {"se_abs2", m.se_abs2}};
}

json run_random_model(const RandomModelArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  const auto kind = check_kind(v, a.kind);
  v.require(a.p_max >= 2, "--p-max must be at least 2");
  v.require(a.n_model >= 100 && a.n_shift >= 100, "--n-model and --n-shift must be at least 100");
  v.require(a.T > 0.0, "--T must be positive");
  if (kind) {
    v.require(a.sigma > kind->sigma_F() && a.sigma > 0.5,
              "--sigma must exceed max(1/2, sigma_F) = " + std::to_string(std::max(0.5, kind->sigma_F())));
  }
  v.finish();
  const std::size_t N = std::max<std::size_t>(smoothed_terms(default_X(a.t + a.T), 2), a.p_max);
  const HeckeEigenform f = load_or_build(a.weight, N, resolve_cache_dir(c));
  const LFunction L(f, *kind, N);
  const RandomModel M(f, *kind, a.p_max);
  const cplx s(a.sigma, a.t);
  const auto d = distribution_compare(L, M, s, a.T, a.n_shift, a.n_model, c.seed, c.threads);
  json r;
  r["provenance"] = provenance("random-model", a.weight, kind->name(), N, c.seed);
  r["s"] = complex_json(s);
  r["T"] = d.T;
  r["p_max"] = d.p_max;
  r["n_shift"] = d.n_shift;
  r["n_model"] = d.n_model;
  r["ks_log_abs"] = d.ks_re;
  r["ks_arg"] = d.ks_im;
  r["ks_abs"] = d.ks_abs;
  r["ks_critical_01"] = d.ks_critical_01;
  r["moments_shift"] = moments_json(d.moments_shift);
  r["moments_model"] = moments_json(d.moments_model);
  r["second_moment_euler"] = M.second_moment(a.sigma);
  r["second_moment_dirichlet"] = dirichlet_second_moment(L.coefficients(), a.sigma);
  r["max_shift_stability"] = d.max_shift_stability;
  if (a.support) {
    std::vector<cplx> pts;
    const double sF = std::max(0.5, kind->sigma_F());
    for (int i = 1; i <= 5; ++i)
      for (double t : {0.0, 5.0, 10.0, 20.0, 40.0}) pts.emplace_back(sF + (1.0 - sF) * i / 5.5, t);
    const auto sup = support_scan(M, pts, a.n_model, c.seed, c.threads);
    r["support"] = {{"min_abs", sup.min_abs}, {"argmin_sample", sup.argmin_sample},
                    {"argmin_s", complex_json(sup.argmin_s)}, {"samples", sup.samples}, {"points", sup.points}};
  }
  if (!a.samples.empty()) {
    write_samples_csv(d, a.samples);
    r["samples_csv"] = a.samples;
  }
  return r;
}

// ---------------------------------------------------------------- universality

struct UniversalityArgs {
  std::string kind = "sym2";
  int weight = 12;
  std::optional<double> center;
  std::optional<double> radius;
  std::string target = "const:1.0";
  double T = 2000.0;
  double dt = 0.05;
  double eps = 0.3;
  std::size_t n_boundary = kMinBoundary;
  int degree = kDefaultFitDegree;
  std::size_t jet = 0;
  std::string csv;
};

double parse_number(const std::string& s, const std::string& what) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) throw ConfigError{{what + ": '" + s + "' is not a number"}};
  return x;
}

json run_universality(const UniversalityArgs& a, const Common& c) {
  Validator v;
  check_weight(v, a.weight);
  const auto kind = check_kind(v, a.kind);
  const auto colon = a.target.find(':');
  const std::string scheme = a.target.substr(0, colon), arg = colon == std::string::npos ? "" : a.target.substr(colon + 1);
  v.require(colon != std::string::npos && (scheme == "const" || scheme == "file" || scheme == "shift"),
            "--target must be const:<c>, file:<csv> or shift:<t0>");
  v.require(a.T > 0.0 && a.dt > 0.0 && a.dt <= a.T, "--T and --dt must satisfy 0 < dt <= T");
  v.require(a.eps >= 0.0, "--eps must be non-negative");
  v.require(a.n_boundary >= kMinBoundary, "--n-boundary must be at least 64");
  v.require(a.jet <= 5, "--jet must lie in 0..5");
  v.require(!(a.jet > 0 && scheme == "file"), "--jet needs a const or shift target");
  DiscRegion K{0.0, 0.0};
  if (kind) {
    K = default_disc(*kind);
    if (a.center) K.center = *a.center;
    if (a.radius) K.radius = *a.radius;
    v.require(K.radius > 0.0 && K.center - K.radius > kind->sigma_F() && K.center + K.radius < 1.0,
              "disc must satisfy sigma_F < center - radius and center + radius < 1 (sigma_F = " +
                  std::to_string(kind->sigma_F()) + ")");
  }
  v.finish();

  const double reach = a.jet > 0 ? default_contour_radius(*kind, K.center) : K.radius;
  const std::size_t N = smoothed_terms(scan_X(a.T, reach), 2);
  const HeckeEigenform f = load_or_build(a.weight, N, resolve_cache_dir(c));
  const LFunction L(f, *kind, N);
  json r;
  r["provenance"] = provenance("universality", a.weight, kind->name(), N, std::nullopt);
  r["target"] = a.target;

  if (a.jet > 0) {
    std::vector<cplx> target(a.jet, 0.0);
    if (scheme == "const") {
      target[0] = parse_number(arg, "--target");
    } else {
      target = derivative_vector(L, K.center, parse_number(arg, "--target"), a.jet, reach, scan_X(a.T, reach));
    }
    VectorSearchOptions o;
    o.threads = c.threads;
    const auto res = vector_target_search(L, K.center, target, a.T, a.dt, o);
    json tj = json::array();
    for (const cplx z : target) tj.push_back(complex_json(z));
    r["sigma"] = res.sigma;
    r["rho"] = res.rho;
    r["J"] = a.jet;
    r["target_jet"] = tj;
    r["T"] = res.T;
    r["dt"] = res.dt;
    r["best_t"] = res.best_t;
    r["best_distance"] = res.distance;
    r["grid_best_t"] = res.grid_best_t;
    r["grid_best_distance"] = res.grid_distance;
    return r;
  }

  ComplexFn phi;
  std::optional<PolyExpFit> fit;
  if (scheme == "const") {
    const double value = parse_number(arg, "--target");
    phi = [value](cplx) { return cplx(value, 0.0); };
  } else if (scheme == "shift") {
    const double t0 = parse_number(arg, "--target");
    EvalParams p;
    p.X = scan_X(a.T, K.radius);
    phi = [&L, t0, p](cplx s) { return L.eval(s + cplx(0.0, t0), p).value; };
  } else {
    const auto samples = read_boundary_samples(arg);
    fit = poly_exp_target(samples.points, samples.values, a.degree);
    phi = *fit;
  }
  ShiftSearchOptions o;
  o.n_boundary = a.n_boundary;
  o.threads = c.threads;
  const auto res = shift_search(L, K, phi, a.T, a.dt, a.eps, o);
  r["center"] = K.center;
  r["radius"] = K.radius;
  r["T"] = res.T;
  r["dt"] = res.dt;
  r["n_boundary"] = res.n_boundary;
  r["X"] = res.X;
  r["eps"] = res.eps;
  r["best_t"] = res.best_t;
  r["best_err"] = res.best_err;
  r["grid_best_t"] = res.grid_best_t;
  r["grid_best_err"] = res.grid_best_err;
  r["good_set_measure"] = res.good_set_measure;
  r["target_sup"] = res.target_sup;
  if (fit) r["fit_residual"] = fit->residual;
  if (!a.csv.empty()) {
    write_shift_table_csv(res, a.csv);
    r["csv"] = a.csv;
  }
  return r;
}

// ---------------------------------------------------------------- verify

json run_verify(const std::string& level, const Common& c, std::ostream& out, bool& failed) {
  Validator v;
  v.require(level == "quick" || level == "full", "--level must be quick or full");
  v.finish();
  VerifyOptions o;
  o.level = level == "full" ? VerifyLevel::full : VerifyLevel::quick;
  o.cache_dir = resolve_cache_dir(c);
  o.threads = c.threads;
  o.seed = c.seed;
  const VerifyReport rep = verify_suite(o);
  json checks = json::array();
  for (const auto& ch : rep.checks) {
    checks.push_back({{"id", ch.id},
                      {"name", ch.name},
                      {"measured", ch.measured},
                      {"tolerance", ch.tolerance},
                      {"passed", ch.passed},
                      {"informational", ch.informational},
                      {"detail", ch.detail}});
  }
  json r;
  r["provenance"] = provenance("verify", 12, "all", 0, c.seed);
  r["level"] = level;
  r["passed"] = rep.passed();
  r["failing"] = rep.failing();
  r["checks"] = checks;
  failed = !rep.passed();
  if (!c.json_out) {
    for (const auto& ch : rep.checks) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%7.2fs", ch.seconds);
      out << (ch.informational ? "[info] " : ch.passed ? "[pass] " : "[FAIL] ") << ch.id << "  " << ch.name
          << "\n        measured " << ch.measured << " vs " << ch.tolerance << " (" << buf << ")"
          << (ch.detail.empty() ? "" : "  " + ch.detail) << '\n';
    }
    out << (failed ? "verification failed\n" : "all checks passed\n");
  }
  return r;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric power L-functions of level-1 eigenforms: coefficients, prime sums, values, "
               "random models and universality searches."};
  app.name(kSoftwareName);
  app.set_version_flag("--version", std::string(kSoftwareName) + " " + kVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  Common common;
  app.add_flag("--json", common.json_out, "Machine-readable JSON on stdout");
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)");
  app.add_option("--cache-dir", common.cache_dir, "Coefficient cache directory ('none' disables; default $SYMUNIV_CACHE)");
  app.add_option("--seed", common.seed, "Seed of the counter-based generator");
  app.add_option("--report", common.report, "Also write the JSON result to this file");

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "Exact q-expansion coefficients (or lambda_F with --kind) as CSV");
  coeffs->add_option("--weight", ca.weight, "Weight k")->capture_default_str();
  coeffs->add_option("--n", ca.n, "Number of coefficients")->required();
  coeffs->add_option("--kind", ca.kind, "sym1..sym4 or rs1..rs4: write lambda_F(n) instead");
  coeffs->add_option("--out", ca.out, "Output CSV")->required();

  AnglesArgs aa;
  auto* angles = app.add_subcommand("angles", "Satake angles and the Deligne bound over primes");
  angles->add_option("--weight", aa.weight, "Weight k")->capture_default_str();
  angles->add_option("--p-max", aa.p_max, "Largest prime")->capture_default_str();
  angles->add_option("--out", aa.out, "CSV of p, lambda, theta");

  PntArgs pa;
  auto* pnt = app.add_subcommand("pnt", "Prime sums theta, psi and pi_w for the Rankin-Selberg square");
  pnt->add_option("--weight", pa.weight, "Weight k")->capture_default_str();
  pnt->add_option("--m", pa.m, "Symmetric power m")->capture_default_str();
  pnt->add_option("--x", pa.x, "Upper limit")->capture_default_str();
  pnt->add_option("--delta", pa.delta, "Thresholds for the P_delta window densities");
  pnt->add_option("--csv", pa.csv, "CSV of x, theta(x)/x at geometric x");
  pnt->add_option("--per-decade", pa.per_decade, "CSV points per decade")->capture_default_str();

  LvalueArgs la;
  auto* lvalue = app.add_subcommand("lvalue", "Evaluate L(s, F)");
  lvalue->add_option("--kind", la.kind, "sym1..sym4 or rs1..rs4")->capture_default_str();
  lvalue->add_option("--weight", la.weight, "Weight k")->capture_default_str();
  lvalue->add_option("--sigma", la.sigma, "Re(s)")->capture_default_str();
  lvalue->add_option("--t", la.t, "Im(s)")->capture_default_str();
  lvalue->add_option("--mode", la.mode, "smoothed or euler")->capture_default_str();
  lvalue->add_option("--X", la.X, "Smoothing length (0: max(50, 3|t|))");
  lvalue->add_option("--levels", la.levels, "Richardson levels")->capture_default_str();
  lvalue->add_option("--n", la.n, "Truncation (terms, or the prime bound in euler mode)");

  MeanSquareArgs ma;
  auto* ms = app.add_subcommand("mean-square", "Mean square of |L(sigma + it)| over [0, T]");
  ms->add_option("--kind", ma.kind, "sym1..sym4 or rs1..rs4")->capture_default_str();
  ms->add_option("--weight", ma.weight, "Weight k")->capture_default_str();
  ms->add_option("--sigma", ma.sigma, "Re(s)")->capture_default_str();
  ms->add_option("--T", ma.T, "Height")->capture_default_str();
  ms->add_option("--dt", ma.dt, "Grid step")->capture_default_str();
  ms->add_option("--levels", ma.levels, "Richardson levels")->capture_default_str();

  RandomModelArgs ra;
  auto* rm = app.add_subcommand("random-model", "Random Euler product against vertical shifts");
  rm->add_option("--kind", ra.kind, "sym1..sym4 or rs1..rs4")->capture_default_str();
  rm->add_option("--weight", ra.weight, "Weight k")->capture_default_str();
  rm->add_option("--sigma", ra.sigma, "Re(s)")->capture_default_str();
  rm->add_option("--t", ra.t, "Im(s)")->capture_default_str();
  rm->add_option("--p-max", ra.p_max, "Largest prime of the model")->capture_default_str();
  rm->add_option("--n-model", ra.n_model, "Model samples")->capture_default_str();
  rm->add_option("--n-shift", ra.n_shift, "Shift samples")->capture_default_str();
  rm->add_option("--T", ra.T, "Shift range")->capture_default_str();
  rm->add_option("--samples", ra.samples, "CSV of both populations");
  rm->add_flag("--support", ra.support, "Also report min |L(s, F; omega)| over a 25-point grid");

  UniversalityArgs ua;
  auto* un = app.add_subcommand("universality", "Shift search approximating a target on a disc");
  un->add_option("--kind", ua.kind, "sym1..sym4 or rs1..rs4")->capture_default_str();
  un->add_option("--weight", ua.weight, "Weight k")->capture_default_str();
  un->add_option("--center", ua.center, "Disc center (default per kind)");
  un->add_option("--radius", ua.radius, "Disc radius (default per kind)");
  un->add_option("--target", ua.target, "const:<c>, file:<csv re,im,phi_re,phi_im> or shift:<t0>")->capture_default_str();
  un->add_option("--T", ua.T, "Shift range")->capture_default_str();
  un->add_option("--dt", ua.dt, "Grid step")->capture_default_str();
  un->add_option("--eps", ua.eps, "Good-set threshold")->capture_default_str();
  un->add_option("--n-boundary", ua.n_boundary, "Boundary samples")->capture_default_str();
  un->add_option("--degree", ua.degree, "Polynomial degree for file targets")->capture_default_str();
  un->add_option("--jet", ua.jet, "Search derivative jets of this length at sigma = center instead");
  un->add_option("--csv", ua.csv, "CSV of t, sup_err");

  std::string level = "quick";
  auto* verify = app.add_subcommand("verify", "Run the invariant verification suite");
  verify->add_option("--level", level, "quick or full")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    json result;
    bool failed = false;
    if (*coeffs) result = run_coeffs(ca, common);
    else if (*angles) result = run_angles(aa, common);
    else if (*pnt) result = run_pnt(pa, common);
    else if (*lvalue) result = run_lvalue(la, common);
    else if (*ms) result = run_mean_square(ma, common);
    else if (*rm) result = run_random_model(ra, common);
    else if (*un) result = run_universality(ua, common);
    else if (*verify) {
      result = run_verify(level, common, out, failed);
      if (common.json_out) emit(result, common, out);
      else if (!common.report.empty()) write_report(result, common.report);
      if (failed) {
        err << json{{"error", "verification-failed"}, {"failing", result["failing"]}}.dump() << '\n';
        return 1;
      }
      return 0;
    }
    emit(result, common, out);
    return 0;
  } catch (const ConfigError& e) {
    err << json{{"error", std::string(errc_name(Errc::invalid_argument))}, {"problems", e.problems}}.dump() << '\n';
    return 1;
  } catch (const Error& e) {
    err << json{{"error", std::string(errc_name(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}

}  // namespace symuniv
