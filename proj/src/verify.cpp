#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "symuniv/cli.hpp"
#include "symuniv/error.hpp"
#include "symuniv/lvalue.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/oracles.hpp"
#include "symuniv/prime_stats.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/random_model.hpp"
#include "symuniv/sympower.hpp"
#include "symuniv/universality.hpp"

namespace symuniv {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  double measured;
  double tolerance;
  bool passed;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  void run(std::string id, std::string name, const std::function<Outcome()>& body, bool informational = false) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{std::move(id), std::move(name), 0.0, 0.0, false, informational, "", 0.0};
    try {
      const Outcome o = body();
      r.measured = o.measured;
      r.tolerance = o.tolerance;
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const Error& e) {
      r.measured = std::nan("");
      r.detail = std::string(errc_name(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      r.measured = std::nan("");
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.checks.push_back(std::move(r));
  }

 private:
  VerifyReport& report_;
};

Outcome at_most(double measured, double tolerance, std::string detail = {}) {
  return {measured, tolerance, measured <= tolerance, std::move(detail)};
}

// Uniform value in [0, 1) from the counter generator.
double unit_draw(std::uint64_t seed, std::uint64_t index) { return phase_angle(seed, index) / (2.0 * kPi); }

std::vector<std::pair<char, double>> gamma_shape(const LKind& kind, int k) {
  std::vector<std::pair<char, double>> out;
  for (const auto& g : gamma_spec(kind, k).factors) out.emplace_back(g.kind == GammaKind::C ? 'C' : 'R', g.shift);
  std::sort(out.begin(), out.end());
  return out;
}

// Shapes for k = 12 straight from the case split on m = 2n + 1 and m = 2n.
std::vector<std::pair<char, double>> expected_gamma_shape(const LKind& kind) {
  const double w = 11.0;
  const int m = kind.m();
  const int n = m / 2;
  std::vector<std::pair<char, double>> out;
  if (kind.variant() == Variant::sym) {
    if (m % 2 == 1) {
      for (int v = 0; v <= n; ++v) out.emplace_back('C', (v + 0.5) * w);
    } else {
      out.emplace_back('R', n % 2 == 1 ? 1.0 : 0.0);
      for (int v = 1; v <= n; ++v) out.emplace_back('C', v * w);
    }
  } else {
    if (m % 2 == 0) out.emplace_back('R', 0.0);
    for (int j = 0; j < (m % 2 == 1 ? n + 1 : n); ++j) out.emplace_back('C', 0.0);
    for (int v = 1; v <= m; ++v)
      for (int j = 0; j < m - v + 1; ++j) out.emplace_back('C', v * w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Scale {
  std::size_t N;           // coefficients of the weight-12 form
  std::uint64_t deligne;   // prime limit for the Deligne scan
  std::uint64_t pnt_x;
  double ms_T;
  double ms_dt;
  std::uint64_t model_p;
  std::size_t model_n;
  double shift_T;
  std::size_t shift_n;
  std::size_t support_n;
  double search_T;
};

constexpr Scale kQuick{200000, 100000, 100000, 200.0, 0.25, 10000, 1000, 500.0, 300, 500, 50.0};
constexpr Scale kFull{1000000, 1000000, 1000000, 2000.0, 0.25, 100000, 10000, 5000.0, 2000, 10000, 500.0};

void modform_checks(Suite& suite, const Scale& sc, const HeckeEigenform& f) {
  suite.run("C1.dual-route", "theta-power and direct-product Delta agree exactly for n <= 10^4", [] {
    const std::size_t N = 10000;
    const QSeries d = qexp_delta(N);
    const auto direct = oracle::delta_direct_product(N);
    std::size_t bad = 0, first = 0;
    for (std::size_t n = 1; n <= N; ++n) {
      if (d[n] != direct[n]) {
        if (bad++ == 0) first = n;
      }
    }
    return Outcome{static_cast<double>(bad), 0.0, bad == 0,
                   bad ? "first mismatch at n = " + std::to_string(first) : "mismatches"};
  });
  suite.run("C1.hecke", "exact Hecke relation for mn <= 300 at k = 12 and k = 16", [] {
    std::size_t failures = 0;
    std::string detail = "failing relations";
    for (int k : {12, 16}) {
      if (const auto v = check_hecke_relation(qexp_newform(k, 300), 300)) {
        failures += v->failures;
        detail = "k = " + std::to_string(k) + ": m = " + std::to_string(v->m) + ", n = " + std::to_string(v->n) +
                 ", suspect n = " + std::to_string(v->suspect);
      }
    }
    return Outcome{static_cast<double>(failures), 0.0, failures == 0, detail};
  });
  suite.run("C1.deligne", "max |lambda_f(p)| over p <= " + std::to_string(sc.deligne) + " is at most 2 + 1e-12",
            [&] {
              const auto r = deligne_scan(f, sc.deligne);
              return at_most(r.max_abs_lambda, 2.0 + kDeligneSlack,
                             "argmax p = " + std::to_string(r.argmax_p) + " over " +
                                 std::to_string(r.primes_checked) + " primes");
            });
}

void sympower_checks(Suite& suite, const HeckeEigenform& f) {
  suite.run("C2.von-mangoldt", "closed-form Lambda(p^nu) vs log-derivative oracle, p <= 100, nu <= 6, m <= 4", [&] {
    double worst = 0.0;
    const PrimeTable primes(100);
    for (std::uint64_t p : primes.primes()) {
      const double th = satake_angle(f, p).theta, lp = std::log(static_cast<double>(p));
      for (int m = 1; m <= 4; ++m) {
        const auto rs = log_deriv_oracle(local_factor_poly(LKind::rankin_selberg(m), th), 6);
        const auto ps = log_deriv_oracle(psi_local_factor(th, m), 6);
        for (unsigned nu = 1; nu <= 6; ++nu) {
          worst = std::max(worst, std::abs(von_mangoldt_rs(th, m, nu, lp) - rs[nu] * lp));
          worst = std::max(worst, std::abs(von_mangoldt_psi(th, m, nu, lp) - ps[nu] * lp));
        }
      }
    }
    return at_most(worst, 1e-9, "max abs difference");
  });
  suite.run("C3.zeta-factorization", "RS local factor = (1 - x)^{m+1} times the Psi factor, p <= 1000, m <= 4", [&] {
    double worst = 0.0;
    const PrimeTable primes(1000);
    for (std::uint64_t p : primes.primes())
      for (int m = 1; m <= 4; ++m) worst = std::max(worst, zeta_factorization_residual(satake_angle(f, p).theta, m));
    return at_most(worst, 1e-12, "max relative coefficient residual");
  });
}

void prime_checks(Suite& suite, const Scale& sc, const HeckeEigenform& f) {
  suite.run("C4.pnt", "|theta(x)/x - 1| and |psi(x)/x - 1| at x = " + std::to_string(sc.pnt_x) + ", m = 1..4", [&] {
    const PrimeTable primes(sc.pnt_x);
    double worst = 0.0;
    std::string detail;
    for (int m = 1; m <= 4; ++m) {
      const auto r = prime_sums(f, m, sc.pnt_x, primes);
      worst = std::max({worst, std::abs(r.theta_ratio - 1.0), std::abs(r.psi_ratio - 1.0)});
      detail += (m > 1 ? "; " : "") + std::string("m=") + std::to_string(m) + " theta/x=" + fmt(r.theta_ratio) +
                " psi/x=" + fmt(r.psi_ratio);
    }
    return at_most(worst, 0.05, detail);
  });
  suite.run("C5.p-delta", "window density of |lambda_f(p)| >= delta above (1-d^2)/(4-d^2) - 0.05", [&] {
    double slack = 1e300;
    std::string detail;
    for (double delta : {0.25, 0.5, 0.75}) {
      for (std::uint64_t a : {10000ull, 100000ull}) {
        const auto r = pi_delta(f, 1, delta, 2 * a, a, 2 * a);
        slack = std::min(slack, r.ratio - (r.lower_bound - 0.05));
        detail += (detail.empty() ? "" : "; ") + fmt(delta) + "@" + std::to_string(a) + ": " + fmt(r.ratio);
      }
    }
    return Outcome{slack, 0.0, slack >= 0.0, "min margin over the bound; ratios " + detail};
  });
}

void lvalue_checks(Suite& suite, const Scale& sc, const HeckeEigenform& f, unsigned threads, std::uint64_t seed) {
  suite.run("C6.gamma", "gamma_spec matches the eight (kind, m) shapes at k = 12", [] {
    int bad = 0;
    std::string detail = "mismatching shapes";
    for (int m = 1; m <= 4; ++m) {
      for (const auto& kind : {LKind::sym(m), LKind::rankin_selberg(m)}) {
        if (gamma_shape(kind, 12) != expected_gamma_shape(kind) || gamma_spec(kind, 12).degree() != kind.degree()) {
          ++bad;
          detail = kind.name();
        }
      }
    }
    return Outcome{static_cast<double>(bad), 0.0, bad == 0, detail};
  });
  suite.run("C6.functional-equation", "theta-integral Lambda(s) = eps Lambda(1 - s) for Sym(1), k = 12", [&] {
    const auto fe = functional_equation_check(f, LKind::sym(1));
    return Outcome{fe.residual, 1e-8, fe.residual < 1e-8 && fe.epsilon == 1,
                   "eps = " + std::to_string(fe.epsilon) + ", other sign residual " + fmt(fe.other_residual)};
  });

  const LFunction L2(f, LKind::sym(2), std::min<std::size_t>(f.bound(), 1000000));
  suite.run("C6.abs-convergence", "smoothed and Euler-product modes agree at Re(s) = 6", [&] {
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m) {
      const LFunction L(f, LKind::sym(m), 20000);
      for (double t : {0.0, 3.7, 25.0}) {
        const cplx s(6.0, t);
        EvalParams e;
        e.mode = EvalMode::euler_product;
        worst = std::max(worst, std::abs(L.eval(s).value - L.eval(s, e).value));
      }
    }
    return at_most(worst, 1e-9);
  });
  suite.run("I.strip-agreement", "smoothed vs Euler product at 20 points with Re(s) in [1.5, 4]", [&] {
    double worst = 0.0;
    const LFunction& L = L2;
    EvalParams sm, eu;
    sm.X = 6000.0;
    eu.mode = EvalMode::euler_product;
    if (smoothed_terms(sm.X, sm.levels) > L.capacity()) sm.X = L.capacity() / (4.0 * kGaussianCut) - 1.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const cplx s(1.5 + 2.5 * unit_draw(seed, 2 * i), 30.0 * unit_draw(seed, 2 * i + 1));
      worst = std::max(worst, std::abs(L.eval(s, sm).value - L.eval(s, eu).value));
    }
    return at_most(worst, 1e-8, "limited by the Euler tail at the available prime range");
  }, true);
  suite.run("C7.mean-square", "Sym(2) mean square ratio at sigma = 0.8, T = " + fmt(sc.ms_T), [&] {
    const auto r = mean_square(L2, 0.8, sc.ms_T, sc.ms_dt, threads);
    return Outcome{r.ratio, 0.15, std::abs(r.ratio - 1.0) <= 0.15,
                   "M_emp = " + fmt(r.M_emp) + ", M_ref = " + fmt(r.M_ref)};
  });
  suite.run("C7.mean-square-dt", "mean square changes < 1% when the t-grid step halves", [&] {
    const auto a = mean_square(L2, 0.8, sc.ms_T, sc.ms_dt, threads);
    const auto b = mean_square(L2, 0.8, sc.ms_T, sc.ms_dt / 2.0, threads);
    return at_most(std::abs(b.M_emp / a.M_emp - 1.0), 0.01, "relative change of M_emp");
  });
}

void model_checks(Suite& suite, const Scale& sc, const HeckeEigenform& f, unsigned threads, std::uint64_t seed,
                  bool full) {
  const LFunction L(f, LKind::sym(2), std::min<std::size_t>(f.bound(), 1000000));
  const RandomModel M(f, LKind::sym(2), sc.model_p);
  const auto values = model_values(M, 0.8, sc.model_n, seed, threads);
  const auto pm = population_moments(values);
  suite.run("C8.model-mean", "random-model mean within 3 SE of 1 (Sym(2), sigma = 0.8)", [&] {
    const double z = std::abs(pm.mean - 1.0) / pm.se_mean;
    return at_most(z, 3.0, "mean = " + fmt(pm.mean.real()) + (pm.mean.imag() < 0 ? "" : "+") + fmt(pm.mean.imag()) +
                               "i, SE " + fmt(pm.se_mean));
  });
  suite.run("C8.model-second-moment", "E|L|^2 within 3 SE of the truncated Dirichlet reference", [&] {
    const double ref = dirichlet_second_moment(L.coefficients(), 0.8);
    const double z = std::abs(pm.mean_abs2 - ref) / pm.se_abs2;
    return at_most(z, 3.0, "sample " + fmt(pm.mean_abs2) + " vs reference " + fmt(ref) + ", SE " + fmt(pm.se_abs2));
  });
  suite.run("C8.ks-abs", "KS(|L|) between shift and model samples", [&] {
    const auto r = distribution_compare(L, M, 0.8, sc.shift_T, sc.shift_n, sc.shift_n, seed, threads);
    const double tol = full ? 0.05 : r.ks_critical_01;
    return at_most(r.ks_abs, tol, "ks_re = " + fmt(r.ks_re) + ", ks_im = " + fmt(r.ks_im) + ", n = " +
                                      std::to_string(sc.shift_n) + " each");
  });
  suite.run("C9.support", "min |L(s, F; omega)| over the samples and a 25-point s-grid is positive", [&] {
    std::vector<cplx> pts;
    for (double sigma : {0.7, 0.75, 0.8, 0.85, 0.95})
      for (double t : {0.0, 5.0, 10.0, 20.0, 40.0}) pts.emplace_back(sigma, t);
    const auto r = support_scan(M, pts, sc.support_n, seed, threads);
    return Outcome{r.min_abs, 0.0, r.min_abs > 0.0,
                   std::to_string(r.samples) + " samples; minimum at s = " + fmt(r.argmin_s.real()) + "+" +
                       fmt(r.argmin_s.imag()) + "i"};
  });
  if (full) {
    suite.run("I.model-tail", "one model sample at sigma = 0.75: P_max = 10^4 vs 10^5", [&] {
      const RandomModel small(f, LKind::sym(2), 10000);
      const auto omega = sample_phases(seed, sc.model_p);
      const double d = std::abs(random_L(small, 0.75, omega).value - random_L(M, 0.75, omega).value);
      return at_most(d, 1e-6, "the prime tail between the cutoffs is not negligible at this sigma");
    }, true);
  }
}

void universality_checks(Suite& suite, const Scale& sc, const HeckeEigenform& f, unsigned threads,
                         std::uint64_t seed) {
  const LKind kind = LKind::sym(2);
  const DiscRegion K = default_disc(kind);
  const double T = sc.search_T, dt = 0.05;
  const std::size_t need = smoothed_terms(scan_X(T, 0.1), 2);
  const LFunction L(f, kind, std::min<std::size_t>(f.bound(), std::max<std::size_t>(need, 20000)));
  ShiftSearchOptions opt;
  opt.threads = threads;
  const double t0 = T * unit_draw(seed, 1001);
  EvalParams px;
  px.X = scan_X(T, K.radius);
  const ComplexFn phi = [&](cplx s) { return L.eval(s + cplx(0.0, t0), px).value; };
  ShiftSearchResult coarse;
  suite.run("C10.hidden-shift", "hidden shift recovered: best_err <= 1e-3 and |best_t - t0| <= dt", [&] {
    coarse = shift_search(L, K, phi, T, dt, 0.0, opt);
    const bool close = std::abs(coarse.best_t - t0) <= dt;
    return Outcome{coarse.best_err, 1e-3, coarse.best_err <= 1e-3 && close,
                   "t0 = " + fmt(t0) + ", best_t = " + fmt(coarse.best_t) + ", grid best " + fmt(coarse.grid_best_err)};
  });
  suite.run("C10.good-set", "good-set fraction at eps = |target|/2 stable under grid halving", [&] {
    if (coarse.err.empty()) throw Error(Errc::invalid_argument, "hidden-shift scan did not run");
    const double eps = 0.5 * coarse.target_sup;
    const double g1 = good_set_fraction(coarse.err, eps);
    const auto fine = shift_search(L, K, phi, T, dt / 2.0, eps, opt);
    const double g2 = fine.good_set_measure;
    const double rel = g1 > 0.0 ? std::abs(g2 - g1) / g1 : 1.0;
    return at_most(rel, 0.2, "fraction " + fmt(g1) + " at dt = " + fmt(dt) + ", " + fmt(g2) + " at dt/2");
  });
  suite.run("C10.jet-fd", "L' from the Cauchy jet vs central difference (h = 1e-4) of eval_L", [&] {
    double worst = 0.0;
    for (double t : {0.0, 14.0, 0.37 * T}) {
      const auto jet = derivative_vector(L, 0.85, t, 2);
      const double h = 1e-4;
      const cplx fd = (L.eval(cplx(0.85 + h, t)).value - L.eval(cplx(0.85 - h, t)).value) / (2.0 * h);
      worst = std::max(worst, std::abs(jet[1] - fd));
    }
    return at_most(worst, 1e-6);
  });
  suite.run("C10.jet-value", "zeroth jet entry equals eval_L", [&] {
    double worst = 0.0;
    for (double t : {0.0, 14.0, 0.37 * T}) worst = std::max(worst, std::abs(derivative_vector(L, 0.85, t, 1)[0] - L.eval(cplx(0.85, t)).value));
    return at_most(worst, 1e-9);
  });
  suite.run("C10.hidden-jet", "hidden jet (J = 3) recovered to distance <= 1e-3", [&] {
    const double t1 = T * unit_draw(seed, 1002);
    VectorSearchOptions vo;
    vo.threads = threads;
    const double rho = default_contour_radius(kind, 0.85);
    const auto target = derivative_vector(L, 0.85, t1, 3, rho, scan_X(T, rho));
    const auto r = vector_target_search(L, 0.85, target, T, dt, vo);
    return at_most(r.distance, 1e-3, "t1 = " + fmt(t1) + ", best_t = " + fmt(r.best_t));
  });
}

void fault_injection_check(Suite& suite) {
  suite.run("F.cache-fault", "a corrupted cached coefficient breaks the Hecke check at that index", [] {
    const auto dir = std::filesystem::temp_directory_path() / ("symuniv-verify-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(dir);
    const auto path = dir / "weight12_N400.csv";
    write_coefficient_cache(qexp_newform(12, 400), path);
    const std::uint64_t target = 150;
    std::vector<std::string> lines;
    {
      std::ifstream in(path);
      for (std::string line; std::getline(in, line);) lines.push_back(line);
    }
    for (auto& line : lines) {
      if (line.rfind(std::to_string(target) + ",", 0) == 0) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        mpz_class v(line.substr(c1 + 1, c2 - c1 - 1));
        v += 1;
        line = line.substr(0, c1 + 1) + v.get_str() + line.substr(c2);
      }
    }
    {
      std::ofstream out(path, std::ios::trunc);
      for (const auto& line : lines) out << line << '\n';
    }
    bool checksum_caught = false;
    try {
      read_coefficient_cache(path);
    } catch (const Error& e) {
      checksum_caught = e.code() == Errc::cache_corrupt;
    }
    const auto v = check_hecke_relation(read_coefficient_cache(path, ChecksumPolicy::skip), 300);
    std::filesystem::remove_all(dir);
    const bool named = v && v->suspect == target;
    return Outcome{v ? static_cast<double>(v->suspect) : 0.0, static_cast<double>(target), named && checksum_caught,
                   std::string("checksum ") + (checksum_caught ? "rejected the file" : "missed the change") +
                       (v ? ", Hecke check names n = " + std::to_string(v->suspect) : ", Hecke check passed")};
  });
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

std::vector<std::string> VerifyReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed && !c.informational) out.push_back(c.id);
  return out;
}

VerifyReport verify_suite(const VerifyOptions& options) {
  const bool full = options.level == VerifyLevel::full;
  const Scale& sc = full ? kFull : kQuick;
  VerifyReport report{options.level, {}};
  Suite suite(report);
  const HeckeEigenform f = load_or_build(12, sc.N, options.cache_dir);
  modform_checks(suite, sc, f);
  sympower_checks(suite, f);
  prime_checks(suite, sc, f);
  lvalue_checks(suite, sc, f, options.threads, options.seed);
  model_checks(suite, sc, f, options.threads, options.seed, full);
  universality_checks(suite, sc, f, options.threads, options.seed);
  fault_injection_check(suite);
  return report;
}

}  // namespace symuniv
