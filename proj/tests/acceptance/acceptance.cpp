// One line per acceptance criterion: PASS/FAIL, the measured value, the
// tolerance and the wall time. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "symuniv/error.hpp"
#include "symuniv/lvalue.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/oracles.hpp"
#include "symuniv/prime_stats.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/random_model.hpp"
#include "symuniv/sympower.hpp"
#include "symuniv/universality.hpp"

using namespace symuniv;

namespace {

struct Verdict {
  bool ok;
  std::string measured;
};

int failures = 0;

void criterion(int id, const char* what, double max_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const Error& e) {
    v = {false, std::string(errc_name(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= max_seconds;
  const bool ok = v.ok && in_time;
  if (!ok) ++failures;
  std::printf("%s criterion %2d: %s | %s | %.1f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, what,
              v.measured.c_str(), secs, max_seconds, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::vector<double> times(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

using Shape = std::vector<std::pair<char, double>>;

Shape shape_of(const GammaFactorSpec& g) {
  Shape s;
  for (const auto& f : g.factors) s.emplace_back(f.kind == GammaKind::R ? 'R' : 'C', f.shift);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path cache = argc > 1 ? argv[1] : std::filesystem::path("acceptance-cache");
  std::filesystem::create_directories(cache);
  constexpr std::size_t kN = 1000000;
  HeckeEigenform delta = qexp_newform(12, 10);

  criterion(1, "exact kernel: dual route n <= 1e4, Hecke mn <= 300 (k = 12, 16), Deligne p <= 1e6", 120, [&] {
    const QSeries theta_route = qexp_delta(10000);
    const auto product = oracle::delta_direct_product(10000);
    std::size_t mismatches = 0;
    for (std::size_t n = 1; n <= 10000; ++n) mismatches += theta_route[n] != product[n];
    const auto h12 = check_hecke_relation(qexp_newform(12, 300), 300);
    const auto h16 = check_hecke_relation(qexp_newform(16, 300), 300);
    delta = load_or_build(12, kN, cache);
    const PrimeTable primes(kN);
    double worst = 0.0;
    for (const std::uint32_t p : primes.primes()) worst = std::max(worst, std::abs(delta.lambda(p)));
    return Verdict{mismatches == 0 && !h12 && !h16 && worst <= 2.0 + 1e-12,
                   "mismatches " + std::to_string(mismatches) + ", Hecke failures " +
                       std::to_string((h12 ? 1 : 0) + (h16 ? 1 : 0)) + ", max |lambda(p)| " +
                       std::to_string(worst) + " <= 2+1e-12"};
  });

  criterion(2, "von Mangoldt closed form vs log-derivative oracle, p <= 100, nu <= 6, m <= 4", 60, [&] {
    const PrimeTable primes(100);
    double worst = 0.0;
    for (const std::uint32_t p : primes.primes()) {
      const double theta = satake_angle(delta, p).theta, lp = std::log(double(p));
      for (int m = 1; m <= 4; ++m) {
        const auto series = log_deriv_oracle(local_factor_poly(LKind::rankin_selberg(m), theta), 6);
        for (unsigned nu = 1; nu <= 6; ++nu)
          worst = std::max(worst, std::abs(series[nu] * lp - von_mangoldt_rs(theta, m, nu, lp)));
      }
    }
    return Verdict{worst <= 1e-9, "max error " + num(worst) + " <= 1e-9"};
  });

  criterion(3, "zeta factorization of the local factor, p <= 1000, m <= 4", 60, [&] {
    const PrimeTable primes(1000);
    double worst = 0.0;
    for (const std::uint32_t p : primes.primes()) {
      const double theta = satake_angle(delta, p).theta;
      for (int m = 1; m <= 4; ++m) {
        std::vector<double> prod = psi_local_factor(theta, m);
        for (int i = 0; i <= m; ++i) prod = times(prod, {1.0, -1.0});
        const auto rs = local_factor_poly(LKind::rankin_selberg(m), theta);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
          scale = std::max(scale, std::abs(rs[i]));
          diff = std::max(diff, std::abs(rs[i] - prod[i]));
        }
        worst = std::max(worst, diff / scale);
      }
    }
    return Verdict{worst <= 1e-12, "max residual relative to the largest coefficient " + num(worst) + " <= 1e-12"};
  });

  criterion(4, "prime number theorem, m = 1..4, x = 1e6: |theta/x - 1|, |psi/x - 1| <= 0.05", 60, [&] {
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m) {
      const PntReport r = prime_sums(delta, m, kN);
      worst = std::max({worst, std::abs(r.theta / 1e6 - 1.0), std::abs(r.psi / 1e6 - 1.0)});
    }
    return Verdict{worst <= 0.05, "max deviation " + num(worst) + " <= 0.05"};
  });

  criterion(5, "P_delta density, m = 1, delta in {0.25, 0.5, 0.75}, windows (a, 2a], a in {1e4, 1e5}", 60, [&] {
    double margin = 1e9;
    for (double d : {0.25, 0.5, 0.75}) {
      for (std::uint64_t a : {10000ull, 100000ull}) {
        const PiDeltaReport r = pi_delta(delta, 1, d, 2 * a, a, 2 * a);
        const double bound = (1 - d * d) / (4 - d * d) - 0.05;
        margin = std::min(margin, r.ratio - bound);
      }
    }
    return Verdict{margin >= 0.0, "min (ratio - (bound - 0.05)) " + num(margin) + " >= 0"};
  });

  criterion(6, "gamma factor shapes for all eight kinds; Sym(1) functional equation", 60, [&] {
    const std::vector<std::pair<LKind, Shape>> expected = {
        {LKind::sym(1), {{'C', 5.5}}},
        {LKind::sym(2), {{'C', 11}, {'R', 1}}},
        {LKind::sym(3), {{'C', 5.5}, {'C', 16.5}}},
        {LKind::sym(4), {{'C', 11}, {'C', 22}, {'R', 0}}},
        {LKind::rankin_selberg(1), {{'C', 0}, {'C', 11}}},
        {LKind::rankin_selberg(2), {{'C', 0}, {'C', 11}, {'C', 11}, {'C', 22}, {'R', 0}}},
        {LKind::rankin_selberg(3), {{'C', 0}, {'C', 0}, {'C', 11}, {'C', 11}, {'C', 11}, {'C', 22}, {'C', 22}, {'C', 33}}},
        {LKind::rankin_selberg(4),
         {{'C', 0}, {'C', 0}, {'C', 11}, {'C', 11}, {'C', 11}, {'C', 11}, {'C', 22}, {'C', 22}, {'C', 22}, {'C', 33},
          {'C', 33}, {'C', 44}, {'R', 0}}},
    };
    int wrong = 0;
    for (const auto& [kind, shape] : expected) wrong += shape_of(gamma_spec(kind, 12)) != shape;
    const auto fe = functional_equation_check(delta, LKind::sym(1));
    return Verdict{wrong == 0 && fe.epsilon == 1 && fe.residual < 1e-8,
                   std::to_string(wrong) + " wrong shapes, epsilon " + std::to_string(fe.epsilon) + ", residual " +
                       num(fe.residual) + " < 1e-8"};
  });

  const LFunction L2(delta, LKind::sym(2), kN);

  criterion(7, "mean square, Sym(2), sigma = 0.8, T = 2000: ratio in [0.85, 1.15]", 300, [&] {
    const auto r = mean_square(L2, 0.8, 2000.0, 0.25);
    return Verdict{r.ratio >= 0.85 && r.ratio <= 1.15, "M_emp/M_ref " + num(r.ratio)};
  });

  const RandomModel model(delta, LKind::sym(2), 100000);
  const std::uint64_t seed = 777;

  criterion(8, "random model: mean and E|L|^2 within 3 SE (n = 1e4); KS(|L|) <= 0.05 (T = 5000, n = 2000)", 600, [&] {
    const auto values = model_values(model, 0.8, 10000, seed);
    const auto pm = population_moments(values);
    const double z_mean = std::abs(pm.mean - 1.0) / pm.se_mean;
    const auto dc = dirichlet_coefficients(delta, LKind::sym(2), kN);
    const double z_second = std::abs(pm.mean_abs2 - dirichlet_second_moment(dc.table(), 0.8)) / pm.se_abs2;
    const auto d = distribution_compare(L2, model, 0.8, 5000.0, 2000, 2000, seed);
    return Verdict{z_mean <= 3 && z_second <= 3 && d.ks_abs <= 0.05,
                   "z(mean) " + num(z_mean) + ", z(second) " + num(z_second) + " <= 3, KS " + num(d.ks_abs) +
                       " <= 0.05"};
  });

  criterion(9, "support: min |L(s, F; omega)| over 1e4 samples x 25 points of [0.75, 0.95] x [0, 2] > 0", 120, [&] {
    std::vector<cplx> grid;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) grid.emplace_back(0.75 + 0.05 * i, 0.5 * j);
    const auto r = support_scan(model, grid, 10000, seed);
    return Verdict{r.min_abs > 0.0, "min " + num(r.min_abs) + " > 0"};
  });

  criterion(10, "universality: hidden shift, jets vs differences, hidden jet (J = 3), good-set stability", 600, [&] {
    const double T = 500.0, dt = 0.05;
    const DiscRegion K{0.85, 0.05};
    std::mt19937_64 rng(seed);
    const double t0 = std::uniform_real_distribution<double>(0.0, T)(rng);
    const double t1 = std::uniform_real_distribution<double>(0.0, T)(rng);
    EvalParams at_scan;
    at_scan.X = scan_X(T, K.radius);
    const ComplexFn phi = [&](cplx s) { return eval_L(L2, s + cplx(0.0, t0), at_scan).value; };
    const auto hs = shift_search(L2, K, phi, T, dt, 0.0);
    const bool shift_ok = hs.best_err <= 1e-3 && std::abs(hs.best_t - t0) <= dt;

    const double eps = 0.5 * hs.target_sup;
    const double g1 = good_set_fraction(hs.err, eps);
    const double g2 = shift_search(L2, K, phi, T, dt / 2, eps).good_set_measure;
    const double rel = g1 > 0 ? std::abs(g2 - g1) / g1 : 1.0;

    double fd_err = 0.0;
    for (double t : {3.0, 77.7, 412.0}) {
      const auto jet = derivative_vector(L2, 0.85, t, 2);
      const double h = 1e-4;
      const cplx fd = (eval_L(L2, cplx(0.85 + h, t)).value - eval_L(L2, cplx(0.85 - h, t)).value) / (2 * h);
      fd_err = std::max(fd_err, std::abs(jet[1] - fd));
    }

    const double rho = default_contour_radius(L2.kind(), 0.85);
    const auto target = derivative_vector(L2, 0.85, t1, 3, rho, scan_X(T, rho));
    const auto vj = vector_target_search(L2, 0.85, target, T, dt);

    return Verdict{shift_ok && rel < 0.2 && fd_err <= 1e-6 && vj.distance <= 1e-3,
                   "shift err " + num(hs.best_err) + " |dt0| " + num(std::abs(hs.best_t - t0)) + "; good set " +
                       num(g1) + " vs " + num(g2) + " (rel " + num(rel) + " < 0.2); jet fd " + num(fd_err) +
                       " <= 1e-6; jet distance " + num(vj.distance) + " <= 1e-3"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
