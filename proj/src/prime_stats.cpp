#include "symuniv/prime_stats.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "symuniv/error.hpp"
#include "symuniv/sympower.hpp"

namespace symuniv {

namespace {

void require_m(int m) {
  if (m < 1 || m > 4) throw Error(Errc::unsupported_kind, "m = " + std::to_string(m) + " is outside 1..4");
}

void require_cover(const HeckeEigenform& f, std::uint64_t x) {
  if (x > f.bound()) {
    throw Error(Errc::insufficient_cache,
                "prime sums to " + std::to_string(x) + " need coefficients beyond " + std::to_string(f.bound()));
  }
}

}  // namespace

PntReport prime_sums(const HeckeEigenform& f, int m, std::uint64_t x) {
  require_cover(f, x);
  return prime_sums(f, m, x, PrimeTable(x));
}

PntReport prime_sums(const HeckeEigenform& f, int m, std::uint64_t x, const PrimeTable& primes) {
  require_m(m);
  if (x < 2) throw Error(Errc::invalid_argument, "prime sums need x >= 2");
  require_cover(f, x);
  if (primes.limit() < x) throw Error(Errc::insufficient_cache, "prime table does not reach x");
  PntReport r{f.weight(), m, x, 0.0, 0.0, 0.0, 0, 0.0, 0.0, 0.0, 0.0};
  for (const std::uint32_t p : primes.primes()) {
    if (p > x) break;
    ++r.pi_x;
    const double theta = satake_theta(f.lambda(p), p);
    const double log_p = std::log(static_cast<double>(p));
    const double w = von_mangoldt_rs(theta, m, 1, 1.0);  // |lambda_f(p^m)|^2
    r.theta += w * log_p;
    r.pi_w += w;
    r.psi += w * log_p;
    std::uint64_t q = static_cast<std::uint64_t>(p) * p;
    for (unsigned nu = 2; q <= x; ++nu, q *= p) r.psi += von_mangoldt_rs(theta, m, nu, log_p);
  }
  const double xd = static_cast<double>(x);
  const double lx = std::log(xd);
  r.psi_ratio = r.psi / xd;
  r.theta_ratio = r.theta / xd;
  r.pi_w_ratio = r.pi_w / (xd / lx);
  const auto root = static_cast<std::uint64_t>(std::sqrt(xd));
  r.r_bound = (m + 1.0) * (m + 1.0) * static_cast<double>(primes.count_upto(root)) * lx;
  return r;
}

PiDeltaReport pi_delta(const HeckeEigenform& f, int m, double delta, std::uint64_t x, std::uint64_t a,
                       std::uint64_t b) {
  require_m(m);
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(Errc::invalid_argument, "delta must lie in [0, 1)");
  if (a == 0) a = x / 2;
  if (b == 0) b = 2 * a;
  if (b <= a) throw Error(Errc::invalid_argument, "window (a, b] is empty");
  PiDeltaReport r{m, delta, x, 0, 0, a, b, 0, 0, 0.0, (1.0 - delta * delta) / ((m + 1.0) * (m + 1.0) - delta * delta)};
  const std::uint64_t top = std::max(x, b);
  if (top < 2) return r;
  require_cover(f, top);
  const PrimeTable primes(top);
  for (const std::uint32_t p : primes.primes()) {
    const double lam = std::abs(chebyshev_u(static_cast<unsigned>(m), std::cos(satake_theta(f.lambda(p), p))));
    const bool hit = lam >= delta;
    if (p <= x) {
      ++r.pi_x;
      if (hit) ++r.count;
    }
    if (p > a && p <= b) {
      ++r.window_primes;
      if (hit) ++r.window_count;
    }
  }
  r.ratio = r.window_primes ? static_cast<double>(r.window_count) / r.window_primes : 0.0;
  return r;
}

std::vector<ThetaSample> theta_samples(const HeckeEigenform& f, int m, std::uint64_t x_max, unsigned per_decade) {
  require_m(m);
  require_cover(f, x_max);
  if (per_decade == 0) throw Error(Errc::invalid_argument, "need at least one sample per decade");
  std::vector<std::uint64_t> xs;
  for (unsigned i = 0;; ++i) {
    const auto x = static_cast<std::uint64_t>(std::llround(10.0 * std::pow(10.0, static_cast<double>(i) / per_decade)));
    if (x > x_max) break;
    if (xs.empty() || x != xs.back()) xs.push_back(x);
  }
  std::vector<ThetaSample> out;
  if (xs.empty()) return out;
  const PrimeTable primes(x_max);
  double theta = 0.0;
  std::size_t next = 0;
  for (const std::uint32_t p : primes.primes()) {
    while (next < xs.size() && xs[next] < p) {
      out.push_back({xs[next], theta / static_cast<double>(xs[next])});
      ++next;
    }
    const double th = satake_theta(f.lambda(p), p);
    theta += von_mangoldt_rs(th, m, 1, std::log(static_cast<double>(p)));
  }
  for (; next < xs.size(); ++next) out.push_back({xs[next], theta / static_cast<double>(xs[next])});
  return out;
}

void write_theta_csv(const std::vector<ThetaSample>& samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "x,theta_over_x\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g", s.theta_ratio);
    out << s.x << ',' << buf << '\n';
  }
}

}  // namespace symuniv
