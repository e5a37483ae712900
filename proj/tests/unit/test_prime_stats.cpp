#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "symuniv/modform.hpp"
#include "symuniv/prime_stats.hpp"
#include "symuniv/primes.hpp"
#include "support.hpp"

using namespace symuniv;
using test::code_of;

namespace {

const HeckeEigenform& delta_form() {
  static const HeckeEigenform f = qexp_newform(12, 200000);
  return f;
}

}  // namespace

TEST_CASE("prime tables") {
  const PrimeTable t(1000000);
  CHECK(t.size() == 78498);
  CHECK(t.count_upto(100) == 25);
  CHECK(t.count_upto(1) == 0);
  CHECK(t.is_prime(999983));
  CHECK_FALSE(t.is_prime(999981));
  CHECK(code_of([&] { t.count_upto(1000001); }) == Errc::insufficient_cache);

  const SpfTable spf(10000);
  CHECK(spf.spf(1) == 1);
  CHECK(spf.spf(9991) == 97);
  CHECK(spf.spf_power(8 * 9) == 8);
  for (std::uint32_t n = 2; n <= 10000; ++n) REQUIRE(spf.is_prime(n) == t.is_prime(n));
  CHECK(is_prime_u64(18446744073709551557ull));
  CHECK_FALSE(is_prime_u64(3215031751ull));
}

TEST_CASE("prime sums at x = 10 by direct enumeration") {
  // Frozen from an independent enumeration over n in {2,3,4,5,7,8,9} with sin ratios.
  const double psi[] = {8.08254082618378, 9.290745491434919, 7.672709763680563, 1.9299909776870823};
  const double theta[] = {1.6336379444352054, 2.6823489608394553, 4.371589315970335, 0.7974593401528853};
  const double pi_w[] = {1.2592959785127136, 1.9373925742582336, 3.3934736545089987, 0.4539697373640271};
  for (int m = 1; m <= 4; ++m) {
    const PntReport r = prime_sums(delta_form(), m, 10);
    CHECK(r.psi == doctest::Approx(psi[m - 1]).epsilon(1e-12));
    CHECK(r.theta == doctest::Approx(theta[m - 1]).epsilon(1e-12));
    CHECK(r.pi_w == doctest::Approx(pi_w[m - 1]).epsilon(1e-12));
    CHECK(r.pi_x == 4);
  }
}

TEST_CASE("prime sums: monotonicity, R-bound and asymptotics") {
  const auto& f = delta_form();
  const double tol[] = {0.15, 0.08};
  const std::uint64_t xs[] = {10000, 100000};
  for (int m = 1; m <= 4; ++m) {
    double last_psi = 0.0;
    for (std::uint64_t x : {2ull, 3ull, 50ull, 1000ull, 10000ull, 100000ull}) {
      const PntReport r = prime_sums(f, m, x);
      CHECK(r.psi >= last_psi);
      last_psi = r.psi;
      CHECK(r.psi >= r.theta);
      CHECK(r.theta >= 0.0);
      CHECK(r.psi - r.theta <= r.r_bound + 1e-9);
      CHECK(r.psi_ratio == doctest::Approx(r.psi / double(x)));
    }
    for (int i = 0; i < 2; ++i) {
      const PntReport r = prime_sums(f, m, xs[i]);
      CAPTURE(m);
      CAPTURE(xs[i]);
      CHECK(std::abs(r.theta_ratio - 1.0) <= tol[i]);
    }
  }
  CHECK(code_of([&] { prime_sums(f, 1, 1); }) == Errc::invalid_argument);
  CHECK(code_of([&] { prime_sums(f, 5, 100); }) == Errc::unsupported_kind);
  CHECK(code_of([&] { prime_sums(f, 1, 300000); }) == Errc::insufficient_cache);
}

TEST_CASE("density of primes with large eigenvalues") {
  const auto& f = delta_form();
  const PiDeltaReport zero = pi_delta(f, 1, 0.0, 100000);
  CHECK(zero.count == zero.pi_x);
  CHECK(zero.pi_x == 9592);

  const PiDeltaReport half = pi_delta(f, 1, 0.5, 200000, 100000, 200000);
  CHECK(half.lower_bound == doctest::Approx(0.75 / 3.75));
  CHECK(half.ratio >= half.lower_bound - 0.05);
  CHECK(half.window_primes == PrimeTable(200000).count_upto(200000) - PrimeTable(100000).count_upto(100000));

  // Default window is (x/2, x].
  const PiDeltaReport dflt = pi_delta(f, 2, 0.3, 100000);
  CHECK(dflt.a == 50000);
  CHECK(dflt.b == 100000);

  for (int m = 1; m <= 4; ++m) {
    std::size_t last = pi_delta(f, m, 0.0, 50000).count;
    for (double d : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      const std::size_t c = pi_delta(f, m, d, 50000).count;
      CHECK(c <= last);
      last = c;
    }
  }
  CHECK(pi_delta(f, 1, 0.5, 1, 0, 2).count == 0);
  CHECK(code_of([&] { pi_delta(f, 1, 1.0, 1000); }) == Errc::invalid_argument);
  CHECK(code_of([&] { pi_delta(f, 1, -0.1, 1000); }) == Errc::invalid_argument);
}

TEST_CASE("theta samples are geometric and written as CSV") {
  const auto samples = theta_samples(delta_form(), 1, 100000, 4);
  REQUIRE(samples.size() >= 16);
  for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].x > samples[i - 1].x);
  CHECK(samples.back().x == 100000);
  const auto path = std::filesystem::temp_directory_path() / "symuniv_theta_test.csv";
  write_theta_csv(samples, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,theta_over_x");
  std::filesystem::remove(path);
}
