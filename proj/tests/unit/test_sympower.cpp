#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "symuniv/modform.hpp"
#include "symuniv/oracles.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/sympower.hpp"
#include "support.hpp"

using namespace symuniv;
using test::code_of;

namespace {

const HeckeEigenform& delta_form() {
  static const HeckeEigenform f = qexp_newform(12, 100000);
  return f;
}

std::vector<LKind> all_kinds() {
  std::vector<LKind> kinds;
  for (int m = 1; m <= 4; ++m) {
    kinds.push_back(LKind::sym(m));
    kinds.push_back(LKind::rankin_selberg(m));
  }
  return kinds;
}

// Product of two polynomials given by coefficient lists.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

TEST_CASE("kind bookkeeping") {
  CHECK(LKind::sym(1).sigma_F() == doctest::Approx(0.5));
  CHECK(LKind::sym(4).sigma_F() == doctest::Approx(0.8));
  CHECK(LKind::rankin_selberg(4).sigma_F() == doctest::Approx(0.96));
  for (const LKind& k : all_kinds()) {
    CHECK(k.sigma_F() >= 0.5);
    CHECK(k.sigma_F() < 1.0);
    CHECK(root_exponents(k).size() == static_cast<std::size_t>(k.degree()));
    CHECK(LKind::parse(k.name()) == k);
  }
  CHECK(LKind::rankin_selberg(3).degree() == 16);
  CHECK(code_of([] { LKind::sym(5); }) == Errc::unsupported_kind);
  CHECK(code_of([] { LKind::rankin_selberg(0); }) == Errc::unsupported_kind);
  CHECK(code_of([] { LKind::parse("sym9"); }) == Errc::unsupported_kind);
}

TEST_CASE("local factors in closed form") {
  const auto& f = delta_form();
  SUBCASE("Sym(1) is 1 - lambda x + x^2") {
    for (std::uint64_t p : {2, 3, 5, 97}) {
      const LocalFactor lf = local_factor(f, p, LKind::sym(1));
      REQUIRE(lf.poly.size() == 3);
      CHECK(lf.poly[0] == 1.0);
      CHECK(lf.poly[1] == doctest::Approx(-f.lambda(p)).epsilon(1e-13));
      CHECK(lf.poly[2] == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("RankinSelberg(1) at theta = pi/2 is (1 - x^2)^2") {
    const auto poly = local_factor_poly(LKind::rankin_selberg(1), std::numbers::pi / 2);
    const double expect[] = {1, 0, -2, 0, 1};
    REQUIRE(poly.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(poly[i] - expect[i]) < 1e-14);
  }
  SUBCASE("roots lie on the unit circle") {
    for (const LKind& k : all_kinds())
      for (std::uint64_t p : {2, 3, 5, 7, 11, 101}) {
        for (const auto& r : local_roots(k, satake_angle(f, p).theta)) CHECK(std::abs(std::abs(r) - 1.0) < 1e-12);
      }
  }
  SUBCASE("imaginary residue is fatal") {
    const std::complex<double> roots[] = {{0.0, 1.0}};
    CHECK(code_of([&] { expand_real(roots); }) == Errc::numeric_instability);
  }
}

TEST_CASE("prime-power coefficients against the symmetric-polynomial oracle") {
  const auto& f = delta_form();
  // Frozen from an independent numpy enumeration of multisets of roots for tau.
  struct Row {
    LKind kind;
    double at2[3];
    double at3;
  };
  const Row rows[] = {
      {LKind::sym(2), {-0.71875, 1.2353515625, -0.4045104980468754}, -0.641518061271148},
      {LKind::sym(3), {0.9115048351232838, -0.4045104980468755, -0.5832373620004245}, -0.9828320387972899},
      {LKind::sym(4), {0.2353515625000004, 0.45990085601806685, -0.20106993522495076}, 0.05306348420824003},
      {LKind::rankin_selberg(1), {0.28125, 1.5166015625, 1.1120910644531248}, 0.35848193872885215},
      {LKind::rankin_selberg(2), {0.5166015625000004, 2.0426950454711923, 1.397302792407572}, 0.41154542293709206},
  };
  for (const Row& row : rows) {
    CAPTURE(row.kind.name());
    const auto dc = dirichlet_coefficients(f, row.kind, 10);
    CHECK(dc[1] == 1.0);
    CHECK(dc[2] == doctest::Approx(row.at2[0]).epsilon(1e-12));
    CHECK(dc[4] == doctest::Approx(row.at2[1]).epsilon(1e-12));
    CHECK(dc[8] == doctest::Approx(row.at2[2]).epsilon(1e-11));
    CHECK(dc[3] == doctest::Approx(row.at3).epsilon(1e-12));
    CHECK(dc[6] == doctest::Approx(row.at2[0] * row.at3).epsilon(1e-12));
  }
  // The library oracle and the series inversion of the local factor.
  for (const LKind& k : all_kinds()) {
    const double theta = satake_angle(f, 7).theta;
    const auto series = invert_series(local_factor_poly(k, theta), 7);
    for (unsigned nu = 0; nu < 7; ++nu)
      CHECK(std::abs(series[nu] - oracle::prime_power_coefficient(k, theta, nu)) < 1e-10);
  }
}

TEST_CASE("Dirichlet coefficients") {
  const auto& f = delta_form();
  const std::size_t N = 100000;

  SUBCASE("Sym(1) regenerates lambda_f") {
    const auto dc = dirichlet_coefficients(f, LKind::sym(1), 5000);
    for (std::size_t n = 1; n <= 5000; ++n) REQUIRE(std::abs(dc[n] - f.lambda(n)) < 1e-9 * (1 + std::abs(f.lambda(n))));
  }
  SUBCASE("RankinSelberg at primes is the square of lambda_f(p^m)") {
    for (int m = 1; m <= 4; ++m) {
      const auto dc = dirichlet_coefficients(f, LKind::rankin_selberg(m), 1000);
      const PrimeTable primes(1000);
      for (std::uint32_t p : primes.primes()) {
        const double l = lambda_prime_power(f, p, m);
        REQUIRE(std::abs(dc[p] - l * l) < 1e-10);
      }
    }
  }
  SUBCASE("multiplicativity and the divisor bound") {
    std::mt19937_64 rng(7);
    for (const LKind& k : all_kinds()) {
      CAPTURE(k.name());
      const auto dc = dirichlet_coefficients(f, k, N);
      const auto d = divisor_table(k.divisor_order(), N);
      for (std::size_t n = 1; n <= N; ++n) REQUIRE(std::abs(dc[n]) <= d[n] + 1e-9);
      std::uniform_int_distribution<std::size_t> pick(2, 316);
      std::size_t tested = 0;
      while (tested < 10000 / 8) {
        const std::size_t a = pick(rng), b = pick(rng);
        if (std::gcd(a, b) != 1) continue;
        ++tested;
        const double lhs = dc[a * b], rhs = dc[a] * dc[b];
        REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
  SUBCASE("bound beyond the form") {
    CHECK(code_of([&] { dirichlet_coefficients(f, LKind::sym(2), N + 1); }) == Errc::insufficient_cache);
  }
}

TEST_CASE("divisor functions") {
  CHECK(divisor_prime_power(2, 3) == 4);
  CHECK(divisor_prime_power(25, 2) == 325);
  for (unsigned z : {2u, 4u, 9u, 25u}) {
    const auto fast = divisor_table(z, 3000);
    const auto slow = oracle::divisor_convolution(z, 3000);
    for (std::size_t n = 1; n <= 3000; ++n) REQUIRE(fast[n] == slow[n]);
  }
}

TEST_CASE("von Mangoldt closed forms") {
  const auto& f = delta_form();
  const double log2 = std::log(2.0);
  CHECK(von_mangoldt_rs(std::numbers::pi / 2, 1, 1, log2) == doctest::Approx(0.0));
  for (int m = 1; m <= 4; ++m) {
    CHECK(von_mangoldt_rs(0.0, m, 3, log2) == doctest::Approx((m + 1) * (m + 1) * log2).epsilon(1e-14));
    CHECK(von_mangoldt_rs(std::numbers::pi, m, 1, log2) == doctest::Approx((m + 1) * (m + 1) * log2).epsilon(1e-14));
    CHECK(von_mangoldt_rs(std::numbers::pi / 3, m, 3, log2) == doctest::Approx((m + 1) * (m + 1) * log2).epsilon(1e-12));
    CHECK(von_mangoldt_psi(0.0, m, 1, log2) == doctest::Approx(m * (m + 1) * log2).epsilon(1e-14));
  }
  CHECK(std::abs(von_mangoldt_psi(std::numbers::pi / 4, 1, 1, log2)) < 1e-15);
  // lambda_f(2)^2 log 2 = 0.28125 log 2
  CHECK(von_mangoldt_rs(f, 1, 2, 1).value == doctest::Approx(0.19494764453248456).epsilon(1e-13));
  CHECK(von_mangoldt_rs(f, 1, 2, 1).n == 2);
  CHECK(code_of([&] { von_mangoldt_rs(f, 1, 2, 0); }) == Errc::invalid_argument);

  const PrimeTable primes(1000);
  double worst_oracle = 0.0, worst_split = 0.0;
  for (std::uint32_t p : primes.primes()) {
    const double theta = satake_angle(f, p).theta, lp = std::log(double(p));
    for (int m = 1; m <= 4; ++m) {
      const auto series = log_deriv_oracle(local_factor_poly(LKind::rankin_selberg(m), theta), 6);
      for (unsigned nu = 1; nu <= 6; ++nu) {
        const double rs = von_mangoldt_rs(theta, m, nu, lp);
        REQUIRE(rs >= 0.0);
        REQUIRE(rs <= (m + 1) * (m + 1) * lp + 1e-12);
        if (p <= 100) worst_oracle = std::max(worst_oracle, std::abs(series[nu] * lp - rs));
        worst_split = std::max(worst_split, std::abs(rs - ((m + 1) * lp + von_mangoldt_psi(theta, m, nu, lp))));
      }
    }
  }
  CHECK(worst_oracle < 1e-9);
  CHECK(worst_split < 1e-10);
  CHECK(code_of([] { log_deriv_oracle(std::vector<double>{1.0, -1.0}, 13); }) == Errc::invalid_argument);
}

TEST_CASE("zeta factorization of the Rankin-Selberg factor") {
  const auto& f = delta_form();
  const PrimeTable primes(1000);
  for (std::uint32_t p : primes.primes()) {
    const double theta = satake_angle(f, p).theta;
    for (int m = 1; m <= 4; ++m) REQUIRE(zeta_factorization_residual(theta, m) < 1e-12);
  }
  // Direct product check for one prime.
  const double theta = satake_angle(f, 5).theta;
  std::vector<double> prod = psi_local_factor(theta, 2);
  for (int i = 0; i < 3; ++i) prod = poly_mul(prod, {1.0, -1.0});
  const auto rs = local_factor_poly(LKind::rankin_selberg(2), theta);
  REQUIRE(prod.size() == rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(std::abs(prod[i] - rs[i]) < 1e-12);
}

TEST_CASE("Lambda from coefficients is supported on prime powers") {
  const auto& f = delta_form();
  const auto dc = dirichlet_coefficients(f, LKind::rankin_selberg(2), 2000);
  const auto lam = von_mangoldt_from_coefficients(dc);
  const SpfTable spf(2000);
  for (std::uint32_t n = 2; n <= 2000; ++n) {
    if (spf.spf_power(n) != n) {
      REQUIRE(std::abs(lam[n]) < 1e-9);
    } else {
      const std::uint32_t p = spf.spf(n);
      unsigned nu = 0;
      for (std::uint32_t q = n; q > 1; q /= p) ++nu;
      REQUIRE(std::abs(lam[n] - von_mangoldt_rs(f, 2, p, nu).value) < 1e-8);
    }
  }
}
