#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "symuniv/error.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/oracles.hpp"
#include "support.hpp"

using namespace symuniv;
using test::code_of;

namespace {

const long kTau[] = {0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
                     -577738, 401856, 1217160, 987136, -6905934, 2727432, 10661420, -7109760, -4219488,
                     -12830688, 18643272, 21288960, -25499225, 13865712, -73279080, 24647168, 128406630,
                     -29211840};

}  // namespace

TEST_CASE("delta expansion matches known tau values") {
  const QSeries d = qexp_delta(30);
  CHECK(d[0] == 0);
  for (int n = 1; n <= 30; ++n) CHECK(d[n] == kTau[n]);
  CHECK(qexp_delta(1)[1] == 1);
  CHECK(qexp_delta(2)[2] == -24);
  CHECK(qexp_delta(3)[3] == 252);
  CHECK(code_of([] { qexp_delta(0); }) == Errc::invalid_argument);
}

TEST_CASE("theta route and direct product agree") {
  const std::size_t N = 2000;
  const QSeries d = qexp_delta(N);
  const auto direct = oracle::delta_direct_product(N);
  for (std::size_t n = 1; n <= N; ++n) REQUIRE(d[n] == direct[n]);
}

TEST_CASE("NTT products agree with schoolbook products") {
  const std::size_t N = 300;
  const QSeries e4 = eisenstein_series(4, N);
  const QSeries e6 = eisenstein_series(6, N);
  const QSeries fast = e4 * e6;
  QSeries slow(N);
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; i + j <= N; ++j) slow[i + j] += e4[i] * e6[j];
  CHECK(fast == slow);
  // E4^3 - E6^2 = 1728 Delta
  QSeries lhs = e4.pow(3) - e6.pow(2);
  CHECK(lhs == qexp_delta(N) * mpz_class(1728));
}

TEST_CASE("newforms of every supported weight") {
  struct Row {
    int k;
    long c[7];
  };
  const Row rows[] = {
      {12, {1, -24, 252, -1472, 4830, -6048, -16744}},
      {16, {1, 216, -3348, 13888, 52110, -723168, 2822456}},
      {18, {1, -528, -4284, 147712, -1025850, 2261952, 3225992}},
      {20, {1, 456, 50652, -316352, -2377410, 23097312, -16917544}},
      {22, {1, -288, -128844, -2014208, 21640950, 37107072, -768078808}},
      {26, {1, -48, -195804, -33552128, -741989850, 9398592, 39080597192}},
  };
  for (const auto& row : rows) {
    const HeckeEigenform f = qexp_newform(row.k, 400);
    for (int n = 1; n <= 7; ++n) CHECK(f.exact(n) == row.c[n - 1]);
    CHECK(f.lambda(1) == 1.0);
    CHECK_FALSE(check_hecke_relation(f, 300).has_value());
  }
  CHECK(qexp_newform(16, 2).exact(2) == 216);
  for (int k : {2, 4, 6, 8, 10, 14, 24, 28, 30}) {
    CHECK(code_of([k] { qexp_newform(k, 10); }) == Errc::unsupported_weight);
  }
}

TEST_CASE("normalized eigenvalues and Satake angles") {
  const HeckeEigenform f = qexp_newform(12, 100);
  CHECK(f.lambda(2) == doctest::Approx(-0.5303300858899106).epsilon(1e-15));
  const SatakeAngle a = satake_angle(f, 2);
  CHECK(a.theta == doctest::Approx(1.8391714154092522).epsilon(1e-14));
  CHECK(2 * std::cos(a.theta) == doctest::Approx(f.lambda(2)).epsilon(1e-12));
  CHECK(satake_theta(0.0, 5) == doctest::Approx(std::numbers::pi / 2));
  CHECK(satake_theta(2.0, 5) == 0.0);
  CHECK(satake_theta(2.0 + 5e-13, 5) == 0.0);
  CHECK(code_of([] { satake_theta(2.0 + 1e-9, 5); }) == Errc::deligne_violation);
  CHECK(code_of([&] { satake_angle(f, 4); }) == Errc::invalid_argument);
  CHECK(code_of([&] { satake_angle(f, 101); }) == Errc::insufficient_cache);
}

TEST_CASE("Chebyshev recurrence for prime-power eigenvalues") {
  const HeckeEigenform f = qexp_newform(12, 1000);
  CHECK(lambda_prime_power(f, 2, 0) == 1.0);
  CHECK(lambda_prime_power(std::numbers::pi / 2, 2) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(lambda_prime_power(f, 2, 2) == doctest::Approx(-0.71875).epsilon(1e-13));
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 31}) {
    std::uint64_t q = p;
    for (unsigned nu = 1; q <= 1000; ++nu, q *= p) {
      const double exact = f.lambda(q);
      CHECK(std::abs(lambda_prime_power(f, p, nu) - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
    }
  }
  CHECK(chebyshev_u(3, 1.0) == 4.0);
  CHECK(chebyshev_u(4, -1.0) == 5.0);
}

TEST_CASE("Hecke check locates a corrupted coefficient") {
  const HeckeEigenform f = qexp_newform(12, 300);
  for (std::size_t bad : {7u, 12u, 150u}) {
    QSeries s = f.series();
    s[bad] += 1;
    const auto v = check_hecke_relation(HeckeEigenform(12, s), 300);
    REQUIRE(v.has_value());
    CHECK(v->suspect == bad);
  }
}

TEST_CASE("Deligne scan") {
  const HeckeEigenform f = qexp_newform(12, 20000);
  const DeligneReport r = deligne_scan(f, 20000);
  CHECK(r.primes_checked == 2262);
  CHECK(r.max_abs_lambda <= 2.0 + kDeligneSlack);
  CHECK(r.max_abs_lambda > 1.9);
}

TEST_CASE("coefficient cache round trip and corruption detection") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "symuniv_cache_test";
  fs::remove_all(dir);
  const HeckeEigenform f = load_or_build(16, 200, dir);
  const fs::path file = default_cache_file(dir, 16, 200);
  REQUIRE(fs::exists(file));
  {
    std::ifstream in(file);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::getline(in, row);
    CHECK(header == "n,c_exact,lambda_norm");
    CHECK(row.rfind("2,216,", 0) == 0);
  }
  const HeckeEigenform g = read_coefficient_cache(file);
  CHECK(g.series() == f.series());
  CHECK(g.lambda(97) == f.lambda(97));
  const HeckeEigenform h = load_or_build(16, 100, dir);
  CHECK(h.bound() == 100);
  CHECK(h.exact(100) == f.exact(100));

  {
    std::fstream io(file, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(22 + 6 + 2);  // first digit of c(2)
    io.put('9');
  }
  CHECK(code_of([&] { read_coefficient_cache(file); }) == Errc::cache_corrupt);
  const HeckeEigenform bad = read_coefficient_cache(file, ChecksumPolicy::skip);
  const auto v = check_hecke_relation(bad, 200);
  REQUIRE(v.has_value());
  CHECK(v->suspect == 2);
  fs::remove_all(dir);
}
