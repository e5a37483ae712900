#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "symuniv/lvalue.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/random_model.hpp"
#include "symuniv/stats.hpp"
#include "support.hpp"

using namespace symuniv;
using test::code_of;

namespace {

const HeckeEigenform& delta_form() {
  static const HeckeEigenform f = qexp_newform(12, 100000);
  return f;
}

const RandomModel& sym2_model() {
  static const RandomModel model(delta_form(), LKind::sym(2), 10000);
  return model;
}

std::vector<double> abs_of(const std::vector<cplx>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
  return out;
}

}  // namespace

TEST_CASE("phase assignments") {
  const auto a = sample_phases(42, 100000), b = sample_phases(42, 100000);
  CHECK(a.angles == b.angles);
  CHECK(a.primes.size() == 9592);
  CHECK(sample_phases(43, 1000).angles != sample_phases(42, 1000).angles);
  // Prefix property: the angle of prime index i does not depend on P_max.
  const auto small = sample_phases(42, 1000);
  for (std::size_t i = 0; i < small.angles.size(); ++i) REQUIRE(small.angles[i] == a.angles[i]);
  cplx mean = 0.0;
  for (std::size_t i = 0; i < a.primes.size(); ++i) {
    REQUIRE(std::abs(std::abs(a.omega_p(i)) - 1.0) < 1e-15);
    REQUIRE(a.angles[i] >= 0.0);
    REQUIRE(a.angles[i] < 2 * std::numbers::pi);
    mean += a.omega_p(i);
  }
  mean /= static_cast<double>(a.primes.size());
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(9592.0));
  CHECK(std::abs(a.omega(12) - a.omega_p(0) * a.omega_p(0) * a.omega_p(1)) < 1e-15);
  CHECK(a.omega(1) == cplx(1.0));
  CHECK(code_of([&] { small.omega(1009); }) == Errc::invalid_argument);
  CHECK(code_of([] { sample_phases(1, 1); }) == Errc::invalid_argument);
}

TEST_CASE("model samples") {
  const RandomModel& model = sym2_model();
  SUBCASE("trivial phases give the Euler product") {
    PhaseAssignment one = sample_phases(0, 10000);
    std::fill(one.angles.begin(), one.angles.end(), 0.0);
    const LFunction L(delta_form(), LKind::sym(2), 10000);
    EvalParams euler;
    euler.mode = EvalMode::euler_product;
    for (const cplx s : {cplx(2.0, 0.0), cplx(1.5, 4.0)}) {
      const ModelSample x = random_L(model, s, one);
      CHECK(std::abs(x.value - eval_L(L, s, euler).value) < 1e-12);
    }
  }
  SUBCASE("logarithm and non-vanishing") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto omega = sample_phases(seed, 10000);
      for (const cplx s : {cplx(0.8, 0.0), cplx(0.75, 2.0), cplx(0.6, -1.0)}) {
        const ModelSample x = random_L(model, s, omega);
        REQUIRE(std::abs(x.value) > 0.0);
        REQUIRE(std::abs(std::exp(x.log_value) - x.value) <= 1e-8 * std::abs(x.value));
      }
    }
  }
  SUBCASE("regions") {
    const auto omega = sample_phases(1, 10000);
    CHECK(code_of([&] { random_L(model, 0.5, omega); }) == Errc::out_of_region);
    CHECK(code_of([&] { random_L(model, 0.8, sample_phases(1, 100)); }) == Errc::invalid_argument);
    CHECK(code_of([&] { model.second_moment(0.5); }) == Errc::out_of_region);
    CHECK(code_of([] { RandomModel(delta_form(), LKind::sym(1), 200000); }) == Errc::insufficient_cache);
  }
}

TEST_CASE("population moments against exact expectations") {
  const RandomModel& model = sym2_model();
  const auto v = model_values(model, 0.8, 10000, 7);
  const PopulationMoments m = population_moments(v);
  CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.se_mean);
  const double second = model.second_moment(0.8);
  CHECK(std::abs(m.mean_abs2 - second) <= 3.0 * m.se_abs2);
  // At sigma = 2 the truncated Dirichlet sum and the Euler product agree.
  const auto dc = dirichlet_coefficients(delta_form(), LKind::sym(2), 10000);
  CHECK(model.second_moment(2.0) == doctest::Approx(dirichlet_second_moment(dc.table(), 2.0)).epsilon(1e-9));
}

TEST_CASE("sampling is schedule independent") {
  const RandomModel& model = sym2_model();
  const auto one = model_values(model, cplx(0.8, 1.0), 64, 99, 1);
  const auto four = model_values(model, cplx(0.8, 1.0), 64, 99, 4);
  CHECK(one == four);
}

TEST_CASE("KS null distribution between independent batches") {
  const RandomModel model(delta_form(), LKind::sym(2), 1000);
  const std::size_t n = 500;
  int accepted = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto a = abs_of(model_values(model, 0.8, n, 1000 + 2 * r));
    const auto b = abs_of(model_values(model, 0.8, n, 1001 + 2 * r));
    if (ks_two_sample(a, b) < ks_critical(0.01, n, n)) ++accepted;
    CHECK(ks_two_sample(a, a) == 0.0);
  }
  CHECK(accepted >= 19);
}

TEST_CASE("distribution comparison contract") {
  const LFunction L(delta_form(), LKind::sym(2), 25000);
  const RandomModel model(delta_form(), LKind::sym(2), 2000);
  const auto r = distribution_compare(L, model, 0.8, 200.0, 100, 100, 5);
  CHECK(r.shift_values.size() == 100);
  CHECK(r.model_values.size() == 100);
  for (double t : r.shift_t) CHECK((t >= 0.0 && t <= 200.0));
  CHECK(r.ks_critical_01 == doctest::Approx(ks_critical(0.01, 100, 100)));
  CHECK(r.ks_abs >= 0.0);
  CHECK(r.ks_abs <= 1.0);
  const auto again = distribution_compare(L, model, 0.8, 200.0, 100, 100, 5);
  CHECK(again.shift_values == r.shift_values);
  CHECK(again.ks_re == r.ks_re);
  CHECK(code_of([&] { distribution_compare(L, model, 0.8, 200.0, 99, 100, 5); }) == Errc::invalid_argument);
  CHECK(code_of([&] { distribution_compare(L, model, 0.6, 200.0, 100, 100, 5); }) == Errc::out_of_region);
  const RandomModel other(delta_form(), LKind::sym(1), 2000);
  CHECK(code_of([&] { distribution_compare(L, other, 0.8, 200.0, 100, 100, 5); }) == Errc::invalid_argument);
}

TEST_CASE("support scan") {
  const RandomModel& model = sym2_model();
  std::vector<cplx> pts;
  for (double s : {0.75, 0.85, 0.95})
    for (double t : {0.0, 1.0, 2.0}) pts.push_back({s, t});
  const SupportReport rep = support_scan(model, pts, 300, 17);
  CHECK(rep.min_abs > 0.0);
  CHECK(rep.samples == 300);
  CHECK(rep.points == 9);
  // The minimum is reproduced by model_values at the reported sample and point.
  const auto v = model_values(model, rep.argmin_s, rep.argmin_sample + 1, 17);
  CHECK(std::abs(v.back()) == doctest::Approx(rep.min_abs).epsilon(1e-12));
  CHECK(code_of([&] { support_scan(model, {}, 10, 1); }) == Errc::invalid_argument);
}
