#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "symuniv/lvalue.hpp"
#include "symuniv/modform.hpp"
#include "symuniv/sympower.hpp"

namespace symuniv {

// Uniform angle in [0, 2 pi) for prime number `index` under `seed`. A pure
// function of its arguments, so any evaluation order gives the same phases.
double phase_angle(std::uint64_t seed, std::uint64_t index);

// One point omega of the infinite torus, restricted to primes p <= p_max.
struct PhaseAssignment {
  std::uint64_t seed;
  std::uint64_t p_max;
  std::vector<std::uint32_t> primes;
  std::vector<double> angles;  // omega_p = e^{i angle}, aligned with primes

  std::complex<double> omega_p(std::size_t prime_index) const { return std::polar(1.0, angles[prime_index]); }
  // omega_n = prod omega_p^nu over n = prod p^nu; n must be p_max-smooth.
  std::complex<double> omega(std::uint64_t n) const;
};

PhaseAssignment sample_phases(std::uint64_t seed, std::uint64_t p_max);

struct ModelSample {
  cplx value;
  cplx log_value;  // sum of principal logs of the local factors
  std::uint64_t p_max;
};

inline constexpr double kLocalTail = 1e-14;

// Local data of L(s, F; omega) for primes up to p_max.
class RandomModel {
 public:
  RandomModel(const HeckeEigenform& f, const LKind& kind, std::uint64_t p_max);

  const LKind& kind() const noexcept { return kind_; }
  std::uint64_t p_max() const noexcept { return p_max_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  // Per-s data shared by every sample at that s.
  struct Plan {
    cplx s;
    std::vector<cplx> p_minus_s;
    std::vector<unsigned> nu_max;
    // Longer local series for small primes when Re(s) is below the
    // precomputed range; empty entries fall back to the model's own.
    std::vector<std::vector<double>> extended;
  };
  Plan plan(cplx s) const;

  // Product of the local series truncated at nu_max(p), and the log series.
  ModelSample sample(const Plan& plan, std::span<const double> angles) const;
  cplx value(const Plan& plan, std::span<const double> angles) const;
  // Same with the unit phases omega_p already formed.
  cplx value(const Plan& plan, std::span<const cplx> omega) const;

  // E|L(s, F; omega)|^2 = prod_p sum_nu |lambda_F(p^nu)|^2 p^{-2 nu sigma}.
  double second_moment(double sigma) const;

 private:
  LKind kind_;
  std::uint64_t p_max_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> log_primes_;
  std::vector<double> thetas_;
  std::vector<int> exponents_;
  std::vector<std::vector<double>> series_;  // lambda_F(p^nu), nu = 0.. per prime
};

ModelSample random_L(const RandomModel& model, cplx s, const PhaseAssignment& omega);

struct PopulationMoments {
  cplx mean;
  double mean_abs2;  // mean |L|^2
  double se_mean;    // standard error of the mean, |.| of the complex deviation
  double se_abs2;
};

struct DistributionReport {
  cplx s;
  double T;
  std::size_t n_shift;
  std::size_t n_model;
  std::uint64_t p_max;
  std::uint64_t seed;
  double ks_re;
  double ks_im;
  double ks_abs;
  double ks_critical_01;
  PopulationMoments moments_shift;
  PopulationMoments moments_model;
  double max_shift_stability;
  std::vector<cplx> shift_values;
  std::vector<double> shift_t;
  std::vector<cplx> model_values;
};

// sum_{1 <= n < lambda.size()} lambda[n]^2 n^{-2 sigma}
double dirichlet_second_moment(std::span<const double> lambda, double sigma);

PopulationMoments population_moments(std::span<const cplx> values);

// Values of n model samples; sample j uses phases under a seed hashed from (seed, j).
std::vector<cplx> model_values(const RandomModel& model, cplx s, std::size_t n, std::uint64_t seed,
                               unsigned threads = 0);

// Shift population L(s + it), t uniform on [0, T] from the counter generator
// under `seed`, against n_model samples of the random model.
DistributionReport distribution_compare(const LFunction& L, const RandomModel& model, cplx s, double T,
                                        std::size_t n_shift, std::size_t n_model, std::uint64_t seed,
                                        unsigned threads = 0);

// min |L(s, F; omega)| over n samples (the same samples as model_values) and
// every point of s_points, each sample's phases shared across the points.
struct SupportReport {
  double min_abs;
  std::size_t argmin_sample;
  cplx argmin_s;
  std::size_t samples;
  std::size_t points;
  std::uint64_t p_max;
  std::uint64_t seed;
};

SupportReport support_scan(const RandomModel& model, std::span<const cplx> s_points, std::size_t n,
                           std::uint64_t seed, unsigned threads = 0);

void write_samples_csv(const DistributionReport& report, const std::filesystem::path& path);

}  // namespace symuniv
