#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "symuniv/modform.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/special.hpp"
#include "symuniv/sympower.hpp"

namespace symuniv {

double sigma_strip(const LKind& kind);

enum class GammaKind { R, C };

struct GammaFactor {
  GammaKind kind;
  double shift;
  friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

// L_infty(s) = prod Gamma_kind(s + shift), with repeated entries for multiplicities.
struct GammaFactorSpec {
  std::vector<GammaFactor> factors;
  int degree() const noexcept;
  cplx log_eval(cplx s) const;
};

GammaFactorSpec gamma_spec(const LKind& kind, int k);

enum class EvalMode { smoothed, euler_product };

// Zero for X or n_terms selects the defaults: X = max(50, 3|t|) and the
// shortest truncation that keeps every Gaussian weight above e^{-92}.
struct EvalParams {
  double X = 0.0;
  std::size_t n_terms = 0;
  EvalMode mode = EvalMode::smoothed;
  // Richardson levels over X, 2X, ..., 2^levels X; each cancels one
  // more power X^{-2} of the smoothing bias.
  unsigned levels = 2;
};

struct LValue {
  cplx value;
  double stability;  // |run at X - run at 2X|, or |product to P/2 - product to P|
  double X;
  std::size_t n_terms;
};

inline constexpr double kGaussianCut = 9.591663046625439;  // sqrt(92)
inline constexpr double kDefaultX = 50.0;

double default_X(double t) noexcept;
std::size_t smoothed_terms(double X, unsigned levels) noexcept;

// Weights w(n) = sum_j c_j exp(-(n / (2^j X))^2) of the Richardson-combined
// Gaussian smoother, for n = 0..n_terms.
std::vector<double> smoothing_weights(double X, unsigned levels, std::size_t n_terms);
std::vector<double> richardson_coefficients(unsigned levels);

// sums[j] = sum_{n<=N} a[n] pw[n] exp(-(n / (2^j X))^2) for j < runs (runs <= 5)
void gaussian_sums(std::span<const double> a, std::span<const cplx> pw, std::size_t N, double X, unsigned runs,
                   cplx* sums);

// Coefficient tables and local data for one (form, kind) pair up to a
// capacity. For RankinSelberg kinds the series is evaluated as zeta(s) G(s)
// with G = L / zeta, whose coefficients are lambda_F * mu.
class LFunction {
 public:
  LFunction(const HeckeEigenform& f, const LKind& kind, std::size_t capacity);

  const LKind& kind() const noexcept { return kind_; }
  int weight() const noexcept { return weight_; }
  std::size_t capacity() const noexcept { return lambda_.size() - 1; }
  bool zeta_factored() const noexcept { return kind_.variant() == Variant::rankin_selberg; }

  std::span<const double> coefficients() const noexcept { return lambda_; }
  // Coefficients actually summed in smoothed mode (lambda_F, or lambda_F * mu).
  std::span<const double> summed_coefficients() const noexcept { return zeta_factored() ? g_ : lambda_; }
  const SpfTable& spf() const noexcept { return spf_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::span<const double> log_primes() const noexcept { return log_primes_; }
  std::span<const double> local_poly(std::size_t prime_index) const;

  // n^{-s} for n = 0..n_terms (entry 0 unused), built multiplicatively from
  // prime powers so that only primes need a complex exponential.
  void powers(cplx s, std::size_t n_terms, std::vector<cplx>& out) const;

  LValue eval(cplx s, const EvalParams& params = {}) const;

 private:
  LKind kind_;
  int weight_;
  SpfTable spf_;
  std::vector<double> lambda_;
  std::vector<double> g_;
  std::vector<std::uint32_t> cofactor_;  // n / spf(n)
  std::vector<std::uint32_t> primes_;
  std::vector<double> log_primes_;
  std::vector<double> polys_;  // degree + 1 coefficients per prime
};

LValue eval_L(const LFunction& L, cplx s, const EvalParams& params = {});

// Lambda(s, f) = Gamma_C(s + (k-1)/2) L(s, f) for sym^1 by direct numerical
// integration of the theta series of f against y^{s + (k-1)/2}.
cplx completed_lambda_m1(const HeckeEigenform& f, cplx s);
// Same quantity from the integral over [1, infty) folded by the functional
// equation with root number eps.
cplx completed_lambda_m1_split(const HeckeEigenform& f, cplx s, int eps);

struct FunctionalEquationData {
  int epsilon;
  double residual;        // max |Lambda(s) - eps Lambda(1 - s)| over the test points
  double other_residual;  // the same for -eps
  double split_residual;  // max |direct - split| over the test points
  std::vector<cplx> points;
};

FunctionalEquationData functional_equation_check(const HeckeEigenform& f, const LKind& kind);

struct MeanSquareReport {
  double sigma;
  double T;
  double dt;
  std::size_t points;
  double M_emp;
  double M_ref;
  double ratio;
  double max_stability;
};

MeanSquareReport mean_square(const LFunction& L, double sigma, double T, double dt, unsigned threads = 0,
                             unsigned levels = 2);

struct GrowthReport {
  double sigma;
  std::size_t samples;
  double fitted_exponent;
  double intercept;
  double convexity_exponent;
};

double convexity_exponent(const LKind& kind);
GrowthReport growth_diagnostic(const LFunction& L, double sigma, std::span<const double> t_samples,
                               unsigned threads = 0);

}  // namespace symuniv
