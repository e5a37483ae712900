#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "symuniv/lvalue.hpp"
#include "symuniv/sympower.hpp"

namespace symuniv {

// Closed disc |s - center| <= radius on the real axis.
struct DiscRegion {
  double center;
  double radius;
};

// Per-kind default disc inside sigma_F < Re(s) < 1.
DiscRegion default_disc(const LKind& kind);
// Throws out_of_region unless center - radius > sigma_F and center + radius < 1.
void validate_disc(const DiscRegion& K, const LKind& kind);
std::vector<cplx> boundary_points(const DiscRegion& K, std::size_t n_boundary);

using ComplexFn = std::function<cplx(cplx)>;

inline constexpr int kDefaultFitDegree = 8;

// q(s) = sum coeffs[j] ((s - origin) / scale)^j with e^q approximating the samples.
struct PolyExpFit {
  cplx origin;
  double scale;
  std::vector<cplx> coeffs;
  double residual;  // max |e^q - phi| over the samples

  cplx q(cplx s) const;
  cplx operator()(cplx s) const { return std::exp(q(s)); }
};

// Least-squares fit of q to a continuous branch of log phi traced along the
// samples in order.
PolyExpFit poly_exp_target(std::span<const cplx> points, std::span<const cplx> values,
                           int degree = kDefaultFitDegree);

inline constexpr std::size_t kMinBoundary = 64;

// max |g - h| over n_boundary equispaced points of the boundary circle.
double sup_dist(const ComplexFn& g, const ComplexFn& h, const DiscRegion& K, std::size_t n_boundary);
// The same over already sampled values.
double sup_dist(std::span<const cplx> g, std::span<const cplx> h);

// L(center + radius u + it) for |u| <= 1 from a Taylor expansion in u of the
// smoothed Dirichlet sum at one fixed X, so that every t of a scan sees the
// same approximant.
class ShiftedEvaluator {
 public:
  ShiftedEvaluator(const LFunction& L, double center, double radius, double X, unsigned levels = 2);

  double X() const noexcept { return X_; }
  std::size_t n_terms() const noexcept { return n_terms_; }
  std::size_t order() const noexcept { return order_; }

  // Taylor coefficients in u of the Dirichlet part at height t.
  void moments(double t, std::vector<cplx>& M) const;
  // Values at center + radius u_j + it.
  void eval(double t, std::span<const cplx> u, std::span<cplx> out) const;
  cplx eval(double t, cplx u) const;

 private:
  const LFunction* L_;
  double center_;
  double radius_;
  double X_;
  std::size_t n_terms_;
  std::size_t order_;
  std::vector<double> aw_;  // summed coefficient times smoothing weight
  std::vector<double> lw_;  // -radius log n

  void values(double t, std::span<const cplx> u, const std::vector<cplx>& M, std::span<cplx> out) const;
};

// Smoothing length shared by every shift of a scan up to height T. Targets
// meant to be recovered exactly must be built with the same X.
double scan_X(double T, double radius) noexcept;

struct ShiftSearchOptions {
  std::size_t n_boundary = kMinBoundary;
  double X = 0.0;  // 0 selects scan_X(T, radius)
  unsigned threads = 0;
  bool refine = true;
};

struct ShiftSearchResult {
  // After golden-section refinement around the best grid minima.
  double best_t;
  double best_err;
  double grid_best_t;
  double grid_best_err;
  double eps;
  double good_set_measure;  // fraction of grid t with sup error < eps
  double T;
  double dt;
  std::size_t n_boundary;
  double X;
  double target_sup;  // max |phi| on the boundary samples
  std::vector<double> t;
  std::vector<double> err;
};

ShiftSearchResult shift_search(const LFunction& L, const DiscRegion& K, const ComplexFn& phi, double T, double dt,
                               double eps, const ShiftSearchOptions& options = {});
double good_set_fraction(std::span<const double> err, double eps);
void write_shift_table_csv(const ShiftSearchResult& r, const std::filesystem::path& path);

inline constexpr std::size_t kCauchyNodes = 256;

// Half the distance from sigma to the nearer edge of sigma_F < Re(s) < 1
// (to sigma_F alone when sigma >= 1).
double default_contour_radius(const LKind& kind, double sigma);

// (g, g', ..., g^{(J-1)}) at s by the trapezoidal Cauchy rule on |z - s| = rho.
std::vector<cplx> derivative_vector(const ComplexFn& g, cplx s, std::size_t J, double rho);
// The same for L at sigma + it with the smoothing length eval_L would use
// there unless X > 0. rho = 0 selects default_contour_radius.
std::vector<cplx> derivative_vector(const LFunction& L, double sigma, double t, std::size_t J, double rho = 0.0,
                                    double X = 0.0);

struct VectorSearchOptions {
  double rho = 0.0;
  double X = 0.0;  // 0 selects scan_X(T, rho)
  unsigned threads = 0;
  bool refine = true;
};

struct VectorSearchResult {
  double best_t;
  double distance;
  double grid_best_t;
  double grid_distance;
  double sigma;
  double rho;
  double T;
  double dt;
};

VectorSearchResult vector_target_search(const LFunction& L, double sigma, std::span<const cplx> target, double T,
                                        double dt, const VectorSearchOptions& options = {});

// Boundary samples from a CSV with header re,im,phi_re,phi_im.
struct BoundarySamples {
  std::vector<cplx> points;
  std::vector<cplx> values;
};
BoundarySamples read_boundary_samples(const std::filesystem::path& path);

}  // namespace symuniv
