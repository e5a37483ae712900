#include "symuniv/universality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "symuniv/error.hpp"
#include "symuniv/parallel.hpp"

namespace symuniv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTaylorTail = 1e-15;
constexpr std::size_t kMaxOrder = 80;
constexpr double kGolden = 0.6180339887498949;
constexpr std::size_t kRefineCandidates = 16;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}

std::vector<cplx> unit_roots(std::size_t n) {
  std::vector<cplx> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
  return u;
}

// Minimizes h on [a, b] assuming a single dip; returns (argmin, min).
template <class H>
std::pair<double, double> golden_section(H&& h, double a, double b, double tol) {
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = h(x1), f2 = h(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = h(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

std::vector<double> scan_grid(double T, double dt) {
  if (!(T > 0.0)) throw Error(Errc::invalid_argument, "T must be positive");
  if (!(dt > 0.0) || dt > T) throw Error(Errc::invalid_argument, "grid step must lie in (0, T]");
  const auto steps = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

// Indices of the `count` smallest strict-or-flat local minima of err.
std::vector<std::size_t> local_minima(const std::vector<double>& err, std::size_t count) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const bool left = i == 0 || err[i] <= err[i - 1];
    const bool right = i + 1 == err.size() || err[i] <= err[i + 1];
    if (left && right) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return err[a] < err[b]; });
  if (idx.size() > count) idx.resize(count);
  return idx;
}

// Refines grid minima of h on [0, T] by golden section within one grid step.
template <class H>
std::pair<double, double> refine_minima(H&& h, const std::vector<double>& t, const std::vector<double>& err,
                                        double dt, double T) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < err.size(); ++i)
    if (err[i] < err[best]) best = i;
  std::pair<double, double> out{t[best], err[best]};
  for (std::size_t i : local_minima(err, kRefineCandidates)) {
    const double a = std::max(0.0, t[i] - dt), b = std::min(T, t[i] + dt);
    const auto r = golden_section(h, a, b, 1e-9 * std::max(1.0, T));
    if (r.second < out.second) out = r;
  }
  return out;
}

// j! / rho^j times the j-th discrete Fourier coefficient of values on |z - s| = rho
std::vector<cplx> cauchy_jet(std::span<const cplx> vals, std::span<const cplx> u, std::size_t J, double rho) {
  const std::size_t n = vals.size();
  std::vector<cplx> out(J);
  double scale = 1.0;
  for (std::size_t j = 0; j < J; ++j) {
    if (j > 0) scale *= static_cast<double>(j) / rho;
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += vals[k] * std::conj(u[(j * k) % n]);
    out[j] = scale * acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace

DiscRegion default_disc(const LKind& kind) {
  if (kind.variant() == Variant::sym) {
    switch (kind.m()) {
      case 1: return {0.75, 0.1};
      case 2: return {0.85, 0.05};
      case 3: return {0.875, 0.05};
      case 4: return {0.9, 0.05};
    }
  }
  const double sF = kind.sigma_F();
  const double gap = 1.0 - sF;
  const double margin = std::min(0.02, gap / 4.0);
  return {sF + gap / 2.0, std::min(0.05, gap / 2.0 - margin)};
}

void validate_disc(const DiscRegion& K, const LKind& kind) {
  if (!(K.radius > 0.0)) throw Error(Errc::invalid_argument, "disc radius must be positive");
  if (!(K.center - K.radius > kind.sigma_F()) || !(K.center + K.radius < 1.0)) {
    std::ostringstream msg;
    msg << "disc |s - " << K.center << "| <= " << K.radius << " leaves the strip " << kind.sigma_F()
        << " < Re(s) < 1 of " << kind.name();
    throw Error(Errc::out_of_region, msg.str());
  }
}

std::vector<cplx> boundary_points(const DiscRegion& K, std::size_t n_boundary) {
  auto z = unit_roots(n_boundary);
  for (auto& v : z) v = K.center + K.radius * v;
  return z;
}

cplx PolyExpFit::q(cplx s) const {
  const cplx w = (s - origin) / scale;
  cplx acc = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * w + coeffs[j];
  return acc;
}

PolyExpFit poly_exp_target(std::span<const cplx> points, std::span<const cplx> values, int degree) {
  if (degree < 0) throw Error(Errc::invalid_argument, "degree must be non-negative");
  if (points.size() != values.size()) throw Error(Errc::invalid_argument, "points and values differ in length");
  const std::size_t n = points.size(), d = static_cast<std::size_t>(degree) + 1;
  if (n < 2 * d) {
    throw Error(Errc::invalid_argument, "a degree " + std::to_string(degree) + " fit needs at least " +
                                            std::to_string(2 * d) + " samples");
  }
  std::vector<cplx> logs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(values[i]) > 0.0) || !std::isfinite(std::abs(values[i]))) {
      throw Error(Errc::non_vanishing_violation, "target vanishes at sample " + std::to_string(i));
    }
    double arg = std::arg(values[i]);
    if (i > 0) {
      const double step = wrap_angle(arg - logs[i - 1].imag());
      if (std::abs(step) > kPi / 2.0) {
        throw Error(Errc::resolution_error, "argument moves by " + std::to_string(step) + " between samples " +
                                                std::to_string(i - 1) + " and " + std::to_string(i));
      }
      arg = logs[i - 1].imag() + step;
    }
    logs[i] = cplx(std::log(std::abs(values[i])), arg);
  }
  PolyExpFit fit;
  fit.origin = 0.0;
  for (const auto& p : points) fit.origin += p;
  fit.origin /= static_cast<double>(n);
  fit.scale = 0.0;
  for (const auto& p : points) fit.scale = std::max(fit.scale, std::abs(p - fit.origin));
  if (fit.scale == 0.0) fit.scale = 1.0;

  Eigen::MatrixXcd A(n, d);
  Eigen::VectorXcd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx w = (points[i] - fit.origin) / fit.scale;
    cplx pw = 1.0;
    for (std::size_t j = 0; j < d; ++j, pw *= w) A(i, j) = pw;
    b(i) = logs[i];
  }
  const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
  fit.coeffs.assign(c.data(), c.data() + d);
  fit.residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) fit.residual = std::max(fit.residual, std::abs(fit(points[i]) - values[i]));
  return fit;
}

double sup_dist(const ComplexFn& g, const ComplexFn& h, const DiscRegion& K, std::size_t n_boundary) {
  if (n_boundary < kMinBoundary) {
    throw Error(Errc::invalid_argument, "sup_dist needs at least " + std::to_string(kMinBoundary) + " boundary points");
  }
  double out = 0.0;
  for (const cplx z : boundary_points(K, n_boundary)) out = std::max(out, std::abs(g(z) - h(z)));
  return out;
}

double sup_dist(std::span<const cplx> g, std::span<const cplx> h) {
  if (g.size() != h.size()) throw Error(Errc::invalid_argument, "sample sets differ in length");
  double out = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) out = std::max(out, std::abs(g[i] - h[i]));
  return out;
}

ShiftedEvaluator::ShiftedEvaluator(const LFunction& L, double center, double radius, double X, unsigned levels)
    : L_(&L), center_(center), radius_(radius), X_(X) {
  if (!(radius > 0.0)) throw Error(Errc::invalid_argument, "evaluator radius must be positive");
  if (!(X > 0.0)) throw Error(Errc::invalid_argument, "smoothing length must be positive");
  if (!(center - radius > L.kind().sigma_F())) {
    throw Error(Errc::out_of_region, "evaluation disc reaches Re(s) <= " + std::to_string(L.kind().sigma_F()));
  }
  n_terms_ = smoothed_terms(X, levels);
  if (n_terms_ > L.capacity()) {
    throw Error(Errc::insufficient_cache, "smoothing length " + std::to_string(X) + " needs " +
                                              std::to_string(n_terms_) + " coefficients but only " +
                                              std::to_string(L.capacity()) + " are available");
  }
  const auto a = L.summed_coefficients();
  const auto w = smoothing_weights(X, levels, n_terms_);
  aw_.assign(n_terms_ + 1, 0.0);
  lw_.assign(n_terms_ + 1, 0.0);
  double bound = 0.0;
  for (std::size_t n = 1; n <= n_terms_; ++n) {
    const double x = static_cast<double>(n);
    aw_[n] = a[n] * w[n];
    lw_[n] = -radius * std::log(x);
    bound += std::abs(aw_[n]) * std::pow(x, -(center - radius));
  }
  // |sum_{k > K} M_k u^k| <= bound * l^{K+1} / (K+1)! with l = radius log N
  const double l = radius * std::log(static_cast<double>(std::max<std::size_t>(n_terms_, 2)));
  double term = bound;
  order_ = 0;
  while (order_ < kMaxOrder) {
    term *= l / static_cast<double>(order_ + 1);
    if (term < kTaylorTail) break;
    ++order_;
  }
}

void ShiftedEvaluator::moments(double t, std::vector<cplx>& M) const {
  thread_local std::vector<cplx> pw;
  L_->powers(cplx(center_, t), n_terms_, pw);
  const std::size_t K = order_ + 1;
  std::vector<double> re(K, 0.0), im(K, 0.0), inv(K + 1);
  for (std::size_t k = 1; k <= K; ++k) inv[k] = 1.0 / static_cast<double>(k);
  // four independent chains keep the multiply latency hidden
  constexpr std::size_t B = 4;
  std::size_t n = 1;
  for (; n + B - 1 <= n_terms_; n += B) {
    double zr[B], zi[B], l[B];
    for (std::size_t i = 0; i < B; ++i) {
      zr[i] = aw_[n + i] * pw[n + i].real();
      zi[i] = aw_[n + i] * pw[n + i].imag();
      l[i] = lw_[n + i];
    }
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < B; ++i) {
        re[k] += zr[i];
        im[k] += zi[i];
        const double f = l[i] * inv[k + 1];
        zr[i] *= f;
        zi[i] *= f;
      }
    }
  }
  for (; n <= n_terms_; ++n) {
    double zr = aw_[n] * pw[n].real(), zi = aw_[n] * pw[n].imag();
    for (std::size_t k = 0; k < K; ++k) {
      re[k] += zr;
      im[k] += zi;
      const double f = lw_[n] * inv[k + 1];
      zr *= f;
      zi *= f;
    }
  }
  M.resize(K);
  for (std::size_t k = 0; k < K; ++k) M[k] = cplx(re[k], im[k]);
}

void ShiftedEvaluator::values(double t, std::span<const cplx> u, const std::vector<cplx>& M,
                              std::span<cplx> out) const {
  for (std::size_t j = 0; j < u.size(); ++j) {
    cplx acc = 0.0;
    for (std::size_t k = M.size(); k-- > 0;) acc = acc * u[j] + M[k];
    if (L_->zeta_factored()) acc *= zeta(cplx(center_, t) + radius_ * u[j]);
    out[j] = acc;
  }
}

void ShiftedEvaluator::eval(double t, std::span<const cplx> u, std::span<cplx> out) const {
  thread_local std::vector<cplx> M;
  moments(t, M);
  values(t, u, M, out);
}

cplx ShiftedEvaluator::eval(double t, cplx u) const {
  cplx out;
  eval(t, std::span<const cplx>(&u, 1), std::span<cplx>(&out, 1));
  return out;
}

double scan_X(double T, double radius) noexcept { return default_X(T + radius); }

double good_set_fraction(std::span<const double> err, double eps) {
  if (err.empty()) return 0.0;
  const auto good = std::count_if(err.begin(), err.end(), [&](double e) { return e < eps; });
  return static_cast<double>(good) / static_cast<double>(err.size());
}

ShiftSearchResult shift_search(const LFunction& L, const DiscRegion& K, const ComplexFn& phi, double T, double dt,
                               double eps, const ShiftSearchOptions& options) {
  validate_disc(K, L.kind());
  if (options.n_boundary < kMinBoundary) {
    throw Error(Errc::invalid_argument, "shift search needs at least " + std::to_string(kMinBoundary) +
                                            " boundary points");
  }
  if (!(eps >= 0.0)) throw Error(Errc::invalid_argument, "eps must be non-negative");
  const auto grid = scan_grid(T, dt);
  const auto u = unit_roots(options.n_boundary);
  std::vector<cplx> target(u.size());
  double winding = 0.0, target_sup = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    target[j] = phi(K.center + K.radius * u[j]);
    if (!(std::abs(target[j]) > 0.0) || !std::isfinite(std::abs(target[j]))) {
      throw Error(Errc::hypothesis_violation, "target vanishes on the boundary of K");
    }
    target_sup = std::max(target_sup, std::abs(target[j]));
    if (j > 0) winding += wrap_angle(std::arg(target[j]) - std::arg(target[j - 1]));
  }
  winding += wrap_angle(std::arg(target[0]) - std::arg(target.back()));
  if (std::abs(winding) > kPi) {
    throw Error(Errc::hypothesis_violation, "target has zeros inside K (winding number " +
                                                std::to_string(std::lround(winding / (2.0 * kPi))) + ")");
  }

  const double X = options.X > 0.0 ? options.X : scan_X(T, K.radius);
  const ShiftedEvaluator ev(L, K.center, K.radius, X);
  auto error_at = [&](double t) {
    thread_local std::vector<cplx> vals;
    vals.resize(u.size());
    ev.eval(t, u, vals);
    return sup_dist(vals, target);
  };

  ShiftSearchResult r;
  r.t = grid;
  r.err.assign(grid.size(), 0.0);
  parallel_for(grid.size(), options.threads, [&](std::size_t i) { r.err[i] = error_at(grid[i]); });
  const auto it = std::min_element(r.err.begin(), r.err.end());
  r.grid_best_t = grid[static_cast<std::size_t>(it - r.err.begin())];
  r.grid_best_err = *it;
  r.best_t = r.grid_best_t;
  r.best_err = r.grid_best_err;
  if (options.refine) std::tie(r.best_t, r.best_err) = refine_minima(error_at, grid, r.err, dt, T);
  r.eps = eps;
  r.good_set_measure = good_set_fraction(r.err, eps);
  r.T = T;
  r.dt = dt;
  r.n_boundary = options.n_boundary;
  r.X = X;
  r.target_sup = target_sup;
  return r;
}

void write_shift_table_csv(const ShiftSearchResult& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "t,sup_err\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.t.size(); ++i) out << r.t[i] << ',' << r.err[i] << '\n';
  if (!out) throw Error(Errc::io_error, "write to " + path.string() + " failed");
}

double default_contour_radius(const LKind& kind, double sigma) {
  const double left = sigma - kind.sigma_F();
  return (sigma < 1.0 ? std::min(left, 1.0 - sigma) : left) / 2.0;
}

std::vector<cplx> derivative_vector(const ComplexFn& g, cplx s, std::size_t J, double rho) {
  if (J == 0 || J >= kCauchyNodes) throw Error(Errc::invalid_argument, "jet length must lie in [1, 255]");
  if (!(rho > 0.0)) throw Error(Errc::invalid_argument, "contour radius must be positive");
  const auto u = unit_roots(kCauchyNodes);
  std::vector<cplx> vals(kCauchyNodes);
  for (std::size_t k = 0; k < kCauchyNodes; ++k) vals[k] = g(s + rho * u[k]);
  return cauchy_jet(vals, u, J, rho);
}

namespace {

void check_contour(const LKind& kind, double sigma, double rho) {
  if (!(rho > 0.0)) throw Error(Errc::invalid_argument, "contour radius must be positive");
  if (!(sigma - rho > kind.sigma_F())) {
    throw Error(Errc::contour_violation, "contour of radius " + std::to_string(rho) + " about sigma = " +
                                             std::to_string(sigma) + " crosses Re(s) = " +
                                             std::to_string(kind.sigma_F()));
  }
}

std::vector<cplx> jet_from(const ShiftedEvaluator& ev, double t, std::size_t J, double rho) {
  const auto u = unit_roots(kCauchyNodes);
  thread_local std::vector<cplx> vals;
  vals.resize(kCauchyNodes);
  ev.eval(t, u, vals);
  return cauchy_jet(vals, u, J, rho);
}

}  // namespace

std::vector<cplx> derivative_vector(const LFunction& L, double sigma, double t, std::size_t J, double rho,
                                    double X) {
  if (J == 0 || J >= kCauchyNodes) throw Error(Errc::invalid_argument, "jet length must lie in [1, 255]");
  if (rho == 0.0) rho = default_contour_radius(L.kind(), sigma);
  check_contour(L.kind(), sigma, rho);
  const ShiftedEvaluator ev(L, sigma, rho, X > 0.0 ? X : default_X(t));
  return jet_from(ev, t, J, rho);
}

VectorSearchResult vector_target_search(const LFunction& L, double sigma, std::span<const cplx> target, double T,
                                        double dt, const VectorSearchOptions& options) {
  const std::size_t J = target.size();
  if (J == 0 || J > 5) throw Error(Errc::invalid_argument, "target length must lie in [1, 5]");
  if (!(sigma > L.kind().sigma_F()) || !(sigma < 1.0)) {
    throw Error(Errc::out_of_region, "vector search needs " + std::to_string(L.kind().sigma_F()) +
                                         " < sigma < 1");
  }
  const double rho = options.rho > 0.0 ? options.rho : default_contour_radius(L.kind(), sigma);
  check_contour(L.kind(), sigma, rho);
  const auto grid = scan_grid(T, dt);
  const double X = options.X > 0.0 ? options.X : scan_X(T, rho);
  const ShiftedEvaluator ev(L, sigma, rho, X);
  auto distance_at = [&](double t) {
    const auto v = jet_from(ev, t, J, rho);
    double d2 = 0.0;
    for (std::size_t j = 0; j < J; ++j) d2 += std::norm(v[j] - target[j]);
    return std::sqrt(d2);
  };
  std::vector<double> dist(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t i) { dist[i] = distance_at(grid[i]); });
  const auto it = std::min_element(dist.begin(), dist.end());
  VectorSearchResult r{};
  r.grid_best_t = grid[static_cast<std::size_t>(it - dist.begin())];
  r.grid_distance = *it;
  r.best_t = r.grid_best_t;
  r.distance = r.grid_distance;
  if (options.refine) std::tie(r.best_t, r.distance) = refine_minima(distance_at, grid, dist, dt, T);
  r.sigma = sigma;
  r.rho = rho;
  r.T = T;
  r.dt = dt;
  return r;
}

BoundarySamples read_boundary_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::io_error, path.string() + " is empty");
  line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
  if (line != "re,im,phi_re,phi_im") {
    throw Error(Errc::invalid_argument, path.string() + ": expected header re,im,phi_re,phi_im");
  }
  BoundarySamples out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a, b, c, d;
    if (!(fields >> a >> b >> c >> d)) {
      throw Error(Errc::invalid_argument, path.string() + ": malformed row " + std::to_string(row));
    }
    out.points.emplace_back(a, b);
    out.values.emplace_back(c, d);
  }
  return out;
}

}  // namespace symuniv
