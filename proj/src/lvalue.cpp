#include "symuniv/lvalue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "symuniv/error.hpp"
#include "symuniv/parallel.hpp"

namespace symuniv {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::size_t kBlock = 512;
constexpr unsigned kMaxRuns = 5;

// Gaussian weights exp(-(n / X_j)^2) advance by a two-term recurrence inside
// blocks of kBlock terms and are reseeded exactly at every block start, which
// keeps the rounding drift at a few ulps.
struct GaussianBank {
  unsigned runs;
  double a[kMaxRuns], q[kMaxRuns], w[kMaxRuns], r[kMaxRuns];

  GaussianBank(double X, unsigned count) : runs(count) {
    for (unsigned j = 0; j < runs; ++j) {
      const double Xj = std::ldexp(X, static_cast<int>(j));
      a[j] = 1.0 / (Xj * Xj);
      q[j] = std::exp(-2.0 * a[j]);
    }
  }
  void seed(std::size_t n) {
    const double x = static_cast<double>(n);
    for (unsigned j = 0; j < runs; ++j) {
      w[j] = std::exp(-x * x * a[j]);
      r[j] = std::exp(-(2.0 * x + 1.0) * a[j]);
    }
  }
};

// sums[j] = sum_{n=1}^N a[n] pw[n] exp(-(n / (2^j X))^2), j < R
template <unsigned R>
void gaussian_sums_fixed(const double* a, const cplx* pw, std::size_t N, GaussianBank& g, cplx* sums) {
  double re[R] = {}, im[R] = {};
  for (std::size_t b = 1; b <= N; b += kBlock) {
    g.seed(b);
    double w[R], r[R], q[R];
    for (unsigned j = 0; j < R; ++j) {
      w[j] = g.w[j];
      r[j] = g.r[j];
      q[j] = g.q[j];
    }
    const std::size_t e = std::min(N + 1, b + kBlock);
    for (std::size_t n = b; n < e; ++n) {
      const double zr = a[n] * pw[n].real(), zi = a[n] * pw[n].imag();
      for (unsigned j = 0; j < R; ++j) {
        re[j] += w[j] * zr;
        im[j] += w[j] * zi;
        w[j] *= r[j];
        r[j] *= q[j];
      }
    }
  }
  for (unsigned j = 0; j < R; ++j) sums[j] = cplx(re[j], im[j]);
}

// sum_{n=1}^N d[n] (sum_j c[j] exp(-(n / (2^j X))^2))^2
template <unsigned R>
double weighted_square_fixed(const double* d, std::size_t N, GaussianBank& g, const double* c) {
  double total = 0.0;
  for (std::size_t b = 1; b <= N; b += kBlock) {
    g.seed(b);
    double w[R], r[R], q[R];
    for (unsigned j = 0; j < R; ++j) {
      w[j] = g.w[j];
      r[j] = g.r[j];
      q[j] = g.q[j];
    }
    const std::size_t e = std::min(N + 1, b + kBlock);
    for (std::size_t n = b; n < e; ++n) {
      double W = 0.0;
      for (unsigned j = 0; j < R; ++j) {
        W += c[j] * w[j];
        w[j] *= r[j];
        r[j] *= q[j];
      }
      total += d[n] * W * W;
    }
  }
  return total;
}

}  // namespace

void gaussian_sums(std::span<const double> a, std::span<const cplx> pw, std::size_t N, double X, unsigned runs,
                   cplx* sums) {
  GaussianBank g(X, runs);
  switch (runs) {
    case 1: return gaussian_sums_fixed<1>(a.data(), pw.data(), N, g, sums);
    case 2: return gaussian_sums_fixed<2>(a.data(), pw.data(), N, g, sums);
    case 3: return gaussian_sums_fixed<3>(a.data(), pw.data(), N, g, sums);
    case 4: return gaussian_sums_fixed<4>(a.data(), pw.data(), N, g, sums);
    case 5: return gaussian_sums_fixed<5>(a.data(), pw.data(), N, g, sums);
  }
  throw Error(Errc::invalid_argument, "unsupported number of smoothing runs");
}

namespace {

double weighted_square(std::span<const double> d, std::size_t N, double X, unsigned levels) {
  const auto c = richardson_coefficients(levels);
  GaussianBank g(X, levels + 1);
  switch (levels + 1) {
    case 1: return weighted_square_fixed<1>(d.data(), N, g, c.data());
    case 2: return weighted_square_fixed<2>(d.data(), N, g, c.data());
    case 3: return weighted_square_fixed<3>(d.data(), N, g, c.data());
    case 4: return weighted_square_fixed<4>(d.data(), N, g, c.data());
    case 5: return weighted_square_fixed<5>(d.data(), N, g, c.data());
  }
  throw Error(Errc::invalid_argument, "unsupported number of smoothing runs");
}

constexpr unsigned kMaxLevels = 4;

}  // namespace

double sigma_strip(const LKind& kind) { return kind.sigma_F(); }

int GammaFactorSpec::degree() const noexcept {
  int d = 0;
  for (const auto& g : factors) d += g.kind == GammaKind::C ? 2 : 1;
  return d;
}

cplx GammaFactorSpec::log_eval(cplx s) const {
  cplx total = 0.0;
  for (const auto& g : factors) {
    total += g.kind == GammaKind::C ? log_gamma_c(s + g.shift) : log_gamma_r(s + g.shift);
  }
  return total;
}

GammaFactorSpec gamma_spec(const LKind& kind, int k) {
  if (!is_supported_weight(k)) throw Error(Errc::unsupported_weight, "unsupported weight " + std::to_string(k));
  const int m = kind.m();
  const double w = k - 1.0;
  GammaFactorSpec spec;
  auto add = [&](GammaKind g, double shift, int times) {
    for (int i = 0; i < times; ++i) spec.factors.push_back({g, shift});
  };
  if (kind.variant() == Variant::sym) {
    if (m % 2 == 1) {
      const int n = (m - 1) / 2;
      for (int nu = 0; nu <= n; ++nu) add(GammaKind::C, (nu + 0.5) * w, 1);
    } else {
      const int n = m / 2;
      add(GammaKind::R, n % 2 == 1 ? 1.0 : 0.0, 1);
      for (int nu = 1; nu <= n; ++nu) add(GammaKind::C, nu * w, 1);
    }
  } else {
    if (m % 2 == 1) {
      add(GammaKind::C, 0.0, (m - 1) / 2 + 1);
    } else {
      add(GammaKind::R, 0.0, 1);
      add(GammaKind::C, 0.0, m / 2);
    }
    for (int nu = 1; nu <= m; ++nu) add(GammaKind::C, nu * w, m - nu + 1);
  }
  return spec;
}

double default_X(double t) noexcept { return std::max(kDefaultX, 3.0 * std::abs(t)); }

std::size_t smoothed_terms(double X, unsigned levels) noexcept {
  return static_cast<std::size_t>(std::ceil(std::ldexp(X, static_cast<int>(std::max(levels, 1u))) * kGaussianCut));
}

std::vector<double> richardson_coefficients(unsigned levels) {
  if (levels > kMaxLevels) throw Error(Errc::invalid_argument, "at most 4 Richardson levels are supported");
  // Column k of the tableau: T_{j,k} = (4^k T_{j+1,k-1} - T_{j,k-1}) / (4^k - 1)
  std::vector<std::vector<double>> rows(levels + 1);
  for (unsigned j = 0; j <= levels; ++j) {
    rows[j].assign(levels + 1, 0.0);
    rows[j][j] = 1.0;
  }
  for (unsigned k = 1; k <= levels; ++k) {
    const double f = std::pow(4.0, k);
    for (unsigned j = 0; j + k <= levels; ++j) {
      for (unsigned i = 0; i <= levels; ++i) rows[j][i] = (f * rows[j + 1][i] - rows[j][i]) / (f - 1.0);
    }
  }
  return rows[0];
}

std::vector<double> smoothing_weights(double X, unsigned levels, std::size_t n_terms) {
  const auto c = richardson_coefficients(levels);
  std::vector<double> w(n_terms + 1, 0.0);
  for (unsigned j = 0; j <= levels; ++j) {
    const double Xj = std::ldexp(X, static_cast<int>(j));
    for (std::size_t n = 0; n <= n_terms; ++n) {
      const double x = static_cast<double>(n) / Xj;
      w[n] += c[j] * std::exp(-x * x);
    }
  }
  return w;
}

LFunction::LFunction(const HeckeEigenform& f, const LKind& kind, std::size_t capacity)
    : kind_(kind), weight_(f.weight()), spf_(static_cast<std::uint32_t>(std::max<std::size_t>(capacity, 2))) {
  const DirichletCoefficients dc = dirichlet_coefficients(f, kind, capacity);
  lambda_.assign(dc.table().begin(), dc.table().end());
  cofactor_.assign(capacity + 1, 1);
  for (std::uint32_t n = 2; n <= capacity; ++n) cofactor_[n] = n / spf_.spf(n);
  for (std::uint32_t p = 2; p <= capacity; ++p) {
    if (!spf_.is_prime(p)) continue;
    primes_.push_back(p);
    log_primes_.push_back(std::log(static_cast<double>(p)));
    const auto poly = local_factor_poly(kind, satake_theta(f.lambda(p), p));
    polys_.insert(polys_.end(), poly.begin(), poly.end());
  }
  if (zeta_factored()) {
    // g(p^nu) = lambda(p^nu) - lambda(p^{nu-1}), extended multiplicatively
    g_.assign(capacity + 1, 0.0);
    g_[1] = 1.0;
    for (std::uint32_t n = 2; n <= capacity; ++n) {
      const std::uint32_t p = spf_.spf(n);
      const std::uint32_t pa = spf_.spf_power(n);
      if (pa == n) {
        g_[n] = lambda_[n] - lambda_[n / p];
      } else {
        g_[n] = g_[n / pa] * g_[pa];
      }
    }
  }
}

std::span<const double> LFunction::local_poly(std::size_t prime_index) const {
  const std::size_t d = static_cast<std::size_t>(kind_.degree()) + 1;
  return std::span<const double>(polys_).subspan(prime_index * d, d);
}

void LFunction::powers(cplx s, std::size_t n_terms, std::vector<cplx>& out) const {
  if (n_terms > capacity()) {
    throw Error(Errc::insufficient_cache, "evaluation needs " + std::to_string(n_terms) +
                                              " coefficients but only " + std::to_string(capacity()) +
                                              " are available");
  }
  out.resize(n_terms + 1);
  if (n_terms == 0) return;
  out[0] = 0.0;
  out[1] = 1.0;
  for (std::uint32_t n = 2; n <= n_terms; ++n) {
    const std::uint32_t c = cofactor_[n];
    out[n] = c == 1 ? std::exp(-s * std::log(static_cast<double>(n))) : out[spf_.spf(n)] * out[c];
  }
}

namespace {

LValue eval_smoothed(const LFunction& L, cplx s, const EvalParams& params) {
  if (!(s.real() > L.kind().sigma_F())) {
    throw Error(Errc::out_of_region, "smoothed evaluation needs Re(s) > " + std::to_string(L.kind().sigma_F()));
  }
  const double X = params.X > 0.0 ? params.X : default_X(s.imag());
  const unsigned runs = std::max(params.levels, 1u);
  const std::size_t N = params.n_terms ? params.n_terms : smoothed_terms(X, params.levels);
  const auto c = richardson_coefficients(params.levels);
  thread_local std::vector<cplx> pw;
  L.powers(s, N, pw);
  cplx sums[kMaxLevels + 1] = {};
  gaussian_sums(L.summed_coefficients(), pw, N, X, runs + 1, sums);
  cplx value = 0.0;
  for (unsigned j = 0; j <= params.levels; ++j) value += c[j] * sums[j];
  double stability = std::abs(sums[1] - sums[0]);
  if (L.zeta_factored()) {
    const cplx z = zeta(s);
    value *= z;
    stability *= std::abs(z);
  }
  return {value, stability, X, N};
}

LValue eval_euler(const LFunction& L, cplx s, const EvalParams& params) {
  if (!(s.real() > 1.0)) throw Error(Errc::out_of_region, "Euler product evaluation needs Re(s) > 1");
  const std::size_t P = params.n_terms ? params.n_terms : L.capacity();
  if (P > L.capacity()) {
    throw Error(Errc::insufficient_cache, "Euler product to " + std::to_string(P) + " exceeds the local data");
  }
  const auto primes = L.primes();
  const auto logs = L.log_primes();
  cplx prod = 1.0, half = 1.0;
  bool half_set = false;
  for (std::size_t i = 0; i < primes.size() && primes[i] <= P; ++i) {
    if (!half_set && primes[i] > P / 2) {
      half = prod;
      half_set = true;
    }
    const cplx x = std::exp(-s * logs[i]);
    const auto poly = L.local_poly(i);
    cplx d = 0.0;
    for (std::size_t j = poly.size(); j-- > 0;) d = d * x + poly[j];
    prod *= L.zeta_factored() ? (1.0 - x) / d : 1.0 / d;
  }
  if (!half_set) half = prod;
  cplx value = prod;
  double stability = std::abs(prod - half);
  if (L.zeta_factored()) {
    const cplx z = zeta(s);
    value *= z;
    stability *= std::abs(z);
  }
  return {value, stability, 0.0, P};
}

}  // namespace

LValue LFunction::eval(cplx s, const EvalParams& params) const {
  return params.mode == EvalMode::smoothed ? eval_smoothed(*this, s, params) : eval_euler(*this, s, params);
}

LValue eval_L(const LFunction& L, cplx s, const EvalParams& params) { return L.eval(s, params); }

namespace {

struct ThetaSeries {
  std::vector<double> c;  // c_f(n) as doubles
  int k;

  explicit ThetaSeries(const HeckeEigenform& f) : k(f.weight()) {
    const std::size_t n_max = std::min<std::size_t>(f.bound(), 240);
    if (n_max < 200) throw Error(Errc::insufficient_cache, "the theta integral needs coefficients up to 200");
    c.resize(n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) c[n] = mpz_get_d(f.exact(n).get_mpz_t());
  }

  // sum_n c(n) exp(-2 pi n y)
  double operator()(double y) const {
    const double q = std::exp(-2.0 * kPi * y);
    double qn = 1.0, total = 0.0;
    for (std::size_t n = 1; n < c.size(); ++n) {
      qn *= q;
      const double term = c[n] * qn;
      total += term;
      if (qn < 1e-300) break;
    }
    return total;
  }
};

// integral over [log a, log b] of g(e^u) du, composite 30-point Gauss-Legendre
template <class G>
cplx log_quadrature(G&& g, double a, double b, int panels) {
  using Quad = boost::math::quadrature::gauss<double, 30>;
  const double ua = std::log(a), ub = std::log(b);
  const double h = (ub - ua) / panels;
  cplx total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = ua + i * h;
    const auto& x = Quad::abscissa();
    const auto& w = Quad::weights();
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] == 0.0) {
        total += w[j] * half * g(mid);
      } else {
        total += w[j] * half * (g(mid + half * x[j]) + g(mid - half * x[j]));
      }
    }
  }
  return total;
}

constexpr double kThetaLower = 0.12;
constexpr double kThetaUpper = 16.0;

void require_m1(const LKind& kind) {
  if (kind != LKind::sym(1)) {
    throw Error(Errc::unsupported_kind, "the completed L-function is implemented for sym1 only");
  }
}

}  // namespace

cplx completed_lambda_m1(const HeckeEigenform& f, cplx s) {
  const ThetaSeries F(f);
  const cplx sp = s + 0.5 * (f.weight() - 1);
  auto g = [&](double u) { return F(std::exp(u)) * std::exp(sp * u); };
  return 2.0 * log_quadrature(g, kThetaLower, kThetaUpper, 48);
}

cplx completed_lambda_m1_split(const HeckeEigenform& f, cplx s, int eps) {
  const ThetaSeries F(f);
  const cplx sp = s + 0.5 * (f.weight() - 1);
  const cplx dual = static_cast<double>(f.weight()) - sp;
  auto g = [&](double u) { return F(std::exp(u)) * (std::exp(sp * u) + static_cast<double>(eps) * std::exp(dual * u)); };
  return 2.0 * log_quadrature(g, 1.0, kThetaUpper, 32);
}

FunctionalEquationData functional_equation_check(const HeckeEigenform& f, const LKind& kind) {
  require_m1(kind);
  FunctionalEquationData out;
  out.points = {cplx(0.3, 2.0), cplx(0.75, 0.0), cplx(0.6, 5.0)};
  double res[2] = {0.0, 0.0};
  std::vector<cplx> direct;
  for (const cplx& s : out.points) {
    const cplx a = completed_lambda_m1(f, s);
    const cplx b = completed_lambda_m1(f, 1.0 - s);
    direct.push_back(a);
    res[0] = std::max(res[0], std::abs(a - b));
    res[1] = std::max(res[1], std::abs(a + b));
  }
  out.epsilon = res[0] <= res[1] ? 1 : -1;
  out.residual = out.epsilon == 1 ? res[0] : res[1];
  out.other_residual = out.epsilon == 1 ? res[1] : res[0];
  out.split_residual = 0.0;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    out.split_residual =
        std::max(out.split_residual, std::abs(direct[i] - completed_lambda_m1_split(f, out.points[i], out.epsilon)));
  }
  return out;
}

MeanSquareReport mean_square(const LFunction& L, double sigma, double T, double dt, unsigned threads,
                             unsigned levels) {
  if (!(sigma > L.kind().sigma_F())) {
    throw Error(Errc::out_of_region, "mean square needs sigma > " + std::to_string(L.kind().sigma_F()));
  }
  if (!(T >= 100.0)) throw Error(Errc::invalid_argument, "mean square needs T >= 100");
  if (!(dt > 0.0) || dt > T) throw Error(Errc::invalid_argument, "grid step must lie in (0, T]");
  const auto points = static_cast<std::size_t>(std::llround(T / dt));
  const std::size_t N_max = smoothed_terms(default_X(T), levels);
  if (N_max > L.capacity()) {
    throw Error(Errc::insufficient_cache, "mean square to T = " + std::to_string(T) + " needs " +
                                              std::to_string(N_max) + " coefficients");
  }
  const auto lam = L.coefficients();
  std::vector<double> diag(N_max + 1, 0.0);
  for (std::size_t n = 1; n <= N_max; ++n) diag[n] = lam[n] * lam[n] * std::pow(static_cast<double>(n), -2.0 * sigma);
  std::vector<double> emp(points), ref(points), stab(points);
  EvalParams params;
  params.levels = levels;
  parallel_for(points, threads, [&](std::size_t i) {
    const double t = (static_cast<double>(i) + 0.5) * dt;
    const LValue v = L.eval(cplx(sigma, t), params);
    emp[i] = std::norm(v.value);
    stab[i] = v.stability;
    const double r = weighted_square(diag, v.n_terms, v.X, levels);
    ref[i] = r;
  });
  MeanSquareReport rep{sigma, T, dt, points, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < points; ++i) {
    rep.M_emp += emp[i];
    rep.M_ref += ref[i];
    rep.max_stability = std::max(rep.max_stability, stab[i]);
  }
  rep.M_emp /= static_cast<double>(points);
  rep.M_ref /= static_cast<double>(points);
  rep.ratio = rep.M_emp / rep.M_ref;
  return rep;
}

double convexity_exponent(const LKind& kind) {
  const int m = kind.m();
  if (kind.variant() == Variant::sym) return (m + 1 + (m % 2 == 1 ? 1 : 0)) / 4.0;
  return (m + 1) * (m + 1) / 4.0;
}

GrowthReport growth_diagnostic(const LFunction& L, double sigma, std::span<const double> t_samples,
                               unsigned threads) {
  if (t_samples.size() < 8) throw Error(Errc::invalid_argument, "growth fit needs at least 8 samples");
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0) || (i > 0 && !(t_samples[i] > t_samples[i - 1]))) {
      throw Error(Errc::invalid_argument, "t samples must be positive and strictly increasing");
    }
  }
  std::vector<double> y(t_samples.size());
  parallel_for(t_samples.size(), threads, [&](std::size_t i) {
    y[i] = std::log(std::abs(L.eval(cplx(sigma, t_samples[i])).value));
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = std::log(t_samples[i]);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {sigma, y.size(), slope, (sy - slope * sx) / n, convexity_exponent(L.kind())};
}

}  // namespace symuniv
