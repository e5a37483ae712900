#include "symuniv/sympower.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symuniv/error.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/version.hpp"

namespace symuniv {

namespace {

void require_m(int m) {
  if (m < 1 || m > 4) {
    throw Error(Errc::unsupported_kind, "m = " + std::to_string(m) + " is outside 1..4");
  }
}

}  // namespace

LKind LKind::sym(int m) {
  require_m(m);
  return LKind(Variant::sym, m);
}

LKind LKind::rankin_selberg(int m) {
  require_m(m);
  return LKind(Variant::rankin_selberg, m);
}

LKind LKind::parse(std::string_view name) {
  auto digit = [&](std::size_t pos) {
    if (name.size() != pos + 1 || name[pos] < '0' || name[pos] > '9') {
      throw Error(Errc::unsupported_kind, "unknown L-function kind '" + std::string(name) + "'");
    }
    return name[pos] - '0';
  };
  if (name.rfind("sym", 0) == 0) return sym(digit(3));
  if (name.rfind("rs", 0) == 0) return rankin_selberg(digit(2));
  throw Error(Errc::unsupported_kind, "unknown L-function kind '" + std::string(name) + "'");
}

std::string LKind::name() const {
  return (variant_ == Variant::sym ? "sym" : "rs") + std::to_string(m_);
}

std::vector<int> root_exponents(const LKind& kind) {
  const int m = kind.m();
  std::vector<int> e;
  if (kind.variant() == Variant::sym) {
    for (int j = 0; j <= m; ++j) e.push_back(m - 2 * j);
  } else {
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) e.push_back(2 * (m - i - j));
  }
  return e;
}

std::vector<std::complex<double>> local_roots(const LKind& kind, double theta) {
  std::vector<std::complex<double>> roots;
  for (const int e : root_exponents(kind)) roots.push_back(std::polar(1.0, e * theta));
  return roots;
}

std::vector<double> expand_real(std::span<const std::complex<double>> roots) {
  // extended precision: the degree-25 factors lose about three digits to cancellation
  std::vector<std::complex<long double>> c(roots.size() + 1);
  c[0] = 1.0L;
  std::size_t deg = 0;
  for (const auto& r : roots) {
    ++deg;
    const std::complex<long double> rl(r.real(), r.imag());
    for (std::size_t i = deg; i >= 1; --i) c[i] -= rl * c[i - 1];
  }
  long double scale = 0.0L, imag = 0.0L;
  for (const auto& z : c) {
    scale = std::max(scale, std::abs(z));
    imag = std::max(imag, std::abs(z.imag()));
  }
  const double residue = static_cast<double>(imag / scale);
  if (residue > kImagFatal) {
    std::ostringstream msg;
    msg << "local factor has imaginary residue " << residue;
    throw Error(Errc::numeric_instability, msg.str());
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = static_cast<double>(c[i].real());
  return out;
}

std::vector<double> local_factor_poly(const LKind& kind, double theta) {
  const auto roots = local_roots(kind, theta);
  return expand_real(roots);
}

LocalFactor local_factor(const HeckeEigenform& f, std::uint64_t p, const LKind& kind) {
  return {p, local_factor_poly(kind, satake_angle(f, p).theta)};
}

std::vector<double> invert_series(std::span<const double> poly, std::size_t terms) {
  if (poly.empty() || poly[0] != 1.0) throw Error(Errc::invalid_argument, "series inversion needs constant term 1");
  std::vector<double> inv(terms, 0.0);
  if (terms == 0) return inv;
  inv[0] = 1.0;
  for (std::size_t n = 1; n < terms; ++n) {
    double s = 0.0;
    for (std::size_t i = 1; i <= std::min(n, poly.size() - 1); ++i) s += poly[i] * inv[n - i];
    inv[n] = -s;
  }
  return inv;
}

DirichletCoefficients::DirichletCoefficients(LKind kind, std::vector<double> table)
    : kind_(kind), table_(std::move(table)) {
  if (table_.size() < 2) throw Error(Errc::invalid_argument, "coefficient table must reach n = 1");
}

DirichletCoefficients dirichlet_coefficients(const HeckeEigenform& f, const LKind& kind, std::size_t N) {
  if (N < 1) throw Error(Errc::invalid_argument, "coefficient bound must be at least 1");
  if (N > f.bound()) {
    throw Error(Errc::insufficient_cache, "coefficients requested to " + std::to_string(N) +
                                              " but the form is known only to " + std::to_string(f.bound()));
  }
  SpfTable spf(static_cast<std::uint32_t>(N));
  std::vector<double> table(N + 1, 0.0);
  table[1] = 1.0;
  for (std::uint32_t p = 2; p <= N; ++p) {
    if (!spf.is_prime(p)) continue;
    unsigned nu_max = 0;
    for (std::uint64_t q = p; q <= N; q *= p) ++nu_max;
    const auto poly = local_factor_poly(kind, satake_theta(f.lambda(p), p));
    const auto series = invert_series(poly, nu_max + 1);
    std::uint64_t q = p;
    for (unsigned nu = 1; nu <= nu_max; ++nu, q *= p) table[q] = series[nu];
  }
  for (std::uint32_t n = 2; n <= N; ++n) {
    const std::uint32_t pa = spf.spf_power(n);
    if (pa != n) table[n] = table[n / pa] * table[pa];
  }
  return DirichletCoefficients(kind, std::move(table));
}

double von_mangoldt_rs(double theta, int m, unsigned nu, double log_p) {
  require_m(m);
  const double u = chebyshev_u(static_cast<unsigned>(m), std::cos(nu * theta));
  return u * u * log_p;
}

VonMangoldtRS von_mangoldt_rs(const HeckeEigenform& f, int m, std::uint64_t p, unsigned nu) {
  if (nu == 0) throw Error(Errc::invalid_argument, "prime-power exponent must be positive");
  const double theta = satake_angle(f, p).theta;
  std::uint64_t n = 1;
  for (unsigned i = 0; i < nu; ++i) n *= p;
  return {n, von_mangoldt_rs(theta, m, nu, std::log(static_cast<double>(p)))};
}

double von_mangoldt_psi(double theta, int m, unsigned nu, double log_p) {
  require_m(m);
  double s = 0.0;
  for (int j = 1; j <= m; ++j) s += (m + 1 - j) * std::cos(2.0 * j * theta * nu);
  return 2.0 * s * log_p;
}

double von_mangoldt_psi(const HeckeEigenform& f, int m, std::uint64_t p, unsigned nu) {
  if (nu == 0) throw Error(Errc::invalid_argument, "prime-power exponent must be positive");
  return von_mangoldt_psi(satake_angle(f, p).theta, m, nu, std::log(static_cast<double>(p)));
}

std::vector<double> log_deriv_oracle(std::span<const double> poly, unsigned nu_max) {
  if (nu_max > kLogDerivMaxOrder) {
    throw Error(Errc::invalid_argument, "log-derivative oracle supports orders up to 12");
  }
  if (poly.empty() || poly[0] != 1.0) throw Error(Errc::invalid_argument, "local factor must have constant term 1");
  // D C = -x D'  =>  c_nu = -nu d_nu - sum_{i=1}^{nu-1} d_i c_{nu-i}
  auto d = [&](std::size_t i) { return i < poly.size() ? poly[i] : 0.0; };
  std::vector<double> c(nu_max + 1, 0.0);
  for (unsigned nu = 1; nu <= nu_max; ++nu) {
    double s = -static_cast<double>(nu) * d(nu);
    for (unsigned i = 1; i < nu; ++i) s -= d(i) * c[nu - i];
    c[nu] = s;
  }
  return c;
}

std::vector<double> psi_local_factor(double theta, int m) {
  require_m(m);
  std::vector<std::complex<double>> roots;
  for (int l = 0; l < m; ++l) {
    const double e = 2.0 * (m - l);
    for (int r = 0; r <= l; ++r) {
      roots.push_back(std::polar(1.0, e * theta));
      roots.push_back(std::polar(1.0, -e * theta));
    }
  }
  return expand_real(roots);
}

double zeta_factorization_residual(double theta, int m) {
  const auto rs = local_factor_poly(LKind::rankin_selberg(m), theta);
  const auto psi = psi_local_factor(theta, m);
  // multiply psi by (1 - x)^{m+1}
  std::vector<double> prod(psi);
  for (int r = 0; r <= m; ++r) {
    prod.push_back(0.0);
    for (std::size_t i = prod.size() - 1; i >= 1; --i) prod[i] -= prod[i - 1];
  }
  if (prod.size() != rs.size()) throw Error(Errc::numeric_instability, "factor degrees disagree");
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    scale = std::max(scale, std::abs(rs[i]));
    diff = std::max(diff, std::abs(rs[i] - prod[i]));
  }
  return diff / scale;
}

std::vector<double> von_mangoldt_from_coefficients(const DirichletCoefficients& dc) {
  const std::size_t N = dc.bound();
  std::vector<double> lambda(N + 1, 0.0), acc(N + 1, 0.0);
  for (std::size_t n = 2; n <= N; ++n) {
    lambda[n] = dc[n] * std::log(static_cast<double>(n)) - acc[n];
    if (lambda[n] == 0.0) continue;
    for (std::size_t k = 1, q = n; q <= N; ++k, q += n) acc[q] += lambda[n] * dc[k];
  }
  return lambda;
}

double divisor_prime_power(unsigned z, unsigned nu) {
  double b = 1.0;
  for (unsigned i = 1; i <= nu; ++i) b = b * (z + i - 1) / i;
  return std::round(b);
}

std::vector<double> divisor_table(unsigned z, std::size_t N) {
  SpfTable spf(static_cast<std::uint32_t>(N));
  std::vector<double> d(N + 1, 0.0);
  if (N >= 1) d[1] = 1.0;
  for (std::uint32_t n = 2; n <= N; ++n) {
    const std::uint32_t p = spf.spf(n);
    const std::uint32_t pa = spf.spf_power(n);
    unsigned nu = 0;
    for (std::uint32_t q = pa; q > 1; q /= p) ++nu;
    d[n] = d[n / pa] * divisor_prime_power(z, nu);
  }
  return d;
}

void write_dirichlet_csv(const DirichletCoefficients& dc, int weight, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out << "n,lambda_F\n";
    char num[64];
    for (std::size_t n = 1; n <= dc.bound(); ++n) {
      std::snprintf(num, sizeof num, "%.17g", dc[n]);
      out << n << ',' << num << '\n';
    }
  }
  const nlohmann::json meta = {
      {"weight", weight},
      {"m", dc.kind().m()},
      {"variant", dc.kind().variant() == Variant::sym ? "sym" : "rankin_selberg"},
      {"kind", dc.kind().name()},
      {"N", dc.bound()},
      {"generator", std::string(kSoftwareName) + " " + kVersion},
  };
  std::ofstream out(path.string() + ".meta.json");
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string() + ".meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace symuniv
