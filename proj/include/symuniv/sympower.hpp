#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symuniv/modform.hpp"

namespace symuniv {

enum class Variant { sym, rankin_selberg };

// Sym(m) = sym^m f, or RankinSelberg(m) = sym^m f x sym^m f, for 1 <= m <= 4.
class LKind {
 public:
  static LKind sym(int m);
  static LKind rankin_selberg(int m);
  // "sym1".."sym4", "rs1".."rs4"
  static LKind parse(std::string_view name);

  Variant variant() const noexcept { return variant_; }
  int m() const noexcept { return m_; }
  int degree() const noexcept { return variant_ == Variant::sym ? m_ + 1 : (m_ + 1) * (m_ + 1); }
  // Order z of the divisor function d_z bounding |lambda_F(n)|.
  int divisor_order() const noexcept { return degree(); }
  // Left edge of the universality strip.
  double sigma_F() const noexcept { return 1.0 - 1.0 / degree(); }
  std::string name() const;

  friend bool operator==(const LKind&, const LKind&) = default;

 private:
  LKind(Variant v, int m) : variant_(v), m_(m) {}
  Variant variant_;
  int m_;
};

// Local roots are e^{i e theta} for these integer multiples e, with repetition:
// m - 2j (0 <= j <= m) for Sym, 2(m - i - j) (0 <= i, j <= m) for RankinSelberg.
std::vector<int> root_exponents(const LKind& kind);
std::vector<std::complex<double>> local_roots(const LKind& kind, double theta);

inline constexpr double kImagAccept = 1e-10;
inline constexpr double kImagFatal = 1e-8;

// D_p(x) with L_p(s) = 1 / D_p(p^{-s}); coefficients of x^0 .. x^degree.
struct LocalFactor {
  std::uint64_t p;
  std::vector<double> poly;
};

// Expands prod (1 - r x) over the roots in complex arithmetic and drops the
// imaginary parts. Throws numeric_instability if they are not negligible.
std::vector<double> expand_real(std::span<const std::complex<double>> roots);
std::vector<double> local_factor_poly(const LKind& kind, double theta);
LocalFactor local_factor(const HeckeEigenform& f, std::uint64_t p, const LKind& kind);

// First `terms` coefficients of 1 / poly, for poly(0) = 1.
std::vector<double> invert_series(std::span<const double> poly, std::size_t terms);

// lambda_F(n) for 1 <= n <= N. Entry 0 is unused.
class DirichletCoefficients {
 public:
  DirichletCoefficients(LKind kind, std::vector<double> table);

  const LKind& kind() const noexcept { return kind_; }
  std::size_t bound() const noexcept { return table_.size() - 1; }
  double operator[](std::size_t n) const { return table_[n]; }
  std::span<const double> table() const noexcept { return table_; }

 private:
  LKind kind_;
  std::vector<double> table_;
};

DirichletCoefficients dirichlet_coefficients(const HeckeEigenform& f, const LKind& kind, std::size_t N);

struct VonMangoldtRS {
  std::uint64_t n;
  double value;
};

// Lambda_{sym^m f x sym^m f}(p^nu) = U_m(cos(nu theta))^2 log p.
double von_mangoldt_rs(double theta, int m, unsigned nu, double log_p);
VonMangoldtRS von_mangoldt_rs(const HeckeEigenform& f, int m, std::uint64_t p, unsigned nu);

// Lambda_{f,m}(p^nu) = 2 sum_{j=1}^m (m + 1 - j) cos(2 j theta nu) log p.
double von_mangoldt_psi(double theta, int m, unsigned nu, double log_p);
double von_mangoldt_psi(const HeckeEigenform& f, int m, std::uint64_t p, unsigned nu);

inline constexpr unsigned kLogDerivMaxOrder = 12;

// Coefficients of -x D'(x) / D(x) as a power series, indices 0 .. nu_max.
// Entry nu is Lambda(p^nu) / log p. Polynomial arithmetic only.
std::vector<double> log_deriv_oracle(std::span<const double> poly, unsigned nu_max);

// Local factor of Psi_{f,m}: prod_{0 <= l < m} [(1 - a^{2(m-l)} x)(1 - a^{-2(m-l)} x)]^{l+1}.
std::vector<double> psi_local_factor(double theta, int m);

// max |RS(m) factor - (1 - x)^{m+1} Psi factor| relative to the largest
// coefficient of the RS factor.
double zeta_factorization_residual(double theta, int m);

// Lambda_F(n) for n <= dc.bound() from lambda_F(n) log n = sum_{d | n} Lambda_F(d) lambda_F(n / d).
std::vector<double> von_mangoldt_from_coefficients(const DirichletCoefficients& dc);

// d_z(p^nu) = binom(z + nu - 1, nu); d_z(n) by multiplicativity, n <= N.
double divisor_prime_power(unsigned z, unsigned nu);
std::vector<double> divisor_table(unsigned z, std::size_t N);

// CSV `n,lambda_F` plus JSON sidecar with weight, m, variant, N and version.
void write_dirichlet_csv(const DirichletCoefficients& dc, int weight, const std::filesystem::path& path);

}  // namespace symuniv
