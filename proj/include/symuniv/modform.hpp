#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symuniv/qseries.hpp"

namespace symuniv {

// Weights k with dim S_k(SL2(Z)) = 1, where the normalized cusp form is
// automatically a Hecke eigenform.
inline constexpr int kSupportedWeights[] = {12, 16, 18, 20, 22, 26};

bool is_supported_weight(int k) noexcept;

// Level-1 Hecke eigencuspform with exact coefficients c_f(n) and normalized
// eigenvalues lambda_f(n) = c_f(n) / n^{(k-1)/2}, for 1 <= n <= bound().
class HeckeEigenform {
 public:
  // Takes the exact q-expansion (c_f(0) = 0, c_f(1) = 1).
  HeckeEigenform(int weight, QSeries expansion);

  int weight() const noexcept { return weight_; }
  std::size_t bound() const noexcept { return series_.bound(); }
  const QSeries& series() const noexcept { return series_; }
  const mpz_class& exact(std::size_t n) const { return series_[n]; }
  double lambda(std::size_t n) const { return normalized_.at(n); }
  // Indexed by n; entry 0 is unused and set to 0.
  std::span<const double> normalized() const noexcept { return normalized_; }

 private:
  int weight_;
  QSeries series_;
  std::vector<double> normalized_;
};

// Delta = q prod (1 - q^n)^24 through coefficient q^N, computed as q times the
// eighth power of the Jacobi series sum (-1)^j (2j+1) q^{j(j+1)/2}.
QSeries qexp_delta(std::size_t N);

// E_4 or E_6 through q^N.
QSeries eisenstein_series(int weight, std::size_t N);

// The normalized cusp form of weight k, as Delta times a monomial in E_4, E_6.
HeckeEigenform qexp_newform(int k, std::size_t N);

struct SatakeAngle {
  std::uint64_t p;
  double theta;  // in [0, pi], with lambda_f(p) = 2 cos(theta)
};

inline constexpr double kDeligneSlack = 1e-12;

SatakeAngle satake_angle(const HeckeEigenform& f, std::uint64_t p);
// Angle from a normalized eigenvalue, with the Deligne check.
double satake_theta(double lambda_p, std::uint64_t p);

// Chebyshev polynomial of the second kind U_n(x) by the three-term recurrence.
double chebyshev_u(unsigned n, double x) noexcept;

// lambda_f(p^nu) = U_nu(cos theta_f(p)).
double lambda_prime_power(const HeckeEigenform& f, std::uint64_t p, unsigned nu);
double lambda_prime_power(double theta, unsigned nu) noexcept;

// First failure of the exact Hecke relation
//   c(m) c(n) = sum_{d | (m, n)} d^{k-1} c(mn / d^2)
// over all 1 <= m <= n with mn <= limit.
struct HeckeViolation {
  std::uint64_t m;
  std::uint64_t n;
  std::uint64_t suspect;  // index most often involved in failing relations
  std::size_t failures;
};
std::optional<HeckeViolation> check_hecke_relation(const HeckeEigenform& f, std::uint64_t mn_limit);

// Largest |lambda_f(p)| over primes p <= limit.
struct DeligneReport {
  double max_abs_lambda;
  std::uint64_t argmax_p;
  std::size_t primes_checked;
};
DeligneReport deligne_scan(const HeckeEigenform& f, std::uint64_t limit);

// Coefficient cache: CSV `n,c_exact,lambda_norm` plus a JSON sidecar
// `<path>.meta.json` holding weight, bound, checksum and generator version.
void write_coefficient_cache(const HeckeEigenform& f, const std::filesystem::path& path);

enum class ChecksumPolicy { verify, skip };
HeckeEigenform read_coefficient_cache(const std::filesystem::path& path,
                                      ChecksumPolicy policy = ChecksumPolicy::verify);

// FNV-1a 64 of the file contents, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

std::filesystem::path default_cache_file(const std::filesystem::path& dir, int k, std::size_t N);

// Loads the cache for (k, N) from dir when present and valid, otherwise
// computes the form and writes the cache. An empty dir disables caching.
HeckeEigenform load_or_build(int k, std::size_t N, const std::filesystem::path& dir);

}  // namespace symuniv
