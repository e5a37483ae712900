#include "symuniv/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symuniv/detail/multimodular.hpp"
#include "symuniv/error.hpp"

namespace symuniv {

using detail::i128;

QSeries::QSeries(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.resize(1);
}

QSeries QSeries::truncated(std::size_t bound) const {
  std::vector<mpz_class> c(coeffs_.begin(), coeffs_.begin() + std::min(coeffs_.size(), bound + 1));
  c.resize(bound + 1);
  return QSeries(std::move(c));
}

QSeries QSeries::shifted(std::size_t k) const {
  QSeries out(bound());
  for (std::size_t n = k; n < coeffs_.size(); ++n) out.coeffs_[n] = coeffs_[n - k];
  return out;
}

QSeries QSeries::pow(unsigned exponent) const {
  QSeries result(bound());
  result.coeffs_[0] = 1;
  QSeries base = *this;
  while (exponent) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
  const std::size_t n = std::min(coeffs_.size(), rhs.coeffs_.size());
  coeffs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) {
  const std::size_t n = std::min(coeffs_.size(), rhs.coeffs_.size());
  coeffs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

QSeries& QSeries::operator*=(const mpz_class& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

std::size_t QSeries::max_bits() const {
  std::size_t bits = 0;
  for (const auto& c : coeffs_) {
    if (c != 0) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  }
  return bits;
}

namespace {

constexpr std::size_t kSchoolbookLimit = 48;

QSeries schoolbook(const QSeries& a, const QSeries& b, std::size_t bound) {
  QSeries out(bound);
  for (std::size_t i = 0; i <= bound; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j <= bound; ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

}  // namespace

QSeries operator*(const QSeries& a, const QSeries& b) {
  const std::size_t bound = std::min(a.bound(), b.bound());
  if (bound < kSchoolbookLimit) return schoolbook(a, b, bound);

  const double bits = static_cast<double>(a.max_bits() + b.max_bits()) + std::log2(static_cast<double>(bound + 1));
  const std::size_t k = detail::primes_for_bits(bits);
  std::vector<std::vector<std::uint64_t>> residues(k);
  std::vector<std::uint64_t> ra(bound + 1), rb(bound + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& prime = detail::ntt_prime(i);
    for (std::size_t n = 0; n <= bound; ++n) {
      ra[n] = detail::reduce_mpz(a[n], prime.p);
      rb[n] = detail::reduce_mpz(b[n], prime.p);
    }
    residues[i] = detail::convolve_mod(ra, rb, bound + 1, prime);
  }
  return QSeries(detail::crt_lift(residues));
}

QSeries sparse_power(std::span<const SparseTerm> g, unsigned r, std::size_t bound, double coeff_bits) {
  if (g.empty() || g.front().exponent != 0 || g.front().coeff != 1) {
    throw Error(Errc::invalid_argument, "sparse_power needs a series with constant term 1");
  }
  for (std::size_t j = 1; j < g.size(); ++j) {
    if (g[j].exponent <= g[j - 1].exponent) {
      throw Error(Errc::invalid_argument, "sparse_power terms must have increasing exponents");
    }
  }
  const std::size_t k = detail::primes_for_bits(coeff_bits);
  std::vector<std::vector<std::uint64_t>> residues(k);
  const i128 r1 = static_cast<i128>(r) + 1;

  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t p = detail::ntt_prime(i).p;
    if (bound >= p) throw Error(Errc::invalid_argument, "series bound exceeds the modulus");
    std::vector<std::uint64_t> inv(bound + 1, 1);
    for (std::size_t n = 2; n <= bound; ++n) {
      inv[n] = p - detail::mulmod(p / n, inv[p % n], p);
    }
    auto& P = residues[i];
    P.assign(bound + 1, 0);
    P[0] = 1;
    for (std::size_t n = 1; n <= bound; ++n) {
      i128 weighted = 0;  // sum e_j g_j P_{n - e_j}
      i128 plain = 0;     // sum g_j P_{n - e_j}
      for (std::size_t j = 1; j < g.size() && g[j].exponent <= n; ++j) {
        const i128 term = static_cast<i128>(g[j].coeff) * static_cast<i128>(P[n - g[j].exponent]);
        plain += term;
        weighted += term * static_cast<i128>(g[j].exponent);
      }
      const i128 pp = static_cast<i128>(p);
      i128 w = weighted % pp;
      i128 s = plain % pp;
      if (w < 0) w += pp;
      if (s < 0) s += pp;
      i128 num = (r1 % pp) * w % pp - (static_cast<i128>(n) % pp) * s % pp;
      num %= pp;
      if (num < 0) num += pp;
      P[n] = detail::mulmod(static_cast<std::uint64_t>(num), inv[n], p);
    }
  }
  return QSeries(detail::crt_lift(residues));
}

}  // namespace symuniv
