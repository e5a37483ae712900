#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace symuniv {

// Truncated power series in q with exact integer coefficients.
//
// A series with bound N stores the coefficients of q^0 .. q^N. Arithmetic
// between series of different bounds truncates to the smaller bound, so
// every result equals the truncation of the exact result.
class QSeries {
 public:
  QSeries() = default;
  // Zero series with bound N.
  explicit QSeries(std::size_t bound) : coeffs_(bound + 1) {}
  explicit QSeries(std::vector<mpz_class> coeffs);

  std::size_t bound() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool empty() const noexcept { return coeffs_.empty(); }

  const mpz_class& operator[](std::size_t n) const { return coeffs_.at(n); }
  mpz_class& operator[](std::size_t n) { return coeffs_.at(n); }
  std::span<const mpz_class> coefficients() const noexcept { return coeffs_; }

  QSeries truncated(std::size_t bound) const;
  // Multiplication by q^k, keeping the bound.
  QSeries shifted(std::size_t k) const;
  QSeries pow(unsigned exponent) const;

  QSeries& operator+=(const QSeries& rhs);
  QSeries& operator-=(const QSeries& rhs);
  QSeries& operator*=(const mpz_class& scalar);

  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(QSeries a, const mpz_class& s) { return a *= s; }
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend bool operator==(const QSeries& a, const QSeries& b) { return a.coeffs_ == b.coeffs_; }

  // Bit length of the largest coefficient in absolute value.
  std::size_t max_bits() const;

 private:
  std::vector<mpz_class> coeffs_;
};

// A sparse series given by (exponent, coefficient) terms with a constant term 1.
struct SparseTerm {
  std::size_t exponent;
  std::int64_t coeff;
};

// g^r truncated at the bound, for a sparse g with g(0) = 1, via the power
// recurrence n g0 P_n = sum_k ((r + 1) k - n) g_k P_{n-k}. The recurrence is
// run modulo word-size primes and lifted by CRT; `coeff_bits` must bound the
// bit length of every result coefficient.
QSeries sparse_power(std::span<const SparseTerm> g, unsigned r, std::size_t bound, double coeff_bits);

}  // namespace symuniv
