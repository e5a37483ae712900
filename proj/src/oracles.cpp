#include "symuniv/oracles.hpp"

#include <complex>

#include "symuniv/detail/multimodular.hpp"

namespace symuniv::oracle {

std::vector<mpz_class> delta_direct_product(std::size_t N) {
  using detail::u128;
  std::vector<u128> a(N, 0);  // prod (1 - q^n)^24 through q^{N-1}
  if (N == 0) return {};
  a[0] = 1;
  for (std::size_t n = 1; n < N; ++n) {
    for (int r = 0; r < 24; ++r) {
      for (std::size_t i = N - 1; i >= n; --i) a[i] -= a[i - n];
    }
  }
  std::vector<mpz_class> tau(N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    const bool negative = static_cast<detail::i128>(a[i]) < 0;
    const u128 mag = negative ? -a[i] : a[i];
    mpz_class hi = static_cast<unsigned long>(mag >> 64);
    mpz_class v = hi << 64;
    v += static_cast<unsigned long>(mag & ~std::uint64_t{0});
    tau[i + 1] = negative ? mpz_class(-v) : v;
  }
  return tau;
}

namespace {

std::complex<double> homogeneous(const std::vector<std::complex<double>>& roots, std::size_t from, unsigned nu) {
  if (nu == 0) return 1.0;
  if (from == roots.size()) return 0.0;
  std::complex<double> total = 0.0, power = 1.0;
  for (unsigned j = 0; j <= nu; ++j) {
    total += power * homogeneous(roots, from + 1, nu - j);
    power *= roots[from];
  }
  return total;
}

}  // namespace

double prime_power_coefficient(const LKind& kind, double theta, unsigned nu) {
  return homogeneous(local_roots(kind, theta), 0, nu).real();
}

std::vector<double> divisor_convolution(unsigned z, std::size_t N) {
  std::vector<double> d(N + 1, 0.0);
  for (std::size_t n = 1; n <= N; ++n) d[n] = 1.0;
  for (unsigned j = 1; j < z; ++j) {
    std::vector<double> next(N + 1, 0.0);
    for (std::size_t a = 1; a <= N; ++a)
      for (std::size_t b = a; b <= N; b += a) next[b] += d[a];
    d.swap(next);
  }
  return d;
}

}  // namespace symuniv::oracle
