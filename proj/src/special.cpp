#include "symuniv/special.hpp"

#include <cmath>
#include <numbers>

#include "symuniv/error.hpp"

namespace symuniv {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2k} for k = 1..15
constexpr double kBernoulli[] = {1.0 / 6,
                                 -1.0 / 30,
                                 1.0 / 42,
                                 -1.0 / 30,
                                 5.0 / 66,
                                 -691.0 / 2730,
                                 7.0 / 6,
                                 -3617.0 / 510,
                                 43867.0 / 798,
                                 -174611.0 / 330,
                                 854513.0 / 138,
                                 -236364091.0 / 2730,
                                 8553103.0 / 6,
                                 -23749461029.0 / 870,
                                 8615841276005.0 / 14322};

cplx stirling(cplx z) {
  cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi);
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx pw = inv;
  for (int k = 1; k <= 10; ++k) {
    s += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1)) * pw;
    pw *= inv2;
  }
  return s;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && z.real() == std::floor(z.real())) {
      throw Error(Errc::invalid_argument, "Gamma has a pole at a non-positive integer");
    }
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  cplx shift = 0.0;
  cplx prod = 1.0;
  int since = 0;
  while (std::abs(z) < 20.0) {
    prod *= z;
    z += 1.0;
    if (++since == 8) {
      shift += std::log(prod);
      prod = 1.0;
      since = 0;
    }
  }
  shift += std::log(prod);
  return stirling(z) - shift;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx log_gamma_r(cplx s) { return -0.5 * s * std::log(kPi) + log_gamma(0.5 * s); }

cplx log_gamma_c(cplx s) { return std::log(2.0) - s * std::log(2.0 * kPi) + log_gamma(s); }

cplx zeta(cplx s) {
  if (s == cplx(1.0, 0.0)) throw Error(Errc::invalid_argument, "zeta has a pole at s = 1");
  if (s.real() < 0.0) {
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(0.5 * kPi * s) * gamma(1.0 - s) * zeta(1.0 - s);
  }
  const int N = 20 + static_cast<int>(std::abs(s) * 0.5);
  cplx sum = 0.0;
  for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double logN = std::log(static_cast<double>(N));
  const cplx Ns = std::exp(-s * logN);
  sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
  // sum_k B_{2k} / (2k)! s (s+1) ... (s+2k-2) N^{-s-2k+1}
  cplx rising = s;
  cplx pw = Ns / static_cast<double>(N);
  double fact = 2.0;
  for (int k = 1; k <= 15; ++k) {
    const cplx term = kBernoulli[k - 1] / fact * rising * pw;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    rising *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
    pw /= static_cast<double>(N) * N;
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
  }
  return sum;
}

}  // namespace symuniv
