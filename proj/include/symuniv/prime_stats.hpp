#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "symuniv/modform.hpp"
#include "symuniv/primes.hpp"

namespace symuniv {

// Prime sums for the Rankin-Selberg square of sym^m f up to x.
struct PntReport {
  int weight;
  int m;
  std::uint64_t x;
  double psi;    // sum_{n <= x} Lambda_RS(n), prime powers included
  double theta;  // sum_{p <= x} |lambda_f(p^m)|^2 log p
  double pi_w;   // sum_{p <= x} |lambda_f(p^m)|^2
  std::size_t pi_x;
  double psi_ratio;    // psi / x
  double theta_ratio;  // theta / x
  double pi_w_ratio;   // pi_w / (x / log x)
  double r_bound;      // (m+1)^2 pi(sqrt x) log x, which bounds psi - theta
};

PntReport prime_sums(const HeckeEigenform& f, int m, std::uint64_t x);
PntReport prime_sums(const HeckeEigenform& f, int m, std::uint64_t x, const PrimeTable& primes);

struct PiDeltaReport {
  int m;
  double delta;
  std::uint64_t x;
  std::size_t count;  // #{p <= x : |lambda_f(p^m)| >= delta}
  std::size_t pi_x;
  std::uint64_t a;
  std::uint64_t b;
  std::size_t window_count;
  std::size_t window_primes;
  double ratio;        // window_count / window_primes
  double lower_bound;  // (1 - delta^2) / ((m+1)^2 - delta^2)
};

// Window (a, b]; b = 0 selects b = 2a, and a = 0 selects a = x / 2.
PiDeltaReport pi_delta(const HeckeEigenform& f, int m, double delta, std::uint64_t x, std::uint64_t a = 0,
                       std::uint64_t b = 0);

struct ThetaSample {
  std::uint64_t x;
  double theta_ratio;
};

// theta(x)/x at geometrically spaced x in [10, x_max], per_decade points per decade.
std::vector<ThetaSample> theta_samples(const HeckeEigenform& f, int m, std::uint64_t x_max, unsigned per_decade);
void write_theta_csv(const std::vector<ThetaSample>& samples, const std::filesystem::path& path);

}  // namespace symuniv
