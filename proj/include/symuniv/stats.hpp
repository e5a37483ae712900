#pragma once

#include <cstddef>
#include <span>

namespace symuniv {

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic critical value c(alpha) sqrt((n + m) / (n m)), with c(alpha) = sqrt(-log(alpha / 2) / 2).
double ks_critical(double alpha, std::size_t n, std::size_t m);

struct SampleMoments {
  double mean;
  double stddev;
};
SampleMoments moments(std::span<const double> x);

}  // namespace symuniv
