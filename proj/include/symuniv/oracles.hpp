#pragma once

// Slow, independent reference computations used by tests and the
// verification suite. Nothing here shares code paths with the fast routes.

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "symuniv/sympower.hpp"

namespace symuniv::oracle {

// tau(1..N) from q prod_{n<N} (1 - q^n)^24, multiplied out factor by factor.
// Arithmetic wraps modulo 2^128, which is exact because |tau(n)| < 2^127.
std::vector<mpz_class> delta_direct_product(std::size_t N);

// lambda_F(p^nu) as the complete homogeneous symmetric polynomial h_nu of the
// local roots, summed over all multisets of roots.
double prime_power_coefficient(const LKind& kind, double theta, unsigned nu);

// d_z(n) for n <= N by repeated Dirichlet convolution with 1.
std::vector<double> divisor_convolution(unsigned z, std::size_t N);

}  // namespace symuniv::oracle
