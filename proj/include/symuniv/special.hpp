#pragma once

#include <complex>

namespace symuniv {

using cplx = std::complex<double>;

// A logarithm of Gamma(z); the imaginary part is not the principal branch of
// log Gamma but exp() of it is Gamma(z). Not defined at the poles.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

// Gamma_R(s) = pi^{-s/2} Gamma(s/2), Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
cplx log_gamma_r(cplx s);
cplx log_gamma_c(cplx s);

// Riemann zeta by Euler-Maclaurin summation, for s != 1.
cplx zeta(cplx s);

}  // namespace symuniv
