#pragma once

#include <complex>

// Entire-function building blocks shared by the model catalog and the
// closed-form characteristic functions.
namespace cfinv::special {

using cplx = std::complex<double>;

/// cosh(sqrt(w)); entire in w, equals cos(sqrt(-w)) for w < 0.
double cosh_sqrt(double w);
cplx cosh_sqrt(cplx w);

/// sinh(sqrt(w)) / sqrt(w); entire in w with value 1 at w = 0.
double sinhc_sqrt(double w);
cplx sinhc_sqrt(cplx w);

/// d/dw of sinhc_sqrt.
double sinhc_sqrt_deriv(double w);

/// Reduced Bessel function E_mu(w) = sum_n (-w/4)^n / (n! Gamma(n+mu+1)),
/// so that J_mu(z) = (z/2)^mu E_mu(z^2). Entire in w for mu > -1.
/// Power series for |w| <= 400, Hankel asymptotics beyond.
cplx bessel_reduced(double mu, cplx w);
double bessel_reduced(double mu, double w);

/// J_nu(x) for real x >= 0.
double bessel_j(double nu, double x);

double sech(double x);

}  // namespace cfinv::special
