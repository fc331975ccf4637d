#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "cfinv/zero_sequence.hpp"

namespace cfinv {

using RealFunction = std::function<double(double)>;

struct Bracket {
    double lo;
    double hi;
    int f_lo_sign;
    int f_hi_sign;
};

/// Sign-change brackets of f on [lo, hi], in increasing order, at most
/// max_roots of them. Local minima of |f| without a sign change are probed
/// with successively halved steps (a bounded number of times), so close pairs
/// of roots are split while true tangencies yield nothing.
/// Throws StepUnderflow if init_step is below (hi - lo) * 1e-14.
std::vector<Bracket> bracket_roots(const RealFunction& f, double lo, double hi, double init_step,
                                   std::size_t max_roots);

/// Illinois false position safeguarded by bisection. Stops once the bracket
/// width is below tol * |root| or f vanishes exactly; throws NoConvergence
/// after 300 iterations.
double refine_root(const RealFunction& f, const Bracket& b, double tol = 1e-14);

/// First k_max positive zeros j_{nu,1} < j_{nu,2} < ... of J_nu, nu > -1.
std::vector<double> bessel_zeros(double nu, std::size_t k_max);
/// Zeros j_{nu,first}, ..., j_{nu,first+count-1} (1-based).
std::vector<double> bessel_zeros(double nu, std::size_t first, std::size_t count);

/// g(z) = e^{-a} (cosh P + (a - rho c z) sinh P / P) with
/// P^2 = w(z) = (a - rho c z)^2 + c^2 (z - z^2), evaluated through the entire
/// functions cosh(sqrt w) and sinh(sqrt w)/sqrt w.
struct HestonFunction {
    double a;
    double c;
    double rho;

    double w(double z) const;
    double operator()(double z) const;
    double derivative(double z) const;
    std::complex<double> operator()(std::complex<double> z) const;
};

/// Zeros of the Heston g, as magnitudes |z_n| (they are negative for
/// rho = -1). Supported regimes: rho = 1 with a >= c, and rho = -1; anything
/// else throws RegimeUnsupported. `t_zeros` zeros are computed eagerly, the
/// rest on demand. All zeros satisfy w(z) < 0; they are bracketed in
/// theta = sqrt(-w) with step theta_step.
ZeroSequence heston_zeros(double a, double c, double rho, std::size_t t_zeros, double theta_step = 0.39269908169872414);

}  // namespace cfinv
