#include "cfinv/special.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

namespace cfinv::special {

namespace {

constexpr double kSeriesRadius = 400.0;

using lcplx = std::complex<long double>;

lcplx reduced_series(double mu, lcplx w) {
    const lcplx step = -w / 4.0L;
    lcplx term = 1.0L / std::tgamma(static_cast<long double>(mu) + 1.0L);
    lcplx sum = term;
    for (int n = 1; n < 400; ++n) {
        term *= step / (static_cast<long double>(n) * (n + static_cast<long double>(mu)));
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum) && n * n > std::abs(w) / 4.0L) break;
    }
    return sum;
}

cplx reduced_hankel(double mu, cplx w) {
    const cplx z = std::sqrt(w);
    const double mu4 = 4.0 * mu * mu;
    cplx p = 1.0;
    cplx q = 0.0;
    cplx term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu4 - odd * odd) / (8.0 * k * z);
        const double mag = std::abs(term);
        if (mag > last && k > 2) break;  // asymptotic series started to diverge
        last = mag;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
        if (mag < 1e-17) break;
    }
    const cplx chi = z - (mu / 2.0 + 0.25) * std::numbers::pi;
    const cplx j = std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(chi) - q * std::sin(chi));
    return j / std::pow(z / 2.0, mu);
}

}  // namespace

double cosh_sqrt(double w) {
    return w >= 0.0 ? std::cosh(std::sqrt(w)) : std::cos(std::sqrt(-w));
}

cplx cosh_sqrt(cplx w) {
    return std::cosh(std::sqrt(w));
}

double sinhc_sqrt(double w) {
    if (std::abs(w) < 1e-3) {
        return 1.0 + w / 6.0 * (1.0 + w / 20.0 * (1.0 + w / 42.0));
    }
    if (w > 0.0) {
        const double s = std::sqrt(w);
        return std::sinh(s) / s;
    }
    const double s = std::sqrt(-w);
    return std::sin(s) / s;
}

cplx sinhc_sqrt(cplx w) {
    if (std::abs(w) < 1e-3) {
        return 1.0 + w / 6.0 * (1.0 + w / 20.0 * (1.0 + w / 42.0));
    }
    const cplx s = std::sqrt(w);
    return std::sinh(s) / s;
}

double sinhc_sqrt_deriv(double w) {
    if (std::abs(w) < 1e-2) {
        // sum_n n w^(n-1) / (2n+1)!
        return 1.0 / 6.0 + w / 60.0 + w * w / 1680.0 + w * w * w / 90720.0;
    }
    return (cosh_sqrt(w) - sinhc_sqrt(w)) / (2.0 * w);
}

cplx bessel_reduced(double mu, cplx w) {
    if (std::abs(w) <= kSeriesRadius) {
        const lcplx r = reduced_series(mu, lcplx(w.real(), w.imag()));
        return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
    }
    return reduced_hankel(mu, w);
}

double bessel_reduced(double mu, double w) {
    if (w >= 0.0 && w <= 100.0) {
        return static_cast<double>(reduced_series(mu, lcplx(w, 0.0L)).real());
    }
    if (w > 0.0) {
        const double z = std::sqrt(w);
        return boost::math::cyl_bessel_j(mu, z) / std::pow(z / 2.0, mu);
    }
    if (-w <= kSeriesRadius) {
        return static_cast<double>(reduced_series(mu, lcplx(w, 0.0L)).real());
    }
    const double s = std::sqrt(-w);
    return boost::math::cyl_bessel_i(mu, s) / std::pow(s / 2.0, mu);
}

double bessel_j(double nu, double x) {
    return boost::math::cyl_bessel_j(nu, x);
}

double sech(double x) {
    const double ax = std::abs(x);
    if (ax > 700.0) return 0.0;
    const double e = std::exp(-ax);
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace cfinv::special
