#include "cfinv/zerofind.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfinv {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

constexpr int kProbeDepth = 20;

struct Sample {
    double x;
    double v;
};

// Looks for sign changes inside (left, right) around a suspected tangency by
// repeatedly halving the gaps next to the sample of smallest |f|. Samples
// that are exactly zero are skipped when comparing signs, as in the main scan.
void probe(const RealFunction& f, const Sample& left, const Sample& mid, const Sample& right, int depth,
           std::vector<Bracket>& out) {
    std::vector<Sample> pts{left, mid, right};
    for (int level = 0; level < depth; ++level) {
        std::size_t best = 1;
        for (std::size_t i = 2; i + 1 < pts.size(); ++i) {
            if (std::abs(pts[i].v) < std::abs(pts[best].v)) best = i;
        }
        const double xl = 0.5 * (pts[best - 1].x + pts[best].x);
        const double xr = 0.5 * (pts[best].x + pts[best + 1].x);
        if (!(xl > pts[best - 1].x && xl < pts[best].x && xr > pts[best].x && xr < pts[best + 1].x)) return;
        pts.insert(pts.begin() + static_cast<long>(best) + 1, Sample{xr, f(xr)});
        pts.insert(pts.begin() + static_cast<long>(best), Sample{xl, f(xl)});

        const Sample* prev = nullptr;
        std::vector<Bracket> found;
        for (const auto& p : pts) {
            if (p.v == 0.0) continue;
            if (prev && sign_of(prev->v) != sign_of(p.v)) found.push_back({prev->x, p.x, sign_of(prev->v), sign_of(p.v)});
            prev = &p;
        }
        if (!found.empty()) {
            out.insert(out.end(), found.begin(), found.end());
            return;
        }
    }
}

}  // namespace

std::vector<Bracket> bracket_roots(const RealFunction& f, double lo, double hi, double init_step,
                                   std::size_t max_roots) {
    if (!(hi > lo)) throw std::invalid_argument("bracket_roots: need lo < hi");
    if (!(init_step > 0.0)) throw std::invalid_argument("bracket_roots: init_step must be positive");
    if (init_step < (hi - lo) * 1e-14) fail(ErrorKind::StepUnderflow, "bracketing step below (hi-lo)*1e-14");

    std::vector<Sample> s;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / init_step - 1e-9));
    s.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = i == n ? hi : lo + static_cast<double>(i) * init_step;
        const double v = f(x);
        if (!std::isfinite(v)) throw std::domain_error("bracket_roots: f is not finite at " + std::to_string(x));
        s.push_back({x, v});
    }

    std::vector<Bracket> out;
    for (std::size_t i = 0; i + 1 < s.size() && out.size() < max_roots; ++i) {
        const int si = sign_of(s[i].v);
        if (si == 0) continue;
        // Step over exact zeros at sample points.
        std::size_t j = i + 1;
        while (j < s.size() && s[j].v == 0.0) ++j;
        if (j == s.size()) break;
        const int sj = sign_of(s[j].v);
        if (si * sj < 0) {
            out.push_back({s[i].x, s[j].x, si, sj});
            i = j - 1;
            continue;
        }
        if (j == i + 1 && j + 1 < s.size()) {
            const auto& l = s[i];
            const auto& m = s[j];
            const auto& r = s[j + 1];
            if (sign_of(r.v) == si && std::abs(m.v) < std::abs(l.v) && std::abs(m.v) < std::abs(r.v)) {
                std::vector<Bracket> found;
                probe(f, l, m, r, kProbeDepth, found);
                for (const auto& b : found) {
                    if (out.size() < max_roots) out.push_back(b);
                }
                if (!found.empty()) ++i;  // [l, r] has been handled
            }
        }
    }
    return out;
}

double refine_root(const RealFunction& f, const Bracket& b, double tol) {
    double x0 = b.lo;
    double x1 = b.hi;
    double f0 = f(x0);
    double f1 = f(x1);
    if (f0 == 0.0) return x0;
    if (f1 == 0.0) return x1;
    if (sign_of(f0) * sign_of(f1) > 0) throw std::invalid_argument("refine_root: bracket has no sign change");

    double width = std::abs(x1 - x0);
    for (int iter = 0; iter < 300; ++iter) {
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        const double lo = std::min(x0, x1);
        const double hi = std::max(x0, x1);
        // Every third step is a bisection unless false position halved the bracket.
        if (!(x2 > lo && x2 < hi) || (iter % 3 == 2 && std::abs(x1 - x0) > 0.5 * width)) x2 = 0.5 * (lo + hi);
        if (iter % 3 == 2) width = std::abs(x1 - x0);
        const double f2 = f(x2);
        if (f2 == 0.0) return x2;
        if (sign_of(f2) * sign_of(f1) < 0) {
            x0 = x1;
            f0 = f1;
        } else {
            f0 *= 0.5;  // Illinois modification
        }
        x1 = x2;
        f1 = f2;
        const double span = std::abs(x1 - x0);
        const double mid = 0.5 * (x0 + x1);
        if (span <= tol * std::abs(x1) || mid == x0 || mid == x1) {
            return std::abs(f0) < std::abs(f1) && span > 0.0 ? x0 : x1;
        }
    }
    fail(ErrorKind::NoConvergence, "refine_root: no convergence in 300 iterations");
}

// ---------------------------------------------------------------------------
// Bessel zeros

namespace {

double mcmahon(double nu, std::size_t k) {
    const double beta = (static_cast<double>(k) + nu / 2.0 - 0.25) * std::numbers::pi;
    const double mu = 4.0 * nu * nu;
    const double e = 8.0 * beta;
    return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

// d/dx J_nu = -J_{nu+1} + (nu/x) J_nu
double newton_bessel(double nu, double x) {
    for (int i = 0; i < 60; ++i) {
        const double j = special::bessel_j(nu, x);
        const double dj = -special::bessel_j(nu + 1.0, x) + nu / x * j;
        const double step = j / dj;
        x -= step;
        if (!std::isfinite(x) || x <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        if (std::abs(step) <= 1e-15 * x) break;
    }
    return x;
}

// J_nu(x) > 0 on (0, j_1) for nu > -1, so J_nu has sign (-1)^(k-1) strictly
// between consecutive zeros k-1 and k.
bool consistent(double nu, const std::vector<double>& z, std::size_t first_index) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double prev = i == 0 ? (first_index == 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN()) : z[i - 1];
        if (!std::isfinite(z[i])) return false;
        if (std::isnan(prev)) continue;
        if (!(z[i] > prev + 1.0)) return false;
        const std::size_t k = first_index + i;
        const double mid = prev == 0.0 ? 0.5 * z[i] : 0.5 * (prev + z[i]);
        const double expect = k % 2 == 1 ? 1.0 : -1.0;
        if (special::bessel_j(nu, mid) * expect <= 0.0) return false;
    }
    return true;
}

std::vector<double> bessel_scan(double nu, std::size_t last) {
    auto f = [nu](double x) { return special::bessel_j(nu, x); };
    std::vector<double> zeros;
    double lo = 1e-6;
    while (zeros.size() < last) {
        const double hi = lo + 64.0;
        for (const auto& b : bracket_roots(f, lo, hi, 0.25, last - zeros.size())) {
            zeros.push_back(newton_bessel(nu, refine_root(f, b, 1e-15)));
        }
        lo = hi;
    }
    return zeros;
}

}  // namespace

std::vector<double> bessel_zeros(double nu, std::size_t first, std::size_t count) {
    if (!(nu > -1.0)) throw std::invalid_argument("bessel_zeros: nu must exceed -1");
    if (first == 0) throw std::out_of_range("bessel_zeros: index is 1-based");
    if (count == 0) return {};
    // Include the previous zero so the sign test covers the first interval.
    const std::size_t start = first > 1 ? first - 1 : 1;
    std::vector<double> z;
    for (std::size_t k = start; k < first + count; ++k) z.push_back(newton_bessel(nu, mcmahon(nu, k)));
    if (!consistent(nu, z, start)) z = [&] {
        auto all = bessel_scan(nu, first + count - 1);
        return std::vector<double>(all.begin() + static_cast<std::ptrdiff_t>(start - 1), all.end());
    }();
    if (!consistent(nu, z, start)) fail(ErrorKind::NoConvergence, "could not isolate Bessel zeros");
    if (start < first) z.erase(z.begin());
    return z;
}

std::vector<double> bessel_zeros(double nu, std::size_t k_max) { return bessel_zeros(nu, 1, k_max); }

// ---------------------------------------------------------------------------
// Heston

// (a - rho c z)^2 + c^2 (z - z^2) expanded, so the z^2 terms cancel exactly
// for |rho| = 1 instead of through rounding.
double HestonFunction::w(double z) const {
    return a * a + (c * c - 2.0 * a * c * rho) * z + c * c * (rho * rho - 1.0) * z * z;
}

double HestonFunction::operator()(double z) const {
    const double ww = w(z);
    return std::exp(-a) * (special::cosh_sqrt(ww) + (a - rho * c * z) * special::sinhc_sqrt(ww));
}

double HestonFunction::derivative(double z) const {
    const double d = a - rho * c * z;
    const double ww = w(z);
    const double dw = c * c - 2.0 * a * c * rho + 2.0 * c * c * (rho * rho - 1.0) * z;
    const double s = special::sinhc_sqrt(ww);
    return std::exp(-a) * (0.5 * s * dw - rho * c * s + d * special::sinhc_sqrt_deriv(ww) * dw);
}

std::complex<double> HestonFunction::operator()(std::complex<double> z) const {
    const std::complex<double> d = a - rho * c * z;
    const std::complex<double> ww = a * a + (c * c - 2.0 * a * c * rho) * z + c * c * (rho * rho - 1.0) * z * z;
    return std::exp(-a) * (special::cosh_sqrt(ww) + d * special::sinhc_sqrt(ww));
}

namespace {

// For |rho| = 1, w is linear in z: w = a^2 + kappa z with kappa = c^2 - 2 a c rho.
struct HestonTheta {
    HestonFunction g;
    double kappa;

    double z_of(double theta) const { return -(g.a * g.a + theta * theta) / kappa; }
    double theta_of(double z) const { return std::sqrt(std::max(0.0, -(g.a * g.a + kappa * z))); }
    // e^{a} g(z(theta)) = cos(theta) + (a - rho c z) sin(theta)/theta
    double G(double theta) const {
        const double z = z_of(theta);
        const double s = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
        return std::cos(theta) + (g.a - g.rho * g.c * z) * s;
    }
};

}  // namespace

ZeroSequence heston_zeros(double a, double c, double rho, std::size_t t_zeros, double theta_step) {
    if (!(a > 0.0) || !(c > 0.0)) fail(ErrorKind::RegimeUnsupported, "Heston zeros need a > 0 and c > 0");
    const bool positive = rho == 1.0 && a >= c;
    const bool negative = rho == -1.0;
    if (!positive && !negative) {
        fail(ErrorKind::RegimeUnsupported, "Heston zeros are supported for rho = 1 with a >= c, or rho = -1");
    }
    if (!(theta_step > 0.0)) throw std::invalid_argument("heston_zeros: theta_step must be positive");

    const HestonTheta ht{{a, c, rho}, c * c - 2.0 * a * c * rho};
    auto extend = [ht, theta_step](std::span<const double> known, std::size_t want) {
        double lo = known.empty() ? 0.0 : ht.theta_of(known.back() * (ht.kappa < 0.0 ? 1.0 : -1.0));
        lo += known.empty() ? 1e-9 : 1e-6 * std::max(1.0, lo);
        auto G = [&ht](double th) { return ht.G(th); };
        std::vector<double> out;
        while (out.size() < want) {
            const double hi = lo + 64.0 * theta_step;
            for (const auto& b : bracket_roots(G, lo, hi, theta_step, want - out.size())) {
                const double theta = refine_root(G, b, 1e-15);
                const double z = std::abs(ht.z_of(theta));
                if (out.empty() ? (known.empty() || z > known.back()) : z > out.back()) out.push_back(z);
            }
            lo = hi;
        }
        return out;
    };
    std::string label = "heston(a=" + std::to_string(a) + ",c=" + std::to_string(c) + ",rho=" +
                        std::to_string(rho) + ")";
    ZeroSequence seq(std::move(extend), 0.5, std::move(label));
    if (t_zeros > 0) seq.prefix(t_zeros);
    return seq;
}

}  // namespace cfinv
