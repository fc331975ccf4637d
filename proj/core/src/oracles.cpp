#include "cfinv/oracles.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/summation.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace cfinv {

using std::numbers::pi;

std::string_view to_string(OracleKind kind) noexcept {
    switch (kind) {
        case OracleKind::GilPelaez: return "gil_pelaez";
        case OracleKind::GaussianSum: return "gaussian_sum";
        case OracleKind::BruteConvolution: return "brute_convolution";
        case OracleKind::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

OracleReport make_report(double point, double series_value, double oracle_value, OracleKind kind) {
    return {point, series_value, oracle_value, std::abs(series_value - oracle_value), kind};
}

void write_csv(std::ostream& out, std::span<const OracleReport> rows) {
    out << "point,series,oracle,diff,kind\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,", r.point, r.series_value, r.oracle_value,
                      r.abs_diff);
        out << buf << to_string(r.kind) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Fourier inversion

namespace {

struct Simpson {
    const std::function<double(double)>& f;

    double run(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        return run(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + run(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
    }

    double integrate(double a, double b, double eps) const {
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return run(a, b, fa, fm, fb, whole, eps, 24);
    }
};

}  // namespace

double gil_pelaez_density(const CharFn& phi, double x, const QuadratureParams& q) {
    if (!(q.t_max > 0.0) || !(q.tol > 0.0)) throw std::invalid_argument("gil_pelaez_density: bad quadrature params");
    const double T = q.t_max;
    const double ax = std::abs(x);

    const cplx phi_T = phi(T);
    double remainder;
    double tail = 0.0;
    if (ax == 0.0) {
        remainder = std::abs(phi_T) * T;
    } else {
        // int_T^inf e^{-itx} phi dt = e^{-iTx} phi(T) / (ix) + (1/(ix)) int_T^inf e^{-itx} phi' dt
        tail = (std::polar(1.0, -T * x) * phi_T / cplx(0.0, x)).real();
        const double h = 1e-3 * T;
        const double dphi = std::abs((phi(T + h) - phi(T - h)) / (2.0 * h));
        remainder = dphi / (x * x);
    }
    if (remainder / pi > q.tol) {
        fail(ErrorKind::TailTooHeavy, "characteristic function tail beyond t_max=" + std::to_string(T) +
                                          " is worth " + std::to_string(remainder / pi));
    }

    const double width_cap = ax > 0.0 ? std::min(1.0, pi / (4.0 * ax)) : 1.0;
    const auto panels = static_cast<std::size_t>(std::ceil(T / width_cap));
    if (panels > q.max_panels) {
        fail(ErrorKind::NoConvergence, "Gil-Pelaez quadrature needs " + std::to_string(panels) + " panels");
    }
    const double width = T / static_cast<double>(panels);
    const std::function<double(double)> integrand = [&](double t) {
        return (std::polar(1.0, -t * x) * phi(t)).real();
    };
    const Simpson simpson{integrand};
    CompensatedSum sum;
    const double eps = q.tol * pi / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = width * static_cast<double>(i);
        sum.add(simpson.integrate(a, i + 1 == panels ? T : a + width, eps));
    }
    return (sum.value() + tail) / pi;
}

double suggest_t_max(const CharFn& phi, double tol) {
    for (double t = 1.0; t <= 16777216.0; t *= 2.0) {
        if (std::abs(phi(t)) * t <= tol) return t;
    }
    return 16777216.0;
}

double gaussian_sum_density(double u, double v, double y, int k_range) {
    if (!(u > 0.0 && v > u && y > 0.0)) throw std::invalid_argument("gaussian_sum_density: need 0<u<v and y>0");
    const double norm = std::sqrt(2.0 * pi) * y * std::sqrt(y);
    CompensatedSum sum;
    for (int k = -k_range; k <= k_range; ++k) {
        const double d = v - u + 2.0 * k * v;
        sum.add(d / norm * std::exp(-d * d / (2.0 * y)));
    }
    return v / u * sum.value();
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// Zeros of the half-line law actually sampled: a_n (power 1) or a_n^2 (power 2).
struct FactorTable {
    std::vector<double> rate;
    std::vector<double> p_zero;  // a_n/b_n (or squared)
};

FactorTable factor_table(const EntireQuotientModel& model, std::size_t n, int power) {
    FactorTable t;
    const auto a = model.g_zeros().prefix(n);
    std::vector<double> b;
    if (model.h_zeros()) b = model.h_zeros()->prefix(n);
    t.rate.resize(n);
    t.p_zero.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        t.rate[k] = power == 1 ? a[k] : a[k] * a[k];
        if (!b.empty()) t.p_zero[k] = power == 1 ? a[k] / b[k] : (a[k] * a[k]) / (b[k] * b[k]);
    }
    return t;
}

// Mean of the sampled half-line law from the closed characteristic function:
// -i phi'(0) (power 1) or half the variance -phi''(0)/2 (power 2).
double closed_total(const EntireQuotientModel& model, int power) {
    const double scale = model.g_zeros().at(1);
    if (power == 1) {
        const double h = 1e-4 * scale;
        const cplx d = (model.closed_phi(h) - model.closed_phi(-h)) / (2.0 * h);
        return d.imag() - model.translation();
    }
    const double h = 1e-3 * scale;
    const double d2 = (model.closed_phi(h) + model.closed_phi(-h) - 2.0).real() / (h * h);
    return -d2 / 2.0;
}

std::size_t choose_factors(const EntireQuotientModel& model, std::size_t n_factors, int power) {
    if (model.finite_factors() > 0) return std::min(n_factors, model.finite_factors());
    const bool closed = model.has_closed_phi();
    const double total_closed = closed ? closed_total(model, power) : 0.0;

    std::vector<double> d;  // factor means
    CompensatedSum partial;
    std::size_t batch = 256;
    for (std::size_t n = 1; n <= n_factors; ++n) {
        if (d.size() < n) {
            const auto t = factor_table(model, std::min(n_factors, d.size() + batch), power);
            for (std::size_t k = d.size(); k < t.rate.size(); ++k) d.push_back((1.0 - t.p_zero[k]) / t.rate[k]);
            batch *= 2;
        }
        partial.add(d[n - 1]);
        if (n < 8) continue;
        double tail;
        double total;
        if (closed) {
            total = total_closed;
            tail = total - partial.value();
        } else {
            const double ratio = d[n / 2 - 1] / d[n - 1];
            const double p = std::log(ratio) / std::log(static_cast<double>(n) / static_cast<double>(n / 2));
            if (!(p > 1.05)) continue;
            tail = d[n - 1] * static_cast<double>(n) / (p - 1.0);
            total = partial.value() + tail;
        }
        if (tail < 1e-4 * total) return n;
    }
    fail(ErrorKind::TailMeanUnbounded, "neglected mean stays above 1e-4 of the total within " +
                                           std::to_string(n_factors) + " factors for " + model.kind());
}

constexpr std::size_t kBlock = 4096;

std::mt19937_64 block_engine(std::uint64_t seed, std::size_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

// Uniform on (0, 1), independent of the standard library's distributions.
double uniform(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

double mixture_sum(const FactorTable& t, std::mt19937_64& eng) {
    CompensatedSum s;
    for (std::size_t k = 0; k < t.rate.size(); ++k) {
        const double u = uniform(eng);
        const double p = t.p_zero[k];
        if (u < p) continue;
        s.add(-std::log((u - p) / (1.0 - p)) / t.rate[k]);
    }
    return s.value();
}

template <typename Draw>
std::vector<double> blocked(std::size_t n_samples, std::uint64_t seed, Draw draw) {
    std::vector<double> out(n_samples);
    for (std::size_t block = 0; block * kBlock < n_samples; ++block) {
        auto eng = block_engine(seed, block);
        const std::size_t end = std::min(n_samples, (block + 1) * kBlock);
        for (std::size_t i = block * kBlock; i < end; ++i) out[i] = draw(eng);
    }
    return out;
}

}  // namespace

std::size_t sampling_factors(const EntireQuotientModel& model, std::size_t n_factors) {
    return choose_factors(model, n_factors, model.symmetric() ? 2 : 1);
}

std::vector<double> sample_halfline(const EntireQuotientModel& model, std::size_t n_factors, std::size_t n_samples,
                                    std::uint64_t seed) {
    if (model.symmetric()) throw std::invalid_argument("sample_halfline needs a half-line model");
    const auto table = factor_table(model, choose_factors(model, n_factors, 1), 1);
    return blocked(n_samples, seed, [&](std::mt19937_64& eng) { return mixture_sum(table, eng); });
}

std::vector<double> sample_symmetric_bondesson(const EntireQuotientModel& model, std::size_t n_factors,
                                               std::size_t n_samples, std::uint64_t seed) {
    if (!model.symmetric()) throw std::invalid_argument("sample_symmetric_bondesson needs a symmetric model");
    const auto table = factor_table(model, choose_factors(model, n_factors, 2), 2);
    return blocked(n_samples, seed, [&](std::mt19937_64& eng) {
        const double y = mixture_sum(table, eng);
        const double u1 = uniform(eng);
        const double u2 = uniform(eng);
        const double normal2 = std::sqrt(-4.0 * std::log(u1)) * std::cos(2.0 * pi * u2);  // N(0, 2)
        return std::sqrt(y) * normal2;
    });
}

std::vector<double> sample_symmetric_factorwise(const EntireQuotientModel& model, std::size_t n_factors,
                                                std::size_t n_samples, std::uint64_t seed) {
    if (!model.symmetric()) throw std::invalid_argument("sample_symmetric_factorwise needs a symmetric model");
    const std::size_t n = choose_factors(model, n_factors, 2);
    const auto table = factor_table(model, n, 1);
    std::vector<double> p2(n);
    for (std::size_t k = 0; k < n; ++k) p2[k] = table.p_zero[k] * table.p_zero[k];
    return blocked(n_samples, seed, [&](std::mt19937_64& eng) {
        CompensatedSum s;
        for (std::size_t k = 0; k < n; ++k) {
            const double u = uniform(eng);
            if (u < p2[k]) continue;
            const double w = (u - p2[k]) / (1.0 - p2[k]);
            s.add(w < 0.5 ? std::log(2.0 * w) / table.rate[k] : -std::log(2.0 * (1.0 - w)) / table.rate[k]);
        }
        return s.value();
    });
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, 1.63 / std::sqrt(n), 1.36 / std::sqrt(n)};
}

KsTwoSample ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    if (lambda < 0.2) return {d, 1.0};
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        q += term;
        if (std::abs(term) < 1e-12) break;
    }
    return {d, std::clamp(q, 0.0, 1.0)};
}

}  // namespace cfinv
