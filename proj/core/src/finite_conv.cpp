#include "cfinv/finite_conv.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/summation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace cfinv {

namespace {

void check_rates(std::span<const double> rates, const char* what) {
    if (rates.empty()) throw std::invalid_argument(std::string(what) + ": empty rate vector");
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
            throw std::invalid_argument(std::string(what) + ": rates must be finite and positive");
        }
        if (i > 0) {
            if (!(rates[i] > rates[i - 1])) {
                if (rates[i] == rates[i - 1]) {
                    fail(ErrorKind::DegenerateRates, std::string(what) + ": repeated rate " + std::to_string(rates[i]));
                }
                throw std::invalid_argument(std::string(what) + ": rates must be strictly increasing");
            }
            if (rates[i] - rates[i - 1] < 1e-8 * rates[i]) {
                fail(ErrorKind::DegenerateRates, std::string(what) + ": rates " + std::to_string(rates[i - 1]) +
                                                     " and " + std::to_string(rates[i]) + " nearly coincide");
            }
        }
    }
}

// Sign and log2-magnitude of a running product, so long products of large or
// small factors neither overflow nor pay for exp(sum of logs).
class ScaledProduct {
public:
    void mul(double f) {
        mant_ *= f;
        int e = 0;
        mant_ = std::frexp(mant_, &e);
        exp2_ += e;
    }
    void div(double f) { mul(1.0 / f); }
    double value() const { return std::ldexp(mant_, static_cast<int>(std::clamp<long>(exp2_, -2000, 2000))); }

private:
    double mant_ = 1.0;
    long exp2_ = 0;
};

}  // namespace

double ConvolutionClosedForm::density(double x) const {
    if (kind == Kind::Hypoexponential && x < 0.0) return 0.0;
    // the weights sum to zero for n >= 2; skip the rounding residue
    if (kind == Kind::Hypoexponential && x == 0.0 && rates.size() > 1) return 0.0;
    const double ax = std::abs(x);
    CompensatedSum sum;
    for (std::size_t i = 0; i < rates.size(); ++i) sum.add(weights[i] * std::exp(-rates[i] * ax));
    return sum.value();
}

GeneralizedDirichletSeries ConvolutionClosedForm::as_series() const {
    std::vector<DirichletTerm> terms;
    terms.reserve(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) terms.push_back({weights[i], rates[i]});
    return GeneralizedDirichletSeries(std::move(terms),
                                      kind == Kind::Hypoexponential ? Support::PositiveHalfLine
                                                                    : Support::SymmetricLine);
}

ConvolutionClosedForm exp_conv(std::span<const double> rates) {
    check_rates(rates, "exp_conv");
    const std::size_t n = rates.size();
    ConvolutionClosedForm out{{}, {rates.begin(), rates.end()}, ConvolutionClosedForm::Kind::Hypoexponential};
    out.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // A(n) / prod_{j != i} (l_j - l_i), one ratio l_j / (l_j - l_i) at a time
        ScaledProduct w;
        w.mul(rates[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) w.mul(rates[j] / (rates[j] - rates[i]));
        }
        out.weights[i] = w.value();
    }
    return out;
}

ConvolutionClosedForm laplace_conv(std::span<const double> rates) {
    check_rates(rates, "laplace_conv");
    const std::size_t n = rates.size();
    ConvolutionClosedForm out{{}, {rates.begin(), rates.end()}, ConvolutionClosedForm::Kind::LaplaceConvolution};
    out.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // (-1)^i A^2 / (2 l_i prod_{j != i} |l_i^2 - l_j^2|)
        ScaledProduct w;
        w.mul(rates[i] / 2.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) w.mul(rates[j] * rates[j] / ((rates[j] - rates[i]) * (rates[j] + rates[i])));
        }
        out.weights[i] = w.value();
    }
    return out;
}

namespace {

void check_mixture(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("mixture_law: a and b differ in length");
    check_rates(a, "mixture_law(a)");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!(b[i] > 0.0) || !std::isfinite(b[i])) throw std::invalid_argument("mixture_law: b must be positive");
        if (i > 0 && !(b[i] > b[i - 1])) throw std::invalid_argument("mixture_law: b must be strictly increasing");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (std::abs(a[i] - b[j]) <= 1e-12 * b[j]) {
                fail(ErrorKind::CollidingZeros, "a_" + std::to_string(i + 1) + " equals b_" + std::to_string(j + 1));
            }
        }
        if (!(a[i] < b[i])) {
            fail(ErrorKind::OrderingViolation, "a_" + std::to_string(i + 1) + " >= b_" + std::to_string(i + 1));
        }
    }
}

// -h(a_k)/g'(a_k) for g = prod (1 - p(z)/p(a_r)), h = prod (1 - p(z)/p(b_r)),
// with p(z) = z (power 1) or z^2 (power 2). g'(a_k) = -(power/a_k) prod_{r != k}.
MixtureLaw build_mixture(std::span<const double> a, std::span<const double> b, int power, Support support) {
    check_mixture(a, b);
    const std::size_t n = a.size();
    auto p = [power](double z) { return power == 1 ? z : z * z; };

    ScaledProduct atom_product;
    for (std::size_t i = 0; i < n; ++i) atom_product.mul(p(a[i]) / p(b[i]));

    std::vector<DirichletTerm> terms(n);
    for (std::size_t k = 0; k < n; ++k) {
        ScaledProduct c;
        c.mul(a[k] / power);
        for (std::size_t r = 0; r < n; ++r) {
            c.mul(1.0 - p(a[k]) / p(b[r]));
            if (r != k) c.div(1.0 - p(a[k]) / p(a[r]));
        }
        terms[k] = {c.value(), a[k]};
    }
    const double atom = atom_product.value();
    return {atom, GeneralizedDirichletSeries(std::move(terms), support, atom)};
}

}  // namespace

MixtureLaw mixture_law(std::span<const double> a, std::span<const double> b) {
    return build_mixture(a, b, 1, Support::PositiveHalfLine);
}

MixtureLaw symmetric_mixture_law(std::span<const double> a, std::span<const double> b) {
    return build_mixture(a, b, 2, Support::SymmetricLine);
}

// ---------------------------------------------------------------------------
// Brute-force convolution

namespace {

// One-sided limits of a pointwise density at 0.
struct Limits {
    double left;
    double right;
};

Limits limits_at_zero(const SupportedDensity& d) {
    const double v = d.pdf(0.0);
    switch (d.support) {
        case Support::PositiveHalfLine: return {0.0, v};
        case Support::NegativeHalfLine: return {v, 0.0};
        case Support::SymmetricLine: return {v, v};
    }
    return {v, v};
}

double pdf_inside(const SupportedDensity& d, double y) {
    if (d.support == Support::PositiveHalfLine && y < 0.0) return 0.0;
    if (d.support == Support::NegativeHalfLine && y > 0.0) return 0.0;
    return d.pdf(y);
}

// Function tabulated on nodes y_j = (j - origin) h, with separate one-sided
// values at the node y = 0.
struct Tabulated {
    double h;
    std::size_t origin;
    std::vector<double> values;
    Limits at_zero;

    Limits limits(std::size_t j) const {
        if (j == origin) return at_zero;
        return {values[j], values[j]};
    }
};

struct Layout {
    double h;
    std::size_t origin;  // index of y = 0
    std::size_t count;   // number of nodes
};

// sum_j w_j F(y_j) f(x - y_j) with trapezoid weights; interior nodes use the
// mean of the left and right limits so jumps at nodes stay second order.
double convolve_at(const Tabulated& F, const SupportedDensity& f, const Limits& f0, long m_offset) {
    const std::size_t count = F.values.size();
    CompensatedSum sum;
    for (std::size_t j = 0; j < count; ++j) {
        const long d_index = m_offset - (static_cast<long>(j) - static_cast<long>(F.origin));
        const Limits fl = F.limits(j);
        // Integrand left limit in y pairs F(y-) with f(d+), and vice versa.
        double left;
        double right;
        if (d_index == 0) {
            left = fl.left * f0.right;
            right = fl.right * f0.left;
        } else {
            const double fv = pdf_inside(f, static_cast<double>(d_index) * F.h);
            left = fl.left * fv;
            right = fl.right * fv;
        }
        double w;
        if (j == 0) {
            w = 0.5 * right;
        } else if (j + 1 == count) {
            w = 0.5 * left;
        } else {
            w = 0.5 * (left + right);
        }
        sum.add(w);
    }
    return sum.value() * F.h;
}

class BruteConvolver {
public:
    BruteConvolver(std::span<const SupportedDensity> densities, double half_width)
        : densities_(densities.begin(), densities.end()), half_width_(half_width) {
        if (densities_.size() < 2) throw std::invalid_argument("brute_convolve needs at least two densities");
        positive_only_ = std::all_of(densities_.begin(), densities_.end(),
                                     [](const SupportedDensity& d) { return d.support == Support::PositiveHalfLine; });
        if (!positive_only_ && !(half_width > 0.0)) {
            throw std::invalid_argument("brute_convolve: half_width must be positive");
        }
        for (const auto& d : densities_) zero_limits_.push_back(limits_at_zero(d));
    }

    bool positive_only() const { return positive_only_; }

    /// Trapezoid value at x on step h (x must be a multiple of h).
    double evaluate(double x, double h, double extent) {
        const Tabulated& F = prefix(h, extent);
        const long m = std::lround(x / h);
        return convolve_at(F, densities_.back(), zero_limits_.back(), m);
    }

private:
    // Convolution of all but the last density, tabulated on step h.
    const Tabulated& prefix(double h, double extent) {
        auto key = std::make_pair(h, extent);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        Layout L{};
        L.h = h;
        if (positive_only_) {
            L.origin = 0;
            L.count = static_cast<std::size_t>(std::lround(extent / h)) + 1;
        } else {
            const auto half = static_cast<std::size_t>(std::ceil(half_width_ / h - 1e-9));
            L.origin = half;
            L.count = 2 * half + 1;
        }

        Tabulated F{h, L.origin, std::vector<double>(L.count), zero_limits_.front()};
        for (std::size_t j = 0; j < L.count; ++j) {
            const double y = (static_cast<double>(j) - static_cast<double>(L.origin)) * h;
            F.values[j] = j == L.origin ? 0.5 * (F.at_zero.left + F.at_zero.right) : pdf_inside(densities_[0], y);
        }
        for (std::size_t k = 1; k + 1 < densities_.size(); ++k) {
            Tabulated next{h, L.origin, std::vector<double>(L.count), {0.0, 0.0}};
            for (std::size_t m = 0; m < L.count; ++m) {
                next.values[m] = convolve_at(F, densities_[k], zero_limits_[k],
                                             static_cast<long>(m) - static_cast<long>(L.origin));
            }
            // Convolving with an integrable density removes any jump at 0.
            next.at_zero = {next.values[L.origin], next.values[L.origin]};
            F = std::move(next);
        }
        return cache_.emplace(key, std::move(F)).first->second;
    }

    std::vector<SupportedDensity> densities_;
    std::vector<Limits> zero_limits_;
    double half_width_;
    bool positive_only_ = false;
    std::map<std::pair<double, double>, Tabulated> cache_;
};

// Largest step <= grid_step that puts x on the grid; grid_step itself when x
// is already (to rounding) a multiple of it, so such points share tabulations.
double step_through(double x, double grid_step) {
    const double ratio = std::abs(x) / grid_step;
    if (x == 0.0 || std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio)) return grid_step;
    return std::abs(x) / std::ceil(ratio);
}

ConvolutionEstimate estimate_at(BruteConvolver& conv, double x, double grid_step, double half_width, double extent,
                                double tol) {
    if (conv.positive_only() && x < 0.0) return {0.0, 0.0};
    if (!conv.positive_only() && std::abs(x) > half_width) {
        fail(ErrorKind::UnsupportedPoint, "x outside [-half_width, half_width]");
    }
    const double h = step_through(x, grid_step);

    const double t1 = conv.evaluate(x, h, extent);
    const double t2 = conv.evaluate(x, h / 2, extent);
    const double t3 = conv.evaluate(x, h / 4, extent);
    const double r1 = (4.0 * t2 - t1) / 3.0;
    const double r2 = (4.0 * t3 - t2) / 3.0;
    const double value = (16.0 * r2 - r1) / 15.0;
    const double error = std::abs(value - r2);
    if (error > tol) {
        fail(ErrorKind::GridTooCoarse, "refinements disagree by " + std::to_string(error) + " at x=" +
                                           std::to_string(x) + " (step " + std::to_string(grid_step) + ")");
    }
    return {value, error};
}

}  // namespace

ConvolutionEstimate brute_convolve(std::span<const SupportedDensity> densities, double x, double grid_step,
                                   double half_width, double tol) {
    const double xs[] = {x};
    return brute_convolve(densities, xs, grid_step, half_width, tol).front();
}

std::vector<ConvolutionEstimate> brute_convolve(std::span<const SupportedDensity> densities,
                                                std::span<const double> xs, double grid_step, double half_width,
                                                double tol) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("brute_convolve: grid_step must be positive");
    BruteConvolver conv(densities, half_width);
    double extent = 0.0;
    for (double x : xs) extent = std::max(extent, x);
    std::vector<ConvolutionEstimate> out;
    out.reserve(xs.size());
    for (double x : xs) {
        // On the half-line, tabulate up to the largest requested point so the
        // cached prefix covers every x sharing the same step.
        const double h = step_through(x, grid_step);
        const double ext = conv.positive_only() ? std::ceil(extent / h - 1e-9) * h : 0.0;
        out.push_back(estimate_at(conv, x, grid_step, half_width, ext, tol));
    }
    return out;
}

nlohmann::json to_json(const ConvolutionClosedForm& form) {
    auto doc = to_json(form.as_series(), form.rates.size());
    doc["kind"] = form.kind == ConvolutionClosedForm::Kind::Hypoexponential ? "Hypoexponential" : "LaplaceConvolution";
    return doc;
}

}  // namespace cfinv
