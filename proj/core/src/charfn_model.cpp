#include "cfinv/charfn_model.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cfinv {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::ContinuousDensity: return "ContinuousDensity";
        case Verdict::AbsolutelyContinuous: return "AbsolutelyContinuous";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

EntireQuotientModel::EntireQuotientModel(Parts parts) : p_(std::move(parts)) {
    switch (p_.h_kind) {
        case HKind::One:
            if (p_.h_zeros) throw std::invalid_argument("model with h = 1 cannot carry h zeros");
            break;
        case HKind::Zeros:
            if (!p_.h_zeros) throw std::invalid_argument("model with h zeros needs an h zero sequence");
            break;
        case HKind::Evaluator:
            if (!p_.h_eval) throw std::invalid_argument("model with an h evaluator needs h_eval");
            break;
    }
    if (p_.h_zeros) {
        // Spot-check the interlacing a_n < b_n on the leading zeros.
        const std::size_t n = p_.finite_factors > 0 ? p_.finite_factors : 8;
        for (std::size_t k = 1; k <= n; ++k) {
            if (!(p_.g_zeros.at(k) < p_.h_zeros->at(k))) {
                fail(ErrorKind::OrderingViolation, "a_" + std::to_string(k) + " >= b_" + std::to_string(k));
            }
        }
    }
}

cplx EntireQuotientModel::closed_phi(double t) const {
    if (!p_.closed_phi) throw std::logic_error("model " + p_.kind + " has no closed-form characteristic function");
    return p_.closed_phi(t);
}

namespace {

// Factor power: 1 for half-line products in z, 2 for symmetric products in z^2.
int power(const EntireQuotientModel& m) { return m.symmetric() ? 2 : 1; }

double pw(double z, int p) { return p == 1 ? z : z * z; }

}  // namespace

double EntireQuotientModel::g_derivative_at(std::size_t n) const {
    const double a = p_.g_zeros.at(n);
    if (p_.g_derivative) return p_.g_derivative(a);
    if (p_.g_eval) {
        const double h = a * 1e-6;
        return (p_.g_eval(a + h) - p_.g_eval(a - h)) / (2.0 * h);
    }
    if (p_.finite_factors == 0) {
        throw std::logic_error("model " + p_.kind + " provides neither g' nor g, and has infinitely many factors");
    }
    const int p = power(*this);
    double prod = -static_cast<double>(p) / a;
    for (std::size_t m = 1; m <= p_.finite_factors; ++m) {
        if (m != n) prod *= 1.0 - pw(a, p) / pw(p_.g_zeros.at(m), p);
    }
    return prod;
}

double EntireQuotientModel::h_at(std::size_t n) const {
    const double a = p_.g_zeros.at(n);
    if (p_.h_kind == HKind::One) return 1.0;
    if (p_.h_eval) return p_.h_eval(a);
    if (p_.finite_factors == 0) {
        throw std::logic_error("model " + p_.kind + " has no h evaluator and infinitely many h zeros");
    }
    const int p = power(*this);
    double prod = 1.0;
    for (std::size_t m = 1; m <= p_.finite_factors; ++m) prod *= 1.0 - pw(a, p) / pw(p_.h_zeros->at(m), p);
    return prod;
}

cplx phi_partial(const EntireQuotientModel& model, double t, std::size_t n_factors) {
    if (n_factors == 0) throw std::invalid_argument("phi_partial: n_factors must be positive");
    std::size_t n = n_factors;
    if (model.finite_factors() > 0) n = std::min(n, model.finite_factors());

    const auto a = model.g_zeros().prefix(n);
    std::vector<double> b;
    if (model.h_kind() == EntireQuotientModel::HKind::Zeros) b = model.h_zeros()->prefix(n);

    cplx value = 1.0;
    if (model.symmetric()) {
        const double t2 = t * t;
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            prod /= 1.0 + t2 / (a[k] * a[k]);
            if (!b.empty()) prod *= 1.0 + t2 / (b[k] * b[k]);
        }
        value = prod;
    } else {
        const cplx it(0.0, t);
        for (std::size_t k = 0; k < n; ++k) {
            value /= 1.0 - it / a[k];
            if (!b.empty()) value *= 1.0 - it / b[k];
        }
    }
    if (model.h_kind() == EntireQuotientModel::HKind::Evaluator) {
        const auto& hc = model.parts().h_complex;
        if (!hc) throw std::logic_error("model " + model.kind() + " has no complex h evaluator");
        value *= hc(cplx(0.0, t));
    }
    if (model.translation() != 0.0) value *= std::polar(1.0, t * model.translation());
    return value;
}

double residue_coeff(const EntireQuotientModel& model, std::size_t n) {
    if (n == 0) throw std::out_of_range("residue_coeff: index is 1-based");
    const auto& parts = model.parts();
    if (model.finite_factors() > 0 && n > model.finite_factors()) return 0.0;
    if (parts.coefficient) return parts.coefficient(n);
    const double gd = model.g_derivative_at(n);
    if (!std::isfinite(gd) || std::abs(gd) < std::numeric_limits<double>::min()) {
        fail(ErrorKind::ZeroDerivative, "g'(a_" + std::to_string(n) + ") vanishes for model " + model.kind());
    }
    return -model.h_at(n) / gd;
}

GeneralizedDirichletSeries density_series(const EntireQuotientModel& model, std::size_t n_terms) {
    if (n_terms == 0) throw std::invalid_argument("density_series: n_terms must be positive");
    std::size_t limit = n_terms;
    if (model.finite_factors() > 0) limit = std::min(limit, model.finite_factors());
    const double atom = atom_mass(model);
    auto gen = [model](std::size_t k) { return DirichletTerm{residue_coeff(model, k), model.g_zeros().at(k)}; };
    return GeneralizedDirichletSeries(std::move(gen), model.support(), atom, limit);
}

double atom_mass(const EntireQuotientModel& model, double tol) {
    if (model.h_kind() == EntireQuotientModel::HKind::One || model.no_atom_at_zero()) return 0.0;
    if (model.h_kind() == EntireQuotientModel::HKind::Evaluator) {
        throw std::invalid_argument("atom_mass needs h = 1 or h given by its zeros");
    }
    const int p = power(model);
    const auto& g = model.g_zeros();
    const auto& h = *model.h_zeros();
    const double floor_log = std::log(tol);

    CompensatedSum log_sum;
    std::size_t done = 0;
    auto extend_to = [&](std::size_t n) {
        const auto a = g.prefix(n);
        const auto b = h.prefix(n);
        for (std::size_t k = done; k < n; ++k) log_sum.add(p * std::log(a[k] / b[k]));
        done = n;
        return log_sum.value();
    };

    if (model.finite_factors() > 0) return std::exp(extend_to(model.finite_factors()));

    constexpr std::size_t kMax = std::size_t{1} << 20;
    std::vector<double> partial;  // S_N at N = 64, 128, ...
    double last_estimate = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 64; n <= kMax; n *= 2) {
        partial.push_back(extend_to(n));
        if (partial.back() < floor_log) return 0.0;
        if (partial.size() < 3) continue;
        const double s0 = partial[partial.size() - 3];
        const double s1 = partial[partial.size() - 2];
        const double s2 = partial.back();
        const double d1 = s1 - s0;
        const double d2 = s2 - s1;
        const double estimate = d2 == d1 || d2 == 0.0 ? s2 : s2 - d2 * d2 / (d2 - d1);
        if (estimate < floor_log) return 0.0;
        if (std::isfinite(last_estimate) && std::abs(std::exp(estimate) - std::exp(last_estimate)) <= tol) {
            return std::exp(estimate);
        }
        last_estimate = estimate;
    }
    fail(ErrorKind::Inconclusive, "log-product of a_n/b_n neither converged nor diverged for " + model.kind());
}

ContinuityReport continuity_diagnostics(const EntireQuotientModel& model, double r_max, double quad_tol) {
    if (!(r_max > 1.0)) throw std::invalid_argument("continuity_diagnostics: r_max must exceed 1");

    // n(r)/r^rho at r_max, backing off when the zeros cannot be generated that far.
    auto density_of = [r_max](const ZeroSequence& z, double& used_r) {
        double r = r_max;
        while (true) {
            try {
                const double n = static_cast<double>(z.counting(r, std::size_t{1} << 18));
                used_r = r;
                return n / std::pow(r, z.order());
            } catch (const NumericError& e) {
                if (e.kind() != ErrorKind::Inconclusive || r < 16.0) throw;
                r = std::sqrt(r);
            }
        }
    };

    ContinuityReport report{};
    std::ostringstream ev;
    double rg = 0.0;
    report.delta = density_of(model.g_zeros(), rg);
    ev << "delta=" << report.delta << " at r=" << rg << " (order " << model.g_zeros().order() << ")";
    if (model.h_zeros()) {
        double rh = 0.0;
        report.delta_prime = density_of(*model.h_zeros(), rh);
        ev << "; delta'=" << *report.delta_prime << " at r=" << rh;
    }

    if (model.h_kind() == EntireQuotientModel::HKind::One) {
        report.verdict = Verdict::ContinuousDensity;
        ev << "; h=1: product of exponential or Laplace factors";
    } else if (model.no_atom_at_zero()) {
        report.verdict = Verdict::AbsolutelyContinuous;
        ev << "; no atom at 0 by construction";
    } else if (report.delta_prime && model.h_zeros()->order() == model.g_zeros().order() && report.delta > 0.0 &&
               *report.delta_prime > 0.0 && *report.delta_prime < report.delta) {
        report.verdict = Verdict::ContinuousDensity;
        ev << "; delta' < delta";
    } else if (model.has_closed_phi()) {
        report.verdict = Verdict::Unknown;
        for (double t = 1.0; t <= 1e8; t *= 2.0) {
            const double tail = std::abs(model.closed_phi(t)) * t;
            if (tail <= quad_tol && std::abs(model.closed_phi(2.0 * t)) * 2.0 * t <= tail) {
                report.verdict = Verdict::ContinuousDensity;
                ev << "; |phi(t)| t <= " << quad_tol << " from t=" << t;
                break;
            }
        }
        if (report.verdict == Verdict::Unknown) ev << "; |phi| integrability not established";
    } else {
        report.verdict = Verdict::Unknown;
        ev << "; no criterion applies";
    }
    report.evidence = ev.str();
    return report;
}

double partial_mean(const EntireQuotientModel& model, std::size_t n_factors) {
    if (model.symmetric()) return 0.0;
    std::size_t n = n_factors;
    if (model.finite_factors() > 0) n = std::min(n, model.finite_factors());
    const auto a = model.g_zeros().prefix(n);
    CompensatedSum sum;
    for (double x : a) sum.add(1.0 / x);
    if (model.h_zeros()) {
        for (double x : model.h_zeros()->prefix(n)) sum.add(-1.0 / x);
    }
    return sum.value();
}

double partial_variance(const EntireQuotientModel& model, std::size_t n_factors) {
    std::size_t n = n_factors;
    if (model.finite_factors() > 0) n = std::min(n, model.finite_factors());
    const auto a = model.g_zeros().prefix(n);
    CompensatedSum sum;
    for (double x : a) sum.add(1.0 / (x * x));
    if (model.h_zeros()) {
        for (double x : model.h_zeros()->prefix(n)) sum.add(-1.0 / (x * x));
    }
    return (model.symmetric() ? 2.0 : 1.0) * sum.value();
}

nlohmann::json to_json(const EntireQuotientModel& model) {
    return {
        {"kind", model.kind()},
        {"params", model.params()},
        {"support", std::string(to_string(model.support()))},
        {"n_zeros_cached", model.g_zeros().cached()},
    };
}

EntireQuotientModel finite_model(std::vector<double> a, std::vector<double> b, Support support) {
    if (a.empty()) throw std::invalid_argument("finite_model: no zeros");
    if (!b.empty() && b.size() != a.size()) throw std::invalid_argument("finite_model: a and b differ in length");
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(a[i] > a[i - 1])) throw std::invalid_argument("finite_model: a must be strictly increasing");
    }
    const double top = 2.0 * std::max(a.back(), b.empty() ? 0.0 : b.back());
    const std::size_t n = a.size();
    auto tail = [top, n](std::size_t k) { return top * static_cast<double>(k - n); };

    EntireQuotientModel::Parts parts(ZeroSequence::padded(a, tail, 0.0, "a"));
    parts.kind = "finite_mixture";
    parts.params = {{"a", a}, {"b", b}};
    parts.support = support;
    parts.finite_factors = n;
    if (!b.empty()) {
        parts.h_kind = EntireQuotientModel::HKind::Zeros;
        parts.h_zeros = ZeroSequence::padded(b, tail, 0.0, "b");
    }
    return EntireQuotientModel(std::move(parts));
}

}  // namespace cfinv
