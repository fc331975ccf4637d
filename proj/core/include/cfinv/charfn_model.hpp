#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "cfinv/dirichlet_series.hpp"
#include "cfinv/zero_sequence.hpp"

namespace cfinv {

using cplx = std::complex<double>;

/// phi(t) = h(it) / g(it) for entire g, h with simple positive zeros
/// a_1 < a_2 < ... (of g) and b_1 < b_2 < ... (of h), a_n < b_n.
///
/// Half-line models describe the law prod (1 - it/b_n) / (1 - it/a_n);
/// symmetric models prod (1 + t^2/b_n^2) / (1 + t^2/a_n^2). A
/// NegativeHalfLine model stores the zeros |a_n| of its reflection: g, h,
/// phi and samples all refer to Y = -X, and only the support flag records
/// that the law itself lives on x < 0.
///
/// A model may also carry a translation tau; the modelled variable is then
/// tau + Y and phi picks up the factor e^{i t tau}.
class EntireQuotientModel {
public:
    enum class HKind { One, Zeros, Evaluator };

    struct Parts {
        explicit Parts(ZeroSequence g) : g_zeros(std::move(g)) {}

        std::string kind;           // catalog name, for descriptors
        nlohmann::json params = nlohmann::json::object();
        ZeroSequence g_zeros;  // a_n (|a_n| for NegativeHalfLine)
        Support support = Support::PositiveHalfLine;
        HKind h_kind = HKind::One;
        std::optional<ZeroSequence> h_zeros;          // HKind::Zeros
        std::function<double(double)> h_eval;         // h on the reals (Zeros: optional shortcut)
        std::function<cplx(cplx)> h_complex;          // HKind::Evaluator, for phi_partial
        std::function<double(double)> g_eval;         // g on the reals, for finite differences
        std::function<double(double)> g_derivative;   // analytic g'(a_n)
        std::function<double(std::size_t)> coefficient;  // direct c_n, overrides -h/g'
        std::function<cplx(double)> closed_phi;
        bool no_atom_at_zero = false;  // mu({0}) = 0, set only where known
        std::size_t finite_factors = 0;  // > 0: factors beyond this index are exactly 1
        double translation = 0.0;
    };

    explicit EntireQuotientModel(Parts parts);

    const std::string& kind() const noexcept { return p_.kind; }
    const nlohmann::json& params() const noexcept { return p_.params; }
    const ZeroSequence& g_zeros() const noexcept { return p_.g_zeros; }
    const std::optional<ZeroSequence>& h_zeros() const noexcept { return p_.h_zeros; }
    Support support() const noexcept { return p_.support; }
    HKind h_kind() const noexcept { return p_.h_kind; }
    bool symmetric() const noexcept { return p_.support == Support::SymmetricLine; }
    bool no_atom_at_zero() const noexcept { return p_.no_atom_at_zero; }
    std::size_t finite_factors() const noexcept { return p_.finite_factors; }
    double translation() const noexcept { return p_.translation; }
    bool has_closed_phi() const noexcept { return static_cast<bool>(p_.closed_phi); }

    /// Direct evaluation of phi, including the translation factor.
    /// Throws std::logic_error when the model has none.
    cplx closed_phi(double t) const;

    /// g'(a_n): analytic when supplied, else central differences of g with
    /// step a_n * 1e-6, else the canonical product over the zeros.
    double g_derivative_at(std::size_t n) const;
    /// h(a_n).
    double h_at(std::size_t n) const;

    const Parts& parts() const noexcept { return p_; }

private:
    Parts p_;
};

enum class Verdict { ContinuousDensity, AbsolutelyContinuous, Unknown };
std::string_view to_string(Verdict v) noexcept;

struct ContinuityReport {
    double delta;                       // lim n_g(r) / r^rho
    std::optional<double> delta_prime;  // same for h, when h has zeros
    Verdict verdict;
    std::string evidence;
};

/// Partial product over the first n_factors factors (times e^{it tau}).
cplx phi_partial(const EntireQuotientModel& model, double t, std::size_t n_factors);

/// c_n = -h(a_n) / g'(a_n), or the model's own coefficient formula.
/// Throws ZeroDerivative when g'(a_n) vanishes to machine precision.
double residue_coeff(const EntireQuotientModel& model, std::size_t n);

/// Series sum c_n exp(-a_n |x|) with the model's support and atom, terms
/// produced lazily. A finite n_terms truncates the series to that many terms;
/// models with finitely many nontrivial factors stop after them.
GeneralizedDirichletSeries density_series(const EntireQuotientModel& model,
                                          std::size_t n_terms = GeneralizedDirichletSeries::kUnbounded);

/// prod a_n/b_n (squared for symmetric models); 0 when h = 1, when the model
/// is flagged atom-free, or when the log-product falls below ln(tol).
/// Throws Inconclusive if neither convergence nor divergence is detected.
double atom_mass(const EntireQuotientModel& model, double tol = 1e-12);

/// delta and delta' from the zero-counting functions at r_max, and a verdict:
/// h = 1 gives a continuous density; otherwise the atom-free flag gives
/// absolute continuity; otherwise delta' < delta gives a continuous density;
/// otherwise integrability of |phi| is tested through closed_phi.
ContinuityReport continuity_diagnostics(const EntireQuotientModel& model, double r_max = 1e8,
                                        double quad_tol = 1e-6);

/// Mean and variance of the (untranslated) law: sum 1/a - 1/b and
/// sum 1/a^2 - 1/b^2 over the first n_factors factors (symmetric models:
/// mean 0, variance 2 sum 1/a^2 - 1/b^2).
double partial_mean(const EntireQuotientModel& model, std::size_t n_factors);
double partial_variance(const EntireQuotientModel& model, std::size_t n_factors);

/// {kind, params, support, n_zeros_cached}
nlohmann::json to_json(const EntireQuotientModel& model);

/// Half-line or symmetric model with finitely many nontrivial factors, the
/// lists padded by identical tails a_n = b_n = tail(n). b empty means h = 1.
EntireQuotientModel finite_model(std::vector<double> a, std::vector<double> b, Support support);

}  // namespace cfinv
