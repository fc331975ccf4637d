#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cfinv {

/// Where a law lives. Series on the negative half-line are evaluated at x < 0
/// through |x|; symmetric series are even by construction.
enum class Support { PositiveHalfLine, NegativeHalfLine, SymmetricLine };

std::string_view to_string(Support support) noexcept;
Support support_from_string(std::string_view name);

struct DirichletTerm {
    double coefficient;  // c_n
    double exponent;     // lambda_n > 0, strictly increasing in n
};

/// sum_n c_n exp(-lambda_n |x|) on its support plus an atom at 0.
///
/// Terms are either a finite list or produced on demand by a generator and
/// memoized; copies share the memo, and extension is serialized.
class GeneralizedDirichletSeries {
public:
    using TermGenerator = std::function<DirichletTerm(std::size_t k)>;  // 1-based
    static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

    GeneralizedDirichletSeries(std::vector<DirichletTerm> terms, Support support, double atom_mass = 0.0);
    GeneralizedDirichletSeries(TermGenerator generator, Support support, double atom_mass = 0.0,
                               std::size_t term_limit = kUnbounded);

    Support support() const noexcept { return support_; }
    double atom_mass() const noexcept { return atom_mass_; }
    /// Number of terms available; kUnbounded for lazily generated series.
    std::size_t term_limit() const noexcept { return limit_; }
    bool finite() const noexcept { return limit_ != kUnbounded; }

    DirichletTerm term(std::size_t k) const;
    /// Up to `n` leading terms (fewer when the series is shorter).
    std::vector<DirichletTerm> terms(std::size_t n) const;
    /// Terms k in [first, first + count), clipped to the available range.
    std::vector<DirichletTerm> terms(std::size_t first, std::size_t count) const;

    /// Same terms with support mirrored (PositiveHalfLine <-> NegativeHalfLine).
    GeneralizedDirichletSeries reflected() const;

private:
    struct Store;
    GeneralizedDirichletSeries(std::shared_ptr<Store> store, Support support, double atom_mass, std::size_t limit);

    std::shared_ptr<Store> store_;
    Support support_;
    double atom_mass_;
    std::size_t limit_;
};

struct EvalResult {
    double value;
    double truncation_bound;  // >= 0
    std::size_t terms_used;   // >= 1
};

struct AbscissaDiagnostics {
    double sigma_c_estimate;
    double sigma_a_estimate;
    double gap_bound_estimate;  // estimate of limsup ln(n) / lambda_n
};

/// Density at x != 0 inside the support. The truncation bound is the first
/// omitted term for eventually alternating tails, otherwise a geometric tail
/// extrapolated from the last five nonzero term ratios.
/// Throws UnsupportedPoint outside the support and BoundNotMet when
/// `max_terms` terms do not certify `tol` (typical close to 0).
EvalResult eval_density(const GeneralizedDirichletSeries& series, double x, double tol = 1e-12,
                        std::size_t max_terms = 200000);

/// sum_n (c_n / lambda_n) exp(-lambda_n x) for x > 0: the mass beyond |x| on
/// the support side (P(X > x) for half-line and symmetric laws).
EvalResult eval_survival(const GeneralizedDirichletSeries& series, double x, double tol = 1e-12,
                         std::size_t max_terms = 200000);

/// atom + sum c_n / lambda_n (twice the sum for symmetric series). Infinite
/// series are summed as the limit of eval_survival at 0+, which is the value
/// the law assigns even when sum c_n / lambda_n itself is only Abel summable.
double total_mass(const GeneralizedDirichletSeries& series, double tol = 1e-10);

/// Heuristic abscissas from the first n_terms terms (n_terms >= 10).
AbscissaDiagnostics abscissas(const GeneralizedDirichletSeries& series, std::size_t n_terms);

/// {support, atom_mass, terms: [{c, lambda}...], truncated}
nlohmann::json to_json(const GeneralizedDirichletSeries& series, std::size_t max_terms = 64);
GeneralizedDirichletSeries series_from_json(const nlohmann::json& doc);

}  // namespace cfinv
