#include "cfinv/dirichlet_series.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace cfinv {

std::string_view to_string(Support support) noexcept {
    switch (support) {
        case Support::PositiveHalfLine: return "PositiveHalfLine";
        case Support::NegativeHalfLine: return "NegativeHalfLine";
        case Support::SymmetricLine: return "SymmetricLine";
    }
    return "PositiveHalfLine";
}

Support support_from_string(std::string_view name) {
    if (name == "PositiveHalfLine") return Support::PositiveHalfLine;
    if (name == "NegativeHalfLine") return Support::NegativeHalfLine;
    if (name == "SymmetricLine") return Support::SymmetricLine;
    throw std::invalid_argument("unknown support: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Term storage

struct GeneralizedDirichletSeries::Store {
    std::mutex mutex;
    std::vector<DirichletTerm> terms;
    TermGenerator generator;  // empty for finite series

    void push_checked(const DirichletTerm& t) {
        const double prev = terms.empty() ? 0.0 : terms.back().exponent;
        if (!(std::isfinite(t.exponent) && t.exponent > prev)) {
            throw std::invalid_argument("Dirichlet exponents must be positive and strictly increasing (term " +
                                        std::to_string(terms.size() + 1) + ")");
        }
        if (!std::isfinite(t.coefficient)) {
            throw std::invalid_argument("non-finite Dirichlet coefficient at term " + std::to_string(terms.size() + 1));
        }
        terms.push_back(t);
    }
};

GeneralizedDirichletSeries::GeneralizedDirichletSeries(std::vector<DirichletTerm> terms, Support support,
                                                       double atom_mass)
    : store_(std::make_shared<Store>()), support_(support), atom_mass_(atom_mass), limit_(terms.size()) {
    if (!(atom_mass >= 0.0 && atom_mass <= 1.0)) throw std::invalid_argument("atom mass must lie in [0,1]");
    if (terms.empty()) throw std::invalid_argument("a Dirichlet series needs at least one term");
    for (const auto& t : terms) store_->push_checked(t);
}

GeneralizedDirichletSeries::GeneralizedDirichletSeries(TermGenerator generator, Support support, double atom_mass,
                                                       std::size_t term_limit)
    : store_(std::make_shared<Store>()), support_(support), atom_mass_(atom_mass), limit_(term_limit) {
    if (!(atom_mass >= 0.0 && atom_mass <= 1.0)) throw std::invalid_argument("atom mass must lie in [0,1]");
    if (!generator) throw std::invalid_argument("empty term generator");
    if (term_limit == 0) throw std::invalid_argument("term_limit must be positive");
    store_->generator = std::move(generator);
}

GeneralizedDirichletSeries::GeneralizedDirichletSeries(std::shared_ptr<Store> store, Support support,
                                                       double atom_mass, std::size_t limit)
    : store_(std::move(store)), support_(support), atom_mass_(atom_mass), limit_(limit) {}

std::vector<DirichletTerm> GeneralizedDirichletSeries::terms(std::size_t first, std::size_t count) const {
    if (first == 0) throw std::out_of_range("term index is 1-based");
    if (first > limit_) return {};
    const std::size_t last = std::min(limit_, first + count - 1);  // inclusive
    std::lock_guard lock(store_->mutex);
    auto& cache = store_->terms;
    while (cache.size() < last) store_->push_checked(store_->generator(cache.size() + 1));
    return {cache.begin() + static_cast<std::ptrdiff_t>(first - 1), cache.begin() + static_cast<std::ptrdiff_t>(last)};
}

std::vector<DirichletTerm> GeneralizedDirichletSeries::terms(std::size_t n) const {
    if (n == 0) return {};
    return terms(1, n);
}

DirichletTerm GeneralizedDirichletSeries::term(std::size_t k) const {
    auto one = terms(k, 1);
    if (one.empty()) throw std::out_of_range("term index beyond the series length");
    return one.front();
}

GeneralizedDirichletSeries GeneralizedDirichletSeries::reflected() const {
    Support mirrored = support_;
    if (support_ == Support::PositiveHalfLine) mirrored = Support::NegativeHalfLine;
    if (support_ == Support::NegativeHalfLine) mirrored = Support::PositiveHalfLine;
    return GeneralizedDirichletSeries(store_, mirrored, atom_mass_, limit_);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr std::size_t kChunk = 64;
constexpr double kUnderflowExponent = 740.0;

/// Walks the terms in chunks so the memo lock is taken once per chunk.
class TermCursor {
public:
    explicit TermCursor(const GeneralizedDirichletSeries& s) : series_(s) {}

    /// Term k (1-based) or nullptr past the end.
    const DirichletTerm* get(std::size_t k) {
        if (k > series_.term_limit()) return nullptr;
        if (k < base_ || k >= base_ + chunk_.size()) {
            base_ = k;
            chunk_ = series_.terms(k, kChunk);
            if (chunk_.empty()) return nullptr;
        }
        return &chunk_[k - base_];
    }

private:
    const GeneralizedDirichletSeries& series_;
    std::vector<DirichletTerm> chunk_;
    std::size_t base_ = 1;
};

/// Recent nonzero terms, newest last.
class History {
public:
    void push(double v) {
        if (size_ < buf_.size()) {
            buf_[size_++] = v;
        } else {
            std::rotate(buf_.begin(), buf_.begin() + 1, buf_.end());
            buf_.back() = v;
        }
    }
    std::size_t size() const { return size_; }
    double from_end(std::size_t i) const { return buf_[size_ - 1 - i]; }

private:
    std::array<double, 6> buf_{};
    std::size_t size_ = 0;
};

bool alternating_decreasing(const History& h) {
    if (h.size() < 4) return false;
    for (std::size_t i = 0; i + 1 < 4; ++i) {
        const double newer = h.from_end(i);
        const double older = h.from_end(i + 1);
        if (!(newer * older < 0.0) || !(std::abs(newer) < std::abs(older))) return false;
    }
    return true;
}

double geometric_tail(const History& h) {
    if (h.size() < 6) return std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    for (std::size_t i = 0; i < 5; ++i) ratio = std::max(ratio, std::abs(h.from_end(i) / h.from_end(i + 1)));
    if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
    return std::abs(h.from_end(0)) * ratio / (1.0 - ratio);
}

double term_value(const DirichletTerm& t, double x, bool survival) {
    const double arg = t.exponent * x;
    if (arg > kUnderflowExponent || t.coefficient == 0.0) return 0.0;
    const double c = survival ? t.coefficient / t.exponent : t.coefficient;
    return c * std::exp(-arg);
}

EvalResult sum_series(const GeneralizedDirichletSeries& series, double x, double tol, std::size_t max_terms,
                      bool survival) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    TermCursor cursor(series);
    CompensatedSum sum;
    History history;
    // Reported bounds also cover rounding in the terms and their sum.
    double magnitude = 0.0;
    auto rounding = [&] { return 4.0 * std::numeric_limits<double>::epsilon() * magnitude; };
    std::size_t k = 0;
    while (true) {
        const DirichletTerm* t = cursor.get(k + 1);
        if (t == nullptr) return {sum.value(), rounding(), std::max<std::size_t>(k, 1)};
        ++k;
        const double v = term_value(*t, x, survival);
        sum.add(v);
        magnitude += std::abs(v);
        if (v != 0.0) history.push(v);

        // Once exp(-lambda x) underflows, the later (larger) exponents underflow as well.
        if (t->exponent * x > kUnderflowExponent) return {sum.value(), rounding(), k};

        double bound = std::numeric_limits<double>::infinity();
        if (alternating_decreasing(history)) {
            // First omitted nonzero term.
            for (std::size_t j = k + 1; j <= k + 8; ++j) {
                const DirichletTerm* next = cursor.get(j);
                if (next == nullptr) {
                    bound = 0.0;
                    break;
                }
                const double nv = term_value(*next, x, survival);
                if (nv != 0.0) {
                    bound = std::abs(nv);
                    break;
                }
            }
            cursor.get(k + 1);
        } else {
            bound = geometric_tail(history);
        }
        if (bound <= tol) return {sum.value(), bound + rounding(), k};
        if (k >= max_terms) {
            fail(ErrorKind::BoundNotMet, "truncation bound " + std::to_string(bound) + " above tolerance after " +
                                             std::to_string(k) + " terms at x=" + std::to_string(x));
        }
    }
}

double point_on_support(const GeneralizedDirichletSeries& series, double x) {
    if (!std::isfinite(x) || x == 0.0) fail(ErrorKind::UnsupportedPoint, "series densities are not evaluated at x=0");
    switch (series.support()) {
        case Support::PositiveHalfLine:
            if (x < 0.0) fail(ErrorKind::UnsupportedPoint, "x<0 outside a positive half-line support");
            break;
        case Support::NegativeHalfLine:
            if (x > 0.0) fail(ErrorKind::UnsupportedPoint, "x>0 outside a negative half-line support");
            break;
        case Support::SymmetricLine: break;
    }
    return std::abs(x);
}

}  // namespace

EvalResult eval_density(const GeneralizedDirichletSeries& series, double x, double tol, std::size_t max_terms) {
    return sum_series(series, point_on_support(series, x), tol, max_terms, false);
}

EvalResult eval_survival(const GeneralizedDirichletSeries& series, double x, double tol, std::size_t max_terms) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::UnsupportedPoint, "survival needs x>0");
    return sum_series(series, x, tol, max_terms, true);
}

double total_mass(const GeneralizedDirichletSeries& series, double tol) {
    const double sides = series.support() == Support::SymmetricLine ? 2.0 : 1.0;
    if (series.finite()) {
        CompensatedSum sum;
        for (const auto& t : series.terms(series.term_limit())) sum.add(t.coefficient / t.exponent);
        return series.atom_mass() + sides * sum.value();
    }

    // Survival at x_j = x0 / 2^j with two Richardson steps (removing the x and
    // x^2 terms of its expansion at 0+). Higher-order polynomial
    // extrapolation misbehaves for laws whose survival is flat at 0.
    const double x0 = 1.0 / series.term(1).exponent;
    constexpr int kLevels = 40;
    double s_prev = 0.0;
    double r_prev = 0.0;
    double q_prev = 0.0;
    double last_change = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kLevels; ++j) {
        const double s_j = eval_survival(series, std::ldexp(x0, -j), tol * 1e-3, 5'000'000).value;
        if (j >= 1) {
            const double r_j = 2.0 * s_j - s_prev;
            if (j >= 2) {
                const double q_j = (4.0 * r_j - r_prev) / 3.0;
                if (j >= 3) {
                    last_change = std::abs(q_j - q_prev);
                    if (last_change <= tol) return series.atom_mass() + sides * q_j;
                }
                q_prev = q_j;
            }
            r_prev = r_j;
        }
        s_prev = s_j;
    }
    fail(ErrorKind::BoundNotMet,
         "survival extrapolation to 0+ did not settle (last change " + std::to_string(last_change) + ")");
}

AbscissaDiagnostics abscissas(const GeneralizedDirichletSeries& series, std::size_t n_terms) {
    if (n_terms < 10) throw std::invalid_argument("abscissas needs at least 10 terms");
    const auto terms = series.terms(n_terms);
    const std::size_t n = terms.size();

    std::vector<double> partial(n);
    std::vector<double> partial_abs(n);
    CompensatedSum s;
    CompensatedSum sa;
    for (std::size_t i = 0; i < n; ++i) {
        s.add(terms[i].coefficient);
        sa.add(std::abs(terms[i].coefficient));
        partial[i] = s.value();
        partial_abs[i] = sa.value();
    }

    // Classical formulas: if sum a_n diverges, sigma = limsup ln|A(n)| / lambda_n;
    // otherwise sigma = limsup ln|sum_{k>n} a_k| / lambda_n, with the limit
    // approximated by the last partial sum.
    auto estimate = [&](const std::vector<double>& sums) {
        const double last = sums[n - 1];
        const double mid = sums[n / 2 - 1];
        const bool divergent = std::abs(last) > 1.5 * std::abs(mid) + 1e-300 ||
                               std::abs(last - mid) > 1e-3 * std::max(1.0, std::abs(last));
        double best = -std::numeric_limits<double>::infinity();
        if (divergent) {
            for (std::size_t i = n - 4; i < n; ++i) {
                const double mag = std::abs(sums[i]);
                if (mag > 0.0) best = std::max(best, std::log(mag) / terms[i].exponent);
            }
            return best;
        }
        for (std::size_t i = n / 4; i < n / 2; ++i) {
            const double rest = std::abs(last - sums[i]);
            if (rest > 0.0) best = std::max(best, std::log(rest) / terms[i].exponent);
        }
        return best;
    };

    AbscissaDiagnostics out{};
    out.sigma_c_estimate = estimate(partial);
    out.sigma_a_estimate = std::max(estimate(partial_abs), out.sigma_c_estimate);

    // limsup ln n / lambda_n: the last value when the tail window is
    // non-increasing, else the window maximum.
    bool monotone = true;
    double window_max = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = n / 2; i < n; ++i) {
        const double q = std::log(static_cast<double>(i + 1)) / terms[i].exponent;
        if (q > prev) monotone = false;
        prev = q;
        window_max = std::max(window_max, q);
    }
    out.gap_bound_estimate = monotone ? std::log(static_cast<double>(n)) / terms[n - 1].exponent : window_max;
    return out;
}

nlohmann::json to_json(const GeneralizedDirichletSeries& series, std::size_t max_terms) {
    const auto terms = series.terms(max_terms);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : terms) rows.push_back({{"c", t.coefficient}, {"lambda", t.exponent}});
    return {
        {"support", std::string(to_string(series.support()))},
        {"atom_mass", series.atom_mass()},
        {"terms", rows},
        {"truncated", terms.size() < series.term_limit()},
    };
}

GeneralizedDirichletSeries series_from_json(const nlohmann::json& doc) {
    std::vector<DirichletTerm> terms;
    for (const auto& row : doc.at("terms")) {
        terms.push_back({row.at("c").get<double>(), row.at("lambda").get<double>()});
    }
    return GeneralizedDirichletSeries(std::move(terms), support_from_string(doc.at("support").get<std::string>()),
                                      doc.value("atom_mass", 0.0));
}

}  // namespace cfinv
