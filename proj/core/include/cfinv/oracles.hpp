#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "cfinv/charfn_model.hpp"

namespace cfinv {

using CharFn = std::function<std::complex<double>(double)>;

struct QuadratureParams {
    double t_max = 200.0;
    double tol = 1e-9;
    std::size_t max_panels = std::size_t{1} << 18;
};

enum class OracleKind { GilPelaez, GaussianSum, BruteConvolution, MonteCarlo };
std::string_view to_string(OracleKind kind) noexcept;

struct OracleReport {
    double point;
    double series_value;
    double oracle_value;
    double abs_diff;
    OracleKind kind;
};

OracleReport make_report(double point, double series_value, double oracle_value, OracleKind kind);

/// Rows "point,series,oracle,diff,kind" under a header, %.12e, LF endings.
void write_csv(std::ostream& out, std::span<const OracleReport> rows);

/// (1/pi) int_0^{t_max} Re(e^{-itx} phi(t)) dt by adaptive Simpson on panels
/// no wider than pi/(4|x|), plus the first integration-by-parts term of the
/// tail beyond t_max. The neglected remainder is estimated by |phi(t_max)| t_max
/// at x = 0 and by |phi'(t_max)| / x^2 otherwise; TailTooHeavy is thrown when
/// it exceeds tol.
double gil_pelaez_density(const CharFn& phi, double x, const QuadratureParams& q);

/// Smallest power of two t with |phi(t)| t <= tol (capped at 2^24).
double suggest_t_max(const CharFn& phi, double tol);

/// Poisson-summed form of the sinh-ratio density on y > 0:
/// (v/u) sum_{k=-K..K} d_k / (sqrt(2 pi) y^{3/2}) exp(-d_k^2 / (2y)),
/// d_k = v - u + 2kv.
double gaussian_sum_density(double u, double v, double y, int k_range);

/// Number of factors used by the samplers: the smallest N (at most
/// n_factors) whose neglected mean is below 1e-4 of the total mean, the
/// latter from phi'(0) when a closed form exists and from a power-law fit of
/// the factor means otherwise. Throws TailMeanUnbounded if N would exceed
/// n_factors.
std::size_t sampling_factors(const EntireQuotientModel& model, std::size_t n_factors);

/// Samples of sum_{n<=N} X_n with X_n equal to 0 with probability a_n/b_n
/// and Exp(a_n) otherwise (of the untranslated, reflected variable for
/// negative half-line models). Deterministic in seed; samples are produced in
/// blocks of 4096, block i drawing from a generator seeded by (seed, i).
std::vector<double> sample_halfline(const EntireQuotientModel& model, std::size_t n_factors,
                                    std::size_t n_samples, std::uint64_t seed);

/// sqrt(Y) T with Y drawn from the half-line law with zeros a_n^2 (and
/// b_n^2) and T centered normal with variance 2.
std::vector<double> sample_symmetric_bondesson(const EntireQuotientModel& model, std::size_t n_factors,
                                               std::size_t n_samples, std::uint64_t seed);

/// Direct sums of the symmetric factors: 0 with probability a_n^2/b_n^2,
/// otherwise Laplace(a_n).
std::vector<double> sample_symmetric_factorwise(const EntireQuotientModel& model, std::size_t n_factors,
                                                std::size_t n_samples, std::uint64_t seed);

struct KsResult {
    double statistic;
    double critical_1pct;  // 1.63 / sqrt(n)
    double critical_5pct;  // 1.36 / sqrt(n)
    bool pass_1pct() const { return statistic < critical_1pct; }
};

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

struct KsTwoSample {
    double statistic;
    double p_value;  // asymptotic Kolmogorov distribution
};

KsTwoSample ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace cfinv
