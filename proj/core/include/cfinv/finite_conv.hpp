#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfinv/dirichlet_series.hpp"

namespace cfinv {

/// Density of a finite convolution, sum_i w_i exp(-lambda_i x) on x >= 0
/// (Hypoexponential) or sum_i w_i exp(-lambda_i |x|) on the line
/// (LaplaceConvolution).
struct ConvolutionClosedForm {
    enum class Kind { Hypoexponential, LaplaceConvolution };

    std::vector<double> weights;
    std::vector<double> rates;
    Kind kind;

    double density(double x) const;
    GeneralizedDirichletSeries as_series() const;
};

/// Exp(l_1) * ... * Exp(l_n) for strictly increasing positive rates.
/// Throws DegenerateRates when two rates are closer than 1e-8 relative;
/// std::invalid_argument for empty, non-positive or unsorted input.
ConvolutionClosedForm exp_conv(std::span<const double> rates);

/// Laplace(l_1) * ... * Laplace(l_n), each with density (l/2) exp(-l|x|).
ConvolutionClosedForm laplace_conv(std::span<const double> rates);

/// Law with characteristic function prod (1 - it/b_i) / (1 - it/a_i): an atom
/// prod a_i/b_i at 0 plus an exponential series on x > 0.
struct MixtureLaw {
    double atom;
    GeneralizedDirichletSeries series;
};

/// Throws OrderingViolation unless a_i < b_i, CollidingZeros if some a_i
/// equals some b_j, DegenerateRates for (near) repeated a_i.
MixtureLaw mixture_law(std::span<const double> a, std::span<const double> b);

/// Symmetric counterpart prod (1 + t^2/b_i^2) / (1 + t^2/a_i^2). The atom is
/// prod a_i^2/b_i^2 and the series lives on the whole line.
MixtureLaw symmetric_mixture_law(std::span<const double> a, std::span<const double> b);

/// Pointwise density used by brute_convolve. For half-line supports, pdf(0)
/// must return the limit from inside the support.
struct SupportedDensity {
    std::function<double(double)> pdf;
    Support support;
};

struct ConvolutionEstimate {
    double value;
    double error;  // Romberg difference between the two finest levels
};

/// Density of the convolution of `densities` at x by iterated trapezoidal
/// convolution on a grid through 0 and x, at steps h, h/2, h/4 followed by
/// Romberg extrapolation. Half-line-only products are integrated exactly over
/// [0, x]; anything with mass on both sides is truncated to [-half_width,
/// half_width]. Throws GridTooCoarse when the error estimate exceeds tol.
ConvolutionEstimate brute_convolve(std::span<const SupportedDensity> densities, double x, double grid_step,
                                   double half_width, double tol = 1e-6);

/// Same, sharing grid tabulations between points that land on a common grid.
std::vector<ConvolutionEstimate> brute_convolve(std::span<const SupportedDensity> densities,
                                                std::span<const double> xs, double grid_step, double half_width,
                                                double tol = 1e-6);

nlohmann::json to_json(const ConvolutionClosedForm& form);

}  // namespace cfinv
