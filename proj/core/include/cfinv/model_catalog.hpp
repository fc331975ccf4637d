#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfinv/charfn_model.hpp"

namespace cfinv {

/// Heston special case with 2ab = c^2 and zero initial variance. a and c are
/// taken as already scaled by the horizon; t only enters the shift
/// x0 - corr c t / 2.
struct HestonParams {
    double a = 2.0;
    double c = 1.0;
    double corr = 1.0;
    double x0 = 0.0;
    double t = 1.0;

    double shift() const { return x0 - corr * c * t / 2.0; }
};

/// g(z) = cos(zT), h = 1, symmetric; phi(t) = sech(tT).
EntireQuotientModel levy_area(double T);

/// First hitting time of v by a Bessel process of index nu started at u < v:
/// phi(t) = E_nu(2u^2 it) / E_nu(2v^2 it) with E_nu the reduced Bessel
/// function, zeros j_{nu,k}^2/(2v^2) and j_{nu,k}^2/(2u^2).
EntireQuotientModel bessel_fht(double nu, double u, double v);

/// Total time spent in the ball of radius r by Brownian motion in dimension
/// n_dim >= 3: g(z) = Gamma(nu) E_{nu-1}(2 r^2 z), nu = (n_dim - 2)/2, h = 1.
EntireQuotientModel ciesielski_taylor(int n_dim, double r);

/// g(z) = sin(sqrt(2z)) / sqrt(2z), h = 1: zeros pi^2 k^2 / 2.
EntireQuotientModel squared_bessel_bridge();

/// Law on the negative half-line whose reflection Y has
/// phi_Y(t) = (v/u) sin(u sqrt(2it)) / sin(v sqrt(2it)).
EntireQuotientModel sinh_ratio(double u, double v);

/// Heston special case: h = 1, zeros of the Heston g, translation by
/// shift(). corr = 1 gives a positive half-line law; corr = -1 a law on the
/// negative half-line, stored reflected with translation -shift(), so that
/// the model variable is minus the log-spot.
EntireQuotientModel heston_special(const HestonParams& p);

/// Model by catalog name and JSON parameters; missing parameters take the
/// defaults above. Throws NumericError(ConfigError) for unknown names or
/// parameters.
EntireQuotientModel make_model(const std::string& name, const nlohmann::json& params);
std::vector<std::string> catalog_names();

/// Density and distribution function of the model variable (reflected for
/// negative half-line laws, translated when the model carries a shift),
/// evaluated through a series from density_series(model).
EvalResult model_density(const EntireQuotientModel& model, const GeneralizedDirichletSeries& series, double x,
                         double tol = 1e-12);
EvalResult model_cdf(const EntireQuotientModel& model, const GeneralizedDirichletSeries& series, double x,
                     double tol = 1e-12);

}  // namespace cfinv
