#include "cfinv/model_catalog.hpp"

#include "cfinv/errors.hpp"
#include "cfinv/special.hpp"
#include "cfinv/zerofind.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <set>

namespace cfinv {

namespace {

using std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::ConfigError, what);
}

// Zeros j_{nu,k} shared by the g and h sequences of one model.
ZeroSequence bessel_j_zeros(double nu) {
    auto extend = [nu](std::span<const double> known, std::size_t want) {
        return bessel_zeros(nu, known.size() + 1, want);
    };
    return ZeroSequence(std::move(extend), 1.0, "j_" + std::to_string(nu));
}

ZeroSequence scaled_squares(const ZeroSequence& j, double scale, std::string label) {
    // a_k = j_k^2 * scale
    auto kth = [j, scale](std::size_t k) {
        const double x = j.at(k);
        return x * x * scale;
    };
    return ZeroSequence::from_formula(std::move(kth), 0.5, std::move(label));
}

}  // namespace

EntireQuotientModel levy_area(double T) {
    require(T > 0.0 && std::isfinite(T), "levy_area: T must be positive");
    auto zeros = ZeroSequence::from_formula(
        [T](std::size_t k) { return (2.0 * static_cast<double>(k) - 1.0) * pi / (2.0 * T); }, 1.0, "levy_area",
        [T](double r) { return std::floor(r * T / pi + 0.5); });
    EntireQuotientModel::Parts parts(std::move(zeros));
    parts.kind = "levy_area";
    parts.params = {{"T", T}};
    parts.support = Support::SymmetricLine;
    parts.g_eval = [T](double z) { return std::cos(z * T); };
    parts.g_derivative = [T](double a) { return -T * std::sin(a * T); };
    parts.closed_phi = [T](double t) { return cplx(special::sech(t * T), 0.0); };
    return EntireQuotientModel(std::move(parts));
}

EntireQuotientModel bessel_fht(double nu, double u, double v) {
    require(nu > -1.0, "bessel_fht: nu must exceed -1");
    require(u > 0.0 && v > u, "bessel_fht: need 0 < u < v");
    const auto j = bessel_j_zeros(nu);
    EntireQuotientModel::Parts parts(scaled_squares(j, 1.0 / (2.0 * v * v), "bessel_fht.g"));
    parts.kind = "bessel_fht";
    parts.params = {{"nu", nu}, {"u", u}, {"v", v}};
    parts.support = Support::PositiveHalfLine;
    parts.h_kind = EntireQuotientModel::HKind::Zeros;
    parts.h_zeros = scaled_squares(j, 1.0 / (2.0 * u * u), "bessel_fht.h");
    parts.no_atom_at_zero = true;

    // g(z) = Gamma(nu+1) E_nu(2 v^2 z), h(z) = Gamma(nu+1) E_nu(2 u^2 z); E_nu' = -E_{nu+1}/4.
    const double gamma1 = std::tgamma(nu + 1.0);
    parts.g_eval = [=](double z) { return gamma1 * special::bessel_reduced(nu, 2.0 * v * v * z); };
    parts.g_derivative = [=](double a) { return -gamma1 * v * v / 2.0 * special::bessel_reduced(nu + 1.0, 2.0 * v * v * a); };
    parts.h_eval = [=](double z) { return gamma1 * special::bessel_reduced(nu, 2.0 * u * u * z); };
    parts.coefficient = [=](std::size_t k) {
        const double jk = j.at(k);
        return jk * std::pow(v, nu - 2.0) * special::bessel_j(nu, jk * u / v) /
               (std::pow(u, nu) * special::bessel_j(nu + 1.0, jk));
    };
    parts.closed_phi = [=](double t) {
        const cplx it(0.0, t);
        return special::bessel_reduced(nu, 2.0 * u * u * it) / special::bessel_reduced(nu, 2.0 * v * v * it);
    };
    return EntireQuotientModel(std::move(parts));
}

EntireQuotientModel ciesielski_taylor(int n_dim, double r) {
    require(n_dim >= 3, "ciesielski_taylor: n_dim must be at least 3");
    require(r > 0.0, "ciesielski_taylor: r must be positive");
    const double nu = (n_dim - 2) / 2.0;
    const double mu = nu - 1.0;
    const auto j = bessel_j_zeros(mu);
    EntireQuotientModel::Parts parts(scaled_squares(j, 1.0 / (2.0 * r * r), "ciesielski_taylor"));
    parts.kind = "ciesielski_taylor";
    parts.params = {{"n_dim", n_dim}, {"r", r}};
    parts.support = Support::PositiveHalfLine;

    // g(z) = Gamma(nu) E_{nu-1}(2 r^2 z), g'(a) = -Gamma(nu) 2^{nu-1} r^2 J_nu(j) / j^nu with j = r sqrt(2a).
    const double gamma = std::tgamma(nu);
    parts.g_eval = [=](double z) { return gamma * special::bessel_reduced(mu, 2.0 * r * r * z); };
    parts.g_derivative = [=](double a) {
        const double jk = r * std::sqrt(2.0 * a);
        return -gamma * std::pow(2.0, nu - 1.0) * r * r * special::bessel_j(nu, jk) / std::pow(jk, nu);
    };
    parts.closed_phi = [=](double t) {
        return 1.0 / (gamma * special::bessel_reduced(mu, cplx(0.0, 2.0 * r * r * t)));
    };
    return EntireQuotientModel(std::move(parts));
}

EntireQuotientModel squared_bessel_bridge() {
    auto zeros = ZeroSequence::from_formula(
        [](std::size_t k) {
            const double kk = static_cast<double>(k);
            return pi * pi * kk * kk / 2.0;
        },
        0.5, "squared_bessel_bridge", [](double r) { return std::floor(std::sqrt(2.0 * r) / pi); });
    EntireQuotientModel::Parts parts(std::move(zeros));
    parts.kind = "squared_bessel_bridge";
    parts.support = Support::PositiveHalfLine;
    // g(z) = sinh(sqrt(-2z)) / sqrt(-2z)
    parts.g_eval = [](double z) { return special::sinhc_sqrt(-2.0 * z); };
    parts.g_derivative = [](double a) { return -2.0 * special::sinhc_sqrt_deriv(-2.0 * a); };
    parts.closed_phi = [](double t) { return 1.0 / special::sinhc_sqrt(cplx(0.0, -2.0 * t)); };
    return EntireQuotientModel(std::move(parts));
}

EntireQuotientModel sinh_ratio(double u, double v) {
    require(u > 0.0 && v > u, "sinh_ratio: need 0 < u < v");
    auto square_zeros = [](double s, const char* label) {
        return ZeroSequence::from_formula(
            [s](std::size_t k) {
                const double kk = static_cast<double>(k);
                return kk * kk * pi * pi / (2.0 * s * s);
            },
            0.5, label, [s](double r) { return std::floor(s * std::sqrt(2.0 * r) / pi); });
    };
    EntireQuotientModel::Parts parts(square_zeros(v, "sinh_ratio.g"));
    parts.kind = "sinh_ratio";
    parts.params = {{"u", u}, {"v", v}};
    parts.support = Support::NegativeHalfLine;
    parts.h_kind = EntireQuotientModel::HKind::Zeros;
    parts.h_zeros = square_zeros(u, "sinh_ratio.h");
    // Reflected variable: g(z) = sin(v sqrt(2z)) / (v sqrt(2z)), h likewise with u.
    parts.g_eval = [v](double z) { return special::sinhc_sqrt(-2.0 * v * v * z); };
    parts.g_derivative = [v](double a) { return -2.0 * v * v * special::sinhc_sqrt_deriv(-2.0 * v * v * a); };
    parts.h_eval = [u](double z) { return special::sinhc_sqrt(-2.0 * u * u * z); };
    parts.closed_phi = [u, v](double t) {
        return special::sinhc_sqrt(cplx(0.0, -2.0 * u * u * t)) / special::sinhc_sqrt(cplx(0.0, -2.0 * v * v * t));
    };
    return EntireQuotientModel(std::move(parts));
}

EntireQuotientModel heston_special(const HestonParams& p) {
    require(p.t > 0.0, "heston_special: t must be positive");
    const HestonFunction g{p.a, p.c, p.corr};
    const bool negative = p.corr == -1.0;
    EntireQuotientModel::Parts parts(heston_zeros(p.a, p.c, p.corr, 32));
    parts.kind = "heston_special";
    parts.params = {{"a", p.a}, {"c", p.c}, {"corr", p.corr}, {"x0", p.x0}, {"t", p.t}};
    parts.support = negative ? Support::NegativeHalfLine : Support::PositiveHalfLine;
    const double sgn = negative ? -1.0 : 1.0;
    parts.g_eval = [g, sgn](double z) { return g(sgn * z); };
    parts.g_derivative = [g, sgn](double a) { return sgn * g.derivative(sgn * a); };
    parts.translation = sgn * p.shift();
    const double tau = parts.translation;
    parts.closed_phi = [g, sgn, tau](double t) {
        return std::polar(1.0, t * tau) / g(cplx(0.0, sgn * t));
    };
    return EntireQuotientModel(std::move(parts));
}

// ---------------------------------------------------------------------------

namespace {

double number(const nlohmann::json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    require(v.is_number(), std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
}

void only_keys(const nlohmann::json& params, std::set<std::string> allowed, const std::string& model) {
    require(params.is_object(), "parameters must be a JSON object");
    for (const auto& [key, value] : params.items()) {
        require(allowed.count(key) > 0, "unknown parameter '" + key + "' for model " + model);
    }
}

std::vector<double> number_list(const nlohmann::json& params, const char* key) {
    std::vector<double> out;
    if (!params.contains(key)) return out;
    require(params.at(key).is_array(), std::string("parameter '") + key + "' must be an array");
    for (const auto& v : params.at(key)) {
        require(v.is_number(), std::string("parameter '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"levy_area", "bessel_fht", "ciesielski_taylor", "squared_bessel_bridge",
            "sinh_ratio", "heston_special", "finite_mixture"};
}

EntireQuotientModel make_model(const std::string& name, const nlohmann::json& params_in) {
    const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
    if (name == "levy_area") {
        only_keys(params, {"T"}, name);
        return levy_area(number(params, "T", 1.0));
    }
    if (name == "bessel_fht") {
        only_keys(params, {"nu", "u", "v"}, name);
        return bessel_fht(number(params, "nu", 0.5), number(params, "u", 1.0), number(params, "v", 2.0));
    }
    if (name == "ciesielski_taylor") {
        only_keys(params, {"n_dim", "r"}, name);
        const double n = number(params, "n_dim", 3.0);
        require(n == std::floor(n), "ciesielski_taylor: n_dim must be an integer");
        return ciesielski_taylor(static_cast<int>(n), number(params, "r", 1.0));
    }
    if (name == "squared_bessel_bridge") {
        only_keys(params, {}, name);
        return squared_bessel_bridge();
    }
    if (name == "sinh_ratio") {
        only_keys(params, {"u", "v"}, name);
        return sinh_ratio(number(params, "u", 1.0), number(params, "v", 2.0));
    }
    if (name == "heston_special") {
        only_keys(params, {"a", "c", "corr", "x0", "t"}, name);
        HestonParams p;
        p.a = number(params, "a", p.a);
        p.c = number(params, "c", p.c);
        p.corr = number(params, "corr", p.corr);
        p.x0 = number(params, "x0", p.x0);
        p.t = number(params, "t", p.t);
        try {
            return heston_special(p);
        } catch (const NumericError& e) {
            if (e.kind() == ErrorKind::RegimeUnsupported) fail(ErrorKind::ConfigError, e.what());
            throw;
        }
    }
    if (name == "finite_mixture") {
        only_keys(params, {"a", "b", "symmetric"}, name);
        const bool symmetric = params.value("symmetric", false);
        auto a = number_list(params, "a");
        require(!a.empty(), "finite_mixture: parameter 'a' is required");
        try {
            return finite_model(std::move(a), number_list(params, "b"),
                                symmetric ? Support::SymmetricLine : Support::PositiveHalfLine);
        } catch (const std::invalid_argument& e) {
            fail(ErrorKind::ConfigError, e.what());
        }
    }
    fail(ErrorKind::ConfigError, "unknown model '" + name + "'");
}

// ---------------------------------------------------------------------------

namespace {

GeneralizedDirichletSeries on_model_side(const EntireQuotientModel& model, const GeneralizedDirichletSeries& s) {
    // The model variable of a negative half-line law is its reflection.
    if (model.support() == Support::NegativeHalfLine && s.support() == Support::NegativeHalfLine) {
        return s.reflected();
    }
    return s;
}

}  // namespace

EvalResult model_density(const EntireQuotientModel& model, const GeneralizedDirichletSeries& series, double x,
                         double tol) {
    const double y = x - model.translation();
    const auto s = on_model_side(model, series);
    if (s.support() == Support::PositiveHalfLine && y < 0.0) return {0.0, 0.0, 1};
    return eval_density(s, y, tol);
}

EvalResult model_cdf(const EntireQuotientModel& model, const GeneralizedDirichletSeries& series, double x,
                     double tol) {
    const double y = x - model.translation();
    const auto s = on_model_side(model, series);
    const double atom = s.atom_mass();
    if (s.support() == Support::SymmetricLine) {
        if (y == 0.0) return {0.5 * (1.0 + atom), 0.0, 1};
        const auto tail = eval_survival(s, std::abs(y), tol);
        return {y > 0.0 ? 1.0 - tail.value : tail.value, tail.truncation_bound, tail.terms_used};
    }
    if (y < 0.0) return {0.0, 0.0, 1};
    if (y == 0.0) return {atom, 0.0, 1};
    const auto tail = eval_survival(s, y, tol);
    return {1.0 - tail.value, tail.truncation_bound, tail.terms_used};
}

}  // namespace cfinv
