#include <doctest.h>

#include <cfinv/errors.hpp>
#include <cfinv/finite_conv.hpp>
#include <cfinv/model_catalog.hpp>
#include <cfinv/oracles.hpp>
#include <cfinv/special.hpp>

#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace cfinv;
using std::numbers::pi;

namespace {

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double central_moment(const std::vector<double>& v, int p) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += std::pow(x - m, p);
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("gil-pelaez on known laws") {
    const CharFn expo = [](double t) { return 1.0 / cplx(1.0, -t); };
    CHECK(std::abs(gil_pelaez_density(expo, 1.0, {20000.0, 1e-8}) - std::exp(-1.0)) < 1e-7);

    const CharFn sech = [](double t) { return cplx(special::sech(t), 0.0); };
    CHECK(std::abs(gil_pelaez_density(sech, 1.0, {60.0, 1e-10}) - 0.1992684077) < 1e-6);
    CHECK(std::abs(gil_pelaez_density(sech, 0.0, {60.0, 1e-10}) - 0.5) < 1e-8);

    const auto bridge = squared_bessel_bridge();
    const CharFn phi = [&](double t) { return bridge.closed_phi(t); };
    CHECK(std::abs(gil_pelaez_density(phi, 1.0, {1500.0, 1e-8}) - 0.0709809380) < 1e-5);
}

TEST_CASE("gil-pelaez refuses heavy tails") {
    const CharFn expo = [](double t) { return 1.0 / cplx(1.0, -t); };
    try {
        gil_pelaez_density(expo, 1.0, {50.0, 1e-8});
        FAIL("expected TailTooHeavy");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::TailTooHeavy);
    }
    const CharFn sech = [](double t) { return cplx(special::sech(t), 0.0); };
    CHECK(suggest_t_max(sech, 1e-10) <= 64.0);
}

TEST_CASE("gaussian sum density") {
    CHECK(gaussian_sum_density(1.0, 2.0, 1.0, 5) == doctest::Approx(0.4573652256).epsilon(1e-9));
    CHECK(std::abs(gaussian_sum_density(1.0, 2.0, 1.0, 5) - gaussian_sum_density(1.0, 2.0, 1.0, 10)) < 1e-15);
    const auto m = sinh_ratio(1.0, 2.0);
    const auto s = density_series(m);
    CHECK(std::abs(gaussian_sum_density(1.0, 2.0, 50.0, 20) - model_density(m, s, 50.0).value) < 1e-8);
}

TEST_CASE("property: gaussian sum equals the sinh-ratio series") {
    for (auto [u, v] : {std::pair{1.0, 2.0}, std::pair{1.0, 3.0}}) {
        const auto m = sinh_ratio(u, v);
        const auto s = density_series(m);
        for (double y : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(gaussian_sum_density(u, v, y, 8) - model_density(m, s, y).value) < 1e-8);
        }
    }
}

TEST_CASE("property: gil-pelaez agrees with the series on the catalog") {
    struct Case {
        EntireQuotientModel model;
        double t_max;
    };
    const std::vector<Case> cases = {{levy_area(1.0), 80.0},
                                     {bessel_fht(0.5, 1.0, 2.0), 1500.0},
                                     {ciesielski_taylor(3, 1.0), 2500.0},
                                     {squared_bessel_bridge(), 1500.0},
                                     {sinh_ratio(1.0, 2.0), 1500.0}};
    for (const auto& c : cases) {
        INFO(c.model.kind());
        const auto s = density_series(c.model);
        const CharFn phi = [&](double t) { return c.model.closed_phi(t); };
        for (double x : {0.25, 0.5, 1.0, 2.0}) {
            const double series = model_density(c.model, s, x, 1e-12).value;
            CHECK(std::abs(gil_pelaez_density(phi, x, {c.t_max, 1e-7}) - series) <= 1e-4);
        }
    }
}

TEST_CASE("sampling factor choice") {
    const auto f = finite_model({1.0, 2.0}, {}, Support::PositiveHalfLine);
    CHECK(sampling_factors(f, 100) == 2);
    const std::size_t n = sampling_factors(squared_bessel_bridge(), 1 << 16);
    CHECK(n > 5000);
    CHECK(n < 7000);
    try {
        sampling_factors(squared_bessel_bridge(), 100);
        FAIL("expected TailMeanUnbounded");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::TailMeanUnbounded);
    }
}

TEST_CASE("half-line sampling moments") {
    const auto f = finite_model({1.0, 2.0}, {}, Support::PositiveHalfLine);
    const auto x = sample_halfline(f, 10, 100000, 42);
    const double sd = std::sqrt(1.25 / 1e5);
    CHECK(std::abs(mean(x) - 1.5) < 3.0 * sd);
    CHECK(x == sample_halfline(f, 10, 100000, 42));
    CHECK(x != sample_halfline(f, 10, 100000, 43));

    const auto mix = finite_model({1.0, 2.0}, {1.5, 3.0}, Support::PositiveHalfLine);
    const auto y = sample_halfline(mix, 10, 100000, 1);
    const double m = partial_mean(mix, 10);
    const double v = partial_variance(mix, 10);
    CHECK(std::abs(mean(y) - m) < 4.0 * std::sqrt(v / 1e5));
    CHECK(std::abs(central_moment(y, 2) - v) < 0.03 * v);
}

TEST_CASE("symmetric sampling") {
    const auto lap = finite_model({2.0}, {}, Support::SymmetricLine);
    const auto x = sample_symmetric_bondesson(lap, 10, 100000, 5);
    // Laplace(2): variance 0.5, fourth moment 6/16
    const double var = central_moment(x, 2);
    CHECK(std::abs(var - 0.5) < 3.0 * std::sqrt((6.0 / 16.0 - 0.25) / 1e5));
    const double skew = central_moment(x, 3) / std::pow(var, 1.5);
    CHECK(std::abs(skew) < 3.0 * std::sqrt(6.0 / 1e5) * 3.0);
    CHECK(std::abs(mean(x)) < 3.0 * std::sqrt(0.5 / 1e5));
}

TEST_CASE("property: bondesson samples follow the laplace convolution") {
    const std::vector<double> rates = {1.0, 2.0, 3.0};
    const auto model = finite_model(rates, {}, Support::SymmetricLine);
    const auto form = laplace_conv(rates);
    const auto cdf = [&](double x) {
        // integral of sum w_i exp(-l_i |y|) up to x
        double below = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) below += form.weights[i] / rates[i] * std::exp(-rates[i] * std::abs(x));
        return x < 0.0 ? below : 1.0 - below;
    };
    const auto x = sample_symmetric_bondesson(model, 3, 50000, 17);
    CHECK(ks_test(x, cdf).pass_1pct());

    const auto mix = finite_model({1.0, 2.0}, {1.5, 3.0}, Support::SymmetricLine);
    const auto a = sample_symmetric_bondesson(mix, 2, 20000, 3);
    const auto b = sample_symmetric_factorwise(mix, 2, 20000, 4);
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    // the atom at zero carries a^2/b^2 products of mass
    const double zeros = static_cast<double>(std::count(b.begin(), b.end(), 0.0)) / 20000.0;
    CHECK(std::abs(zeros - (1.0 / 2.25) * (4.0 / 9.0)) < 0.01);
}

TEST_CASE("ks helpers") {
    std::vector<double> u;
    for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
    const auto r = ks_test(u, [](double x) { return x; });
    CHECK(r.statistic == doctest::Approx(0.0005));
    CHECK(r.pass_1pct());
    const auto bad = ks_test(u, [](double x) { return x * x; });
    CHECK_FALSE(bad.pass_1pct());
    const auto two = ks_two_sample(u, u);
    CHECK(two.statistic == 0.0);
    CHECK(two.p_value == 1.0);
    std::vector<double> shifted;
    for (double x : u) shifted.push_back(x + 0.2);
    CHECK(ks_two_sample(u, shifted).p_value < 1e-6);
}

TEST_CASE("oracle report csv") {
    const OracleReport rows[] = {make_report(1.0, 0.5, 0.25, OracleKind::GilPelaez)};
    CHECK(rows[0].abs_diff == 0.25);
    std::ostringstream out;
    write_csv(out, rows);
    CHECK(out.str() ==
          "point,series,oracle,diff,kind\n1.000000000000e+00,5.000000000000e-01,2.500000000000e-01,"
          "2.500000000000e-01,gil_pelaez\n");
}
