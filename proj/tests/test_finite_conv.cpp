#include <doctest.h>

#include <cfinv/errors.hpp>
#include <cfinv/finite_conv.hpp>

#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace cfinv;

namespace {

std::vector<double> random_rates(std::mt19937_64& rng, std::size_t n, double lo = 0.5, double hi = 4.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> r;
    while (r.size() < n) {
        const double x = u(rng);
        if (std::all_of(r.begin(), r.end(), [x](double y) { return std::abs(x - y) > 0.1; })) r.push_back(x);
    }
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<SupportedDensity> exponentials(const std::vector<double>& rates) {
    std::vector<SupportedDensity> out;
    for (double r : rates) out.push_back({[r](double x) { return ref::exp_pdf(r, x); }, Support::PositiveHalfLine});
    return out;
}

std::vector<SupportedDensity> laplaces(const std::vector<double>& rates) {
    std::vector<SupportedDensity> out;
    for (double r : rates) out.push_back({[r](double x) { return ref::laplace_pdf(r, x); }, Support::SymmetricLine});
    return out;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const NumericError& e) {
        return e.kind();
    }
    FAIL("expected a NumericError");
    return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("exp_conv small cases") {
    const double one[] = {3.0};
    CHECK(exp_conv(one).density(0.0) == doctest::Approx(3.0));
    const double two[] = {1.0, 2.0};
    const auto f = exp_conv(two);
    CHECK(f.density(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.weights[0] == doctest::Approx(2.0));
    CHECK(f.weights[1] == doctest::Approx(-2.0));
    CHECK(f.density(-1.0) == 0.0);
}

TEST_CASE("exp_conv matches brute force for three rates") {
    const double rates[] = {1.0, 2.0, 3.0};
    const auto f = exp_conv(rates);
    const auto ds = exponentials({1.0, 2.0, 3.0});
    const auto r = brute_convolve(ds, 1.0, 0.02, 0.0, 1e-9);
    CHECK(std::abs(f.density(1.0) - r.value) < 1e-9);
}

TEST_CASE("laplace_conv small cases") {
    const double one[] = {2.0};
    CHECK(laplace_conv(one).density(0.0) == doctest::Approx(1.0));
    const double two[] = {1.0, 2.0};
    const auto f = laplace_conv(two);
    CHECK(f.weights[0] == doctest::Approx(2.0 / 3.0));
    CHECK(f.weights[1] == doctest::Approx(-1.0 / 3.0));
    CHECK(f.density(0.0) == doctest::Approx(1.0 / 3.0));
    CHECK(f.density(-0.7) == f.density(0.7));
}

TEST_CASE("laplace_conv integrates to one") {
    const double rates[] = {1.0, 2.0, 3.0};
    const auto f = laplace_conv(rates);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.rates.size(); ++i) mass += 2.0 * f.weights[i] / f.rates[i];
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    // trapezoid on a fine grid
    double q = 0.0;
    const double h = 1e-3;
    for (int i = -40000; i <= 40000; ++i) q += f.density(i * h) * (std::abs(i) == 40000 ? 0.5 : 1.0);
    CHECK(q * h == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("brute_convolve examples") {
    const auto e = exponentials({1.0, 2.0});
    CHECK(brute_convolve(e, std::log(2.0), 0.02, 0.0).value == doctest::Approx(0.5).epsilon(1e-6));
    const auto l = laplaces({1.0, 2.0});
    CHECK(brute_convolve(l, 0.0, 0.02, 40.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK_THROWS_AS(brute_convolve(std::span(e).first(1), 1.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("brute_convolve reports a coarse grid") {
    const auto e = exponentials({20.0, 40.0});
    CHECK(kind_of([&] { brute_convolve(e, 0.05, 0.05, 0.0, 1e-12); }) == ErrorKind::GridTooCoarse);
}

TEST_CASE("property: exp_conv equals brute force, n <= 6") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto rates = random_rates(rng, n);
        const auto f = exp_conv(rates);
        std::vector<double> xs;
        for (int i = 1; i <= 10; ++i) xs.push_back(0.4 * i);
        const auto got = brute_convolve(exponentials(rates), xs, 0.04, 0.0, 1e-7);
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(got[i].value - f.density(xs[i])) < 1e-6);
    }
}

TEST_CASE("property: hypoexponential density is nonnegative") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rates = random_rates(rng, 2 + trial % 5);
        const auto f = exp_conv(rates);
        for (int i = 0; i < 100; ++i) CHECK(f.density(20.0 / rates[0] * i / 99.0) >= -1e-12);
    }
}

TEST_CASE("property: near-repeated rates approach the gamma density") {
    const double lambda = 1.5;
    const double rates[] = {lambda, lambda + 1e-4};
    const auto f = exp_conv(rates);
    for (double x : {0.2, 1.0, 3.0}) {
        CHECK(std::abs(f.density(x) - lambda * lambda * x * std::exp(-lambda * x)) < 1e-3);
    }
}

TEST_CASE("degenerate and invalid rates") {
    const double same[] = {1.0, 1.0};
    CHECK(kind_of([&] { exp_conv(same); }) == ErrorKind::DegenerateRates);
    const double close[] = {1.0, 1.0 + 1e-10};
    CHECK(kind_of([&] { laplace_conv(close); }) == ErrorKind::DegenerateRates);
    const double unsorted[] = {2.0, 1.0};
    CHECK_THROWS_AS(exp_conv(unsorted), std::invalid_argument);
    const double negative[] = {-1.0, 1.0};
    CHECK_THROWS_AS(exp_conv(negative), std::invalid_argument);
}

TEST_CASE("weights survive large n") {
    // rates 1..n: w_i = (-1)^(i-1) n C(n-1, i-1)
    const int n = 40;
    std::vector<double> rates;
    for (int i = 1; i <= n; ++i) rates.push_back(i);
    const auto f = exp_conv(rates);
    double binom = 1.0;
    double mass = 0.0, scale = 0.0;
    for (int i = 1; i <= n; ++i) {
        if (i > 1) binom = binom * (n - i + 1) / (i - 1);
        const double exact = (i % 2 ? 1.0 : -1.0) * n * binom;
        CHECK(f.weights[i - 1] == doctest::Approx(exact).epsilon(1e-13));
        mass += f.weights[i - 1] / rates[i - 1];
        scale += std::abs(f.weights[i - 1]) / rates[i - 1];
    }
    // the alternating sum cancels from ~2^40 down to 1
    CHECK(std::abs(mass - 1.0) <= 1e-15 * scale);

    std::vector<double> big;
    for (int i = 1; i <= 400; ++i) big.push_back(i);
    for (double w : exp_conv(big).weights) CHECK(std::isfinite(w));
}

TEST_CASE("mixture law examples") {
    const double a1[] = {1.0};
    const double b1[] = {2.0};
    const auto m1 = mixture_law(a1, b1);
    CHECK(m1.atom == doctest::Approx(0.5));
    CHECK(m1.series.term(1).coefficient == doctest::Approx(0.5));
    CHECK(m1.series.term(1).exponent == 1.0);

    const double a[] = {1.0, 2.0};
    const double b[] = {1.5, 3.0};
    const auto m = mixture_law(a, b);
    CHECK(m.atom == doctest::Approx(4.0 / 9.0));
    CHECK(m.series.term(1).coefficient == doctest::Approx(4.0 / 9.0));
    CHECK(m.series.term(2).coefficient == doctest::Approx(2.0 / 9.0));
    CHECK(total_mass(m.series) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : {0.3, 1.0, 2.0}) {
        CHECK(std::abs(eval_density(m.series, x).value - ref::mixture_density_brute({1, 2}, {1.5, 3}, x)) < 1e-6);
    }

    const double bc[] = {2.0, 3.0};
    CHECK(kind_of([&] { mixture_law(a, bc); }) == ErrorKind::CollidingZeros);
    const double bo[] = {0.5, 3.0};
    CHECK(kind_of([&] { mixture_law(a, bo); }) == ErrorKind::OrderingViolation);
}

TEST_CASE("property: mixture mass is one") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gap(0.05, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_rates(rng, 1 + trial % 6);
        std::vector<double> b;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double v = a[i] + gap(rng);
            if (!b.empty()) v = std::max(v, b.back() + 0.01);
            b.push_back(v);
        }
        bool clash = false;
        for (double x : a) {
            for (double y : b) clash = clash || std::abs(x - y) < 1e-6;
        }
        if (clash) continue;
        const auto m = mixture_law(a, b);
        CHECK(total_mass(m.series) == doctest::Approx(1.0).epsilon(1e-10));
        const auto s = symmetric_mixture_law(a, b);
        CHECK(total_mass(s.series) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("symmetric mixture matches brute force") {
    // (a^2/b^2) delta_0 + (1 - a^2/b^2) Laplace(a) per factor.
    const std::vector<double> a = {1.0, 2.0};
    const std::vector<double> b = {1.5, 3.0};
    const auto m = symmetric_mixture_law(a, b);
    CHECK(m.atom == doctest::Approx(16.0 / 81.0));
    const double p1 = 1.0 / 2.25;
    const double p2 = 4.0 / 9.0;
    const auto both = laplaces(a);
    for (double x : {-1.5, -0.4, 0.6, 2.0}) {
        const double pair = brute_convolve(both, x, 0.02, 40.0, 1e-7).value;
        const double expect = (1 - p1) * p2 * ref::laplace_pdf(1.0, x) + p1 * (1 - p2) * ref::laplace_pdf(2.0, x) +
                              (1 - p1) * (1 - p2) * pair;
        CHECK(std::abs(eval_density(m.series, x).value - expect) < 1e-6);
    }
}

TEST_CASE("closed form json") {
    const double rates[] = {1.0, 2.0};
    const auto doc = to_json(exp_conv(rates));
    CHECK(doc["kind"] == "Hypoexponential");
    CHECK(doc["terms"].size() == 2);
    CHECK(doc["support"] == "PositiveHalfLine");
}
