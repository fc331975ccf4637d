#include <doctest.h>

#include <cfinv/charfn_model.hpp>
#include <cfinv/errors.hpp>
#include <cfinv/finite_conv.hpp>
#include <cfinv/model_catalog.hpp>
#include <cfinv/special.hpp>

#include <cmath>
#include <numbers>

using namespace cfinv;
using std::numbers::pi;

namespace {

// b_n = n^2 + 1, a_n = n^2
EntireQuotientModel shifted_squares() {
    EntireQuotientModel::Parts parts(ZeroSequence::from_formula(
        [](std::size_t n) { return static_cast<double>(n * n); }, 0.5, "n^2"));
    parts.kind = "shifted_squares";
    parts.h_kind = EntireQuotientModel::HKind::Zeros;
    parts.h_zeros = ZeroSequence::from_formula([](std::size_t n) { return static_cast<double>(n * n) + 1.0; }, 0.5,
                                               "n^2+1");
    return EntireQuotientModel(std::move(parts));
}

std::vector<EntireQuotientModel> catalog() {
    return {levy_area(1.0), bessel_fht(0.5, 1.0, 2.0), bessel_fht(1.0, 1.0, 2.0), ciesielski_taylor(3, 1.0),
            ciesielski_taylor(4, 1.0), squared_bessel_bridge(), sinh_ratio(1.0, 2.0), heston_special({})};
}

}  // namespace

TEST_CASE("phi_partial basics") {
    for (const auto& m : catalog()) {
        CHECK(std::abs(phi_partial(m, 0.0, 50) - cplx(1.0, 0.0)) < 1e-15);
    }
    CHECK(std::abs(phi_partial(levy_area(1.0), 1.0, 200) - special::sech(1.0)) < 1e-3);
    const auto s = sinh_ratio(1.0, 2.0);
    const cplx r = std::sqrt(cplx(0.0, 2.0));
    const cplx closed = 2.0 * std::sin(r) / std::sin(2.0 * r);
    CHECK(std::abs(phi_partial(s, 1.0, 500) - closed) < 1e-3);
    CHECK(std::abs(s.closed_phi(1.0) - closed) < 1e-12);
}

TEST_CASE("property: partial products are characteristic functions") {
    for (const auto& m : catalog()) {
        for (double t : {-7.0, -1.0, 0.3, 2.0, 15.0}) {
            for (std::size_t n : {1, 10, 100}) {
                const cplx p = phi_partial(m, t, n);
                CHECK(std::abs(p) <= 1.0 + 1e-14);
                CHECK(std::abs(phi_partial(m, -t, n) - std::conj(p)) < 1e-14);
            }
        }
    }
}

TEST_CASE("property: partial products converge to the closed form") {
    for (const auto& m : catalog()) {
        INFO(m.kind());
        for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(phi_partial(m, t, 4000) - m.closed_phi(t)) <= 1e-3);
    }
}

TEST_CASE("property: Cauchy bound for half-line partial products") {
    for (const auto& m : catalog()) {
        if (m.symmetric()) continue;
        const double t = 1.0;
        const std::size_t n = 100;
        double bound = 0.0;
        const auto a = m.g_zeros().prefix(2 * n);
        std::vector<double> b;
        if (m.h_zeros()) b = m.h_zeros()->prefix(2 * n);
        for (std::size_t k = n; k < 2 * n; ++k) bound += 1.0 / a[k] - (b.empty() ? 0.0 : 1.0 / b[k]);
        CHECK(std::abs(phi_partial(m, t, 2 * n) - phi_partial(m, t, n)) <= bound * t + 1e-15);
    }
}

TEST_CASE("residue coefficients") {
    const auto l = levy_area(1.0);
    CHECK(residue_coeff(l, 1) == doctest::Approx(1.0));
    CHECK(residue_coeff(l, 2) == doctest::Approx(-1.0));
    CHECK(residue_coeff(levy_area(2.0), 3) == doctest::Approx(0.5));
    CHECK(residue_coeff(squared_bessel_bridge(), 1) == doctest::Approx(pi * pi));
    CHECK(residue_coeff(bessel_fht(0.5, 1.0, 2.0), 1) == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("the bessel coefficient formula is the residue -h/g'") {
    for (double nu : {0.0, 0.5, 1.0, 2.5}) {
        const auto m = bessel_fht(nu, 1.0, 1.7);
        for (std::size_t k = 1; k <= 8; ++k) {
            const double direct = -m.h_at(k) / m.g_derivative_at(k);
            CHECK(residue_coeff(m, k) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("finite differences agree with analytic derivatives") {
    for (const auto& m : {levy_area(1.3), squared_bessel_bridge(), sinh_ratio(1.0, 3.0), ciesielski_taylor(5, 1.0)}) {
        auto parts = m.parts();
        parts.g_derivative = nullptr;
        const EntireQuotientModel fd(parts);
        for (std::size_t k = 1; k <= 5; ++k) {
            CHECK(fd.g_derivative_at(k) == doctest::Approx(m.g_derivative_at(k)).epsilon(1e-7));
        }
    }
}

TEST_CASE("property: half-line models with h = 1 have alternating residues") {
    for (const auto& m : {squared_bessel_bridge(), ciesielski_taylor(3, 1.0), ciesielski_taylor(6, 2.0),
                          heston_special({})}) {
        for (std::size_t k = 1; k < 20; ++k) CHECK(residue_coeff(m, k) * residue_coeff(m, k + 1) < 0.0);
    }
}

TEST_CASE("zero derivative is reported") {
    EntireQuotientModel::Parts parts(
        ZeroSequence::from_formula([](std::size_t k) { return static_cast<double>(k); }, 1.0));
    parts.g_derivative = [](double) { return 0.0; };
    const EntireQuotientModel m(parts);
    try {
        residue_coeff(m, 1);
        FAIL("expected ZeroDerivative");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::ZeroDerivative);
    }
}

TEST_CASE("atom mass") {
    CHECK(atom_mass(levy_area(1.0)) == 0.0);
    CHECK(atom_mass(bessel_fht(0.5, 1.0, 2.0)) == 0.0);
    CHECK(atom_mass(sinh_ratio(1.0, 2.0)) == 0.0);
    CHECK(atom_mass(shifted_squares(), 1e-10) == doctest::Approx(pi / std::sinh(pi)).epsilon(1e-8));
    CHECK(atom_mass(finite_model({1.0, 2.0}, {1.5, 3.0}, Support::PositiveHalfLine)) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(atom_mass(finite_model({1.0, 2.0}, {1.5, 3.0}, Support::SymmetricLine)) ==
          doctest::Approx(16.0 / 81.0).epsilon(1e-15));
}

TEST_CASE("atom mass can be inconclusive") {
    // log(a_n/b_n) ~ -1/(n log^2 n): the partial sums creep downward far too slowly.
    EntireQuotientModel::Parts parts(
        ZeroSequence::from_formula([](std::size_t n) { return static_cast<double>(n); }, 1.0));
    parts.h_kind = EntireQuotientModel::HKind::Zeros;
    parts.h_zeros = ZeroSequence::from_formula(
        [](std::size_t n) {
            const double x = static_cast<double>(n) + 1.0;
            return static_cast<double>(n) * std::exp(1.0 / (x * std::log(x)));
        },
        1.0);
    const EntireQuotientModel m(parts);
    try {
        atom_mass(m, 1e-12);
        FAIL("expected Inconclusive");
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::Inconclusive);
    }
}

TEST_CASE("density series") {
    const auto s = density_series(levy_area(1.0));
    CHECK(s.support() == Support::SymmetricLine);
    CHECK(s.atom_mass() == 0.0);
    CHECK(s.term(2).coefficient == doctest::Approx(-1.0));
    CHECK(s.term(2).exponent == doctest::Approx(3 * pi / 2));

    // padded finite model reproduces the mixture law
    const auto fm = density_series(finite_model({1.0, 2.0}, {1.5, 3.0}, Support::PositiveHalfLine));
    const double a[] = {1.0, 2.0};
    const double b[] = {1.5, 3.0};
    const auto ml = mixture_law(a, b);
    CHECK(fm.term_limit() == 2);
    CHECK(fm.atom_mass() == doctest::Approx(ml.atom));
    for (std::size_t k = 1; k <= 2; ++k) {
        CHECK(fm.term(k).coefficient == doctest::Approx(ml.series.term(k).coefficient).epsilon(1e-14));
    }
    const auto sm = density_series(finite_model({1.0, 2.0}, {1.5, 3.0}, Support::SymmetricLine));
    const auto sml = symmetric_mixture_law(a, b);
    for (std::size_t k = 1; k <= 2; ++k) {
        CHECK(sm.term(k).coefficient == doctest::Approx(sml.series.term(k).coefficient).epsilon(1e-14));
    }
}

TEST_CASE("property: series mass equals one minus the atom") {
    for (const auto& m : catalog()) {
        INFO(m.kind());
        const auto s = density_series(m);
        CHECK(total_mass(s, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const auto f = density_series(finite_model({1.0, 2.5, 4.0}, {2.0, 3.0, 9.0}, Support::PositiveHalfLine));
    CHECK(total_mass(f) - f.atom_mass() == doctest::Approx(1.0 - atom_mass(finite_model(
                                                                    {1.0, 2.5, 4.0}, {2.0, 3.0, 9.0},
                                                                    Support::PositiveHalfLine)))
                                               .epsilon(1e-12));
}

TEST_CASE("continuity diagnostics") {
    const auto r = continuity_diagnostics(sinh_ratio(1.0, 2.0));
    CHECK(std::abs(r.delta - 2.0 * std::sqrt(2.0) / pi) < 1e-3);
    REQUIRE(r.delta_prime.has_value());
    CHECK(std::abs(*r.delta_prime - std::sqrt(2.0) / pi) < 1e-3);
    CHECK(r.verdict == Verdict::ContinuousDensity);

    CHECK(continuity_diagnostics(levy_area(1.0)).verdict == Verdict::ContinuousDensity);
    CHECK(std::abs(continuity_diagnostics(levy_area(1.0)).delta - 1.0 / pi) < 1e-3);
    CHECK(continuity_diagnostics(squared_bessel_bridge()).verdict == Verdict::ContinuousDensity);
    CHECK(continuity_diagnostics(bessel_fht(1.0, 1.0, 2.0), 1e5).verdict == Verdict::AbsolutelyContinuous);

    // h with zeros but no closed form and delta' = delta: nothing applies
    EntireQuotientModel::Parts parts(ZeroSequence::from_formula(
        [](std::size_t n) { return static_cast<double>(n); }, 1.0, "n", [](double r) { return std::floor(r); }));
    parts.h_kind = EntireQuotientModel::HKind::Zeros;
    parts.h_zeros = ZeroSequence::from_formula([](std::size_t n) { return n + 0.5; }, 1.0, "n+1/2",
                                               [](double r) { return std::floor(r + 0.5); });
    CHECK(continuity_diagnostics(EntireQuotientModel(parts)).verdict == Verdict::Unknown);
}

TEST_CASE("moments") {
    const auto m = finite_model({1.0, 2.0}, {}, Support::PositiveHalfLine);
    CHECK(partial_mean(m, 10) == doctest::Approx(1.5));
    CHECK(partial_variance(m, 10) == doctest::Approx(1.25));
    CHECK(partial_mean(squared_bessel_bridge(), 100000) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("model descriptor") {
    const auto m = sinh_ratio(1.0, 2.0);
    m.g_zeros().prefix(5);
    const auto doc = to_json(m);
    CHECK(doc["kind"] == "sinh_ratio");
    CHECK(doc["support"] == "NegativeHalfLine");
    CHECK(doc["params"]["v"] == 2.0);
    CHECK(doc["n_zeros_cached"].get<std::size_t>() >= 5);
}

TEST_CASE("interlacing is enforced") {
    CHECK_THROWS(finite_model({1.0, 2.0}, {0.5, 3.0}, Support::PositiveHalfLine));
}
