#include <doctest.h>

#include <cmath>
#include <numbers>

#include "noisestab/phi.hpp"
#include "noisestab/quadrature.hpp"
#include "noisestab/roots.hpp"

using namespace noisestab::bounds;

TEST_CASE("q_log closed forms and continuity at q = 1")
{
    for (double q : {0.5, 1.0, 1.5, 2.0, 3.0})
        CHECK(q_log(1.0, q) == 0.0);
    for (double t : {0.1, 0.5, 0.9, 2.0})
        CHECK(q_log(t, 2.0) == doctest::Approx(t - 1.0).epsilon(1e-14));
    CHECK(std::abs(q_log(0.5, 1.0 + 1e-12) - std::log(0.5)) < 1e-9);
    CHECK(std::abs(q_log(0.5, 1.0 - 1e-12) - std::log(0.5)) < 1e-9);
    // Either side of the series band must agree.
    for (double dq : {0.9e-9, 1.1e-9}) {
        const double lt = std::log(0.3);
        CHECK(std::abs(q_log(0.3, 1.0 + dq) - lt * (1.0 + 0.5 * dq * lt)) < 1e-15);
    }
    CHECK_THROWS_AS(q_log(0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(q_log(-1.0, 2.0), std::domain_error);
}

TEST_CASE("built-in Phi kinds at the endpoints and the midpoint")
{
    const auto sym1 = PhiSpec::one_symmetric();
    CHECK(sym1(0.5) == doctest::Approx(-std::numbers::ln2).epsilon(1e-15));
    CHECK(sym1(0.0) == 0.0);
    CHECK(sym1(1.0) == 0.0);

    const auto asym1 = PhiSpec::one_asymmetric();
    CHECK(asym1(0.0) == 0.0);
    CHECK(asym1(1.0) == 0.0);
    CHECK(asym1(0.5) == doctest::Approx(0.5 * std::log(0.5)));

    const auto phi2 = PhiSpec::q_asymmetric(2.0);
    for (double t : {0.0, 0.2, 0.5, 1.0})
        CHECK(phi2(t) == doctest::Approx(t * t - t).scale(1.0));

    const auto sym2 = PhiSpec::q_symmetric(2.0);
    CHECK(sym2(0.5) == doctest::Approx(-0.5));
    CHECK(sym2(0.0) == 0.0);
    CHECK(sym2(1.0) == 0.0);

    CHECK(PhiSpec::q_symmetric(1.0 + 1e-12)(0.3) == doctest::Approx(sym1(0.3)).epsilon(1e-9));
    CHECK(neg_entropy(0.25) == doctest::Approx(-0.5623351446188083).epsilon(1e-14));
}

TEST_CASE("Phi derivatives match central differences")
{
    const PhiSpec kinds[] = {PhiSpec::one_symmetric(), PhiSpec::one_asymmetric(), PhiSpec::q_asymmetric(2.0),
                             PhiSpec::q_asymmetric(3.0), PhiSpec::q_symmetric(1.5), PhiSpec::q_symmetric(0.5)};
    for (const auto& phi : kinds) {
        REQUIRE(phi.has_deriv());
        CHECK(phi.convex());
        for (double t : {0.05, 0.2, 0.5, 0.7, 0.95}) {
            const double h = 1e-6;
            const double fd = (phi(t + h) - phi(t - h)) / (2 * h);
            CHECK(phi.deriv(t) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("Phi kinds are convex on a grid")
{
    const PhiSpec kinds[] = {PhiSpec::one_symmetric(), PhiSpec::one_asymmetric(), PhiSpec::q_asymmetric(2.0),
                             PhiSpec::q_asymmetric(3.0), PhiSpec::q_symmetric(1.5)};
    for (const auto& phi : kinds)
        for (int k = 1; k < 999; ++k) {
            const double a = (k - 1) / 1000.0, b = k / 1000.0, c = (k + 1) / 1000.0;
            CHECK(phi(b) <= 0.5 * (phi(a) + phi(c)) + 1e-15);
        }
}

TEST_CASE("custom Phi and the missing derivative")
{
    const auto abs_phi = PhiSpec::custom("abs", [](double t) { return std::abs(t - 0.5); }, {}, true);
    CHECK(abs_phi.kind() == PhiKind::custom);
    CHECK(abs_phi(0.0) == 0.5);
    CHECK_FALSE(abs_phi.has_deriv());
    CHECK_THROWS_AS(abs_phi.deriv(0.3), std::logic_error);
    CHECK_THROWS_AS(PhiSpec::one_symmetric()(1.5), std::domain_error);
}

TEST_CASE("adaptive quadrature")
{
    const double pts[] = {0.0, 1.0};
    CHECK(integrate_or_throw([](double x) { return x * x * x; }, pts) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(integrate_or_throw([](double x) { return std::sqrt(x); }, pts, {1e-12, 0, 1'000'000}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-11));

    // A kink placed on a breakpoint integrates in one pass per panel.
    const double kinked[] = {0.0, 0.3, 1.0};
    const auto r = integrate([](double x) { return std::abs(x - 0.3); }, kinked);
    CHECK(r.converged);
    CHECK(r.evaluations == 30);
    CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));

    const auto starved = integrate([](double x) { return x < 0.123456 ? 0.0 : 1.0; }, pts, {1e-14, 0, 60});
    CHECK_FALSE(starved.converged);
    CHECK_THROWS_AS(integrate_or_throw([](double x) { return x < 0.123456 ? 0.0 : 1.0; }, pts, {1e-14, 0, 60}),
                    QuadratureError);
    const double unsorted[] = {1.0, 0.0};
    CHECK_THROWS_AS(integrate([](double x) { return x; }, unsorted), std::invalid_argument);
}

TEST_CASE("quadrature is deterministic")
{
    const double pts[] = {0.0, 0.5, 1.0};
    auto f = [](double x) { return std::sin(30 * x) * std::exp(-x); };
    const auto a = integrate(f, pts, {1e-12, 0, 1'000'000});
    const auto b = integrate(f, pts, {1e-12, 0, 1'000'000});
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("bisection and golden section")
{
    const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
    CHECK(bisect([](double x) { return x; }, 0.0, 1.0) == 0.0);

    const auto m = golden_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-12);
    CHECK(m.x == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(m.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // Maximum at an end point.
    const auto e = golden_max([](double x) { return x; }, 0.0, 1.0);
    CHECK(e.x == 1.0);
}
