#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "noisestab/gamma.hpp"
#include "noisestab/roots.hpp"
#include "noisestab/theta.hpp"

using namespace noisestab::bounds;

namespace {

// Gamma(eps) by fixed-order Gauss-Kronrod per panel, independent of the library integrator.
double gamma_gk(double eps, double rho, const PhiSpec& phi)
{
    const ThetaProfile hi(1.0 - eps, rho), lo(eps, rho);
    std::vector<double> pts{0.0, 1.0};
    for (const auto* p : {&hi, &lo})
        pts.insert(pts.end(), p->clause_boundaries().begin(), p->clause_boundaries().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double P = 0.5 * (1 + rho), M = 0.5 * (1 - rho);
    auto f = [&](double b) {
        const double a = hi(b), c = lo(b);
        return 0.5 * (phi(P * a + M * c) + phi(M * a + P * c));
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 20, 1e-13);
    return total;
}

double profile_phi_integral(double a, double rho, const PhiSpec& phi)
{
    const ThetaProfile p(a, rho);
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), p.clause_boundaries().begin(), p.clause_boundaries().end());
    pts.push_back(1.0);
    return integrate_or_throw([&](double b) { return phi(p(b)); }, pts, {1e-11, 0, 1'000'000});
}

} // namespace

TEST_CASE("Gamma at eps = 0 is the dictator stability")
{
    for (const auto& phi : {PhiSpec::one_symmetric(), PhiSpec::q_asymmetric(2.0), PhiSpec::q_symmetric(1.5)})
        for (double rho : {0.2, 0.5, 0.9})
            CHECK(gamma_phi(0.0, rho, phi) == doctest::Approx(dictator_stability(rho, phi)).epsilon(1e-10));
    CHECK(dictator_stability(0.5, PhiSpec::one_symmetric()) == doctest::Approx(neg_entropy(0.25)).epsilon(1e-15));
}

TEST_CASE("Gamma is symmetric under eps -> 1 - eps")
{
    for (double e : {0.1, 0.3})
        for (double rho : {0.4, 0.7})
            CHECK(std::abs(gamma_phi(e, rho, PhiSpec::one_symmetric()) -
                           gamma_phi(1 - e, rho, PhiSpec::one_symmetric())) < 1e-8);
}

TEST_CASE("Gamma(0.1) at rho = 0.7 agrees across two quadrature schemes")
{
    const auto phi = PhiSpec::one_symmetric();
    const double ours = gamma_phi(0.1, 0.7, phi);
    const double gk = gamma_gk(0.1, 0.7, phi);
    MESSAGE("Gamma(0.1; 0.7, one-sym) = " << ours);
    CHECK(std::abs(ours - gk) < 1e-8);
    CHECK(ours <= dictator_stability(0.7, phi));
    CHECK(ours >= phi(0.5) - 1e-12);
}

TEST_CASE("Gamma dips below the dictator value for small eps")
{
    const auto phi = PhiSpec::q_asymmetric(2.0);
    const double g0 = gamma_phi(0.0, 0.6, phi);
    for (double e : {0.02, 0.05, 0.1})
        CHECK(gamma_phi(e, 0.6, phi) < g0);
    for (int k = 1; k <= 10; ++k)
        CHECK(gamma_phi(0.05 * k, 0.6, phi) >= phi(0.5) - 1e-12);
}

TEST_CASE("gamma_phi_deficit matches the difference")
{
    const auto phi = PhiSpec::q_asymmetric(2.0);
    for (double e : {0.01, 0.1, 0.3})
        CHECK(gamma_phi_deficit(e, 0.5, phi) ==
              doctest::Approx(dictator_stability(0.5, phi) - gamma_phi(e, 0.5, phi)).epsilon(1e-7));
}

TEST_CASE("gamma_vec reductions")
{
    const auto phi = PhiSpec::one_symmetric();
    for (double e0 : {0.0, 0.1, 0.35}) {
        const double eps[] = {1 - e0, e0};
        CHECK(gamma_vec(eps, 1, 0.6, phi) == doctest::Approx(gamma_phi(e0, 0.6, phi)).epsilon(1e-10));
    }

    // Weights become the identity at rho = 1.
    const double four[] = {0.2, 0.7, 0.5, 0.9};
    double id = 0.0;
    for (double e : four)
        id += profile_phi_integral(e, 1.0, phi);
    CHECK(gamma_vec(four, 2, 1.0, phi) == doctest::Approx(id / 4).epsilon(1e-9));

    const double equal[] = {0.3, 0.3, 0.3, 0.3};
    CHECK(gamma_vec(equal, 2, 0.8, phi) == doctest::Approx(profile_phi_integral(0.3, 0.8, phi)).epsilon(1e-9));

    const double three[] = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(gamma_vec(three, 2, 0.5, phi), std::invalid_argument);
    const double bad[] = {0.1, 1.2};
    CHECK_THROWS_AS(gamma_vec(bad, 1, 0.5, phi), std::domain_error);
}

TEST_CASE("gamma_q closed forms")
{
    for (double rho : {0.3, 0.6, 0.9})
        for (double q : {0.5, 1.5, 2.0, 3.0}) {
            const double p = 1 + (q - 1) * rho * rho;
            CHECK(gamma_q(0.0, rho, q) ==
                  doctest::Approx(0.5 * std::pow(0.5 * (1 + rho), q) + 0.5 * std::pow(0.5 * (1 - rho), q))
                      .epsilon(1e-14));
            CHECK(gamma_q(0.5, rho, q) == doctest::Approx(std::pow(2.0, -q / p)).epsilon(1e-14));
            CHECK(gamma_q(0.2, rho, q) == doctest::Approx(gamma_q(0.8, rho, q)).epsilon(1e-14));
        }
    CHECK_THROWS_AS(gamma_q(0.1, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(gamma_q(0.1, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_q(0.1, 0.5, -2.0), std::domain_error);
}

TEST_CASE("gamma_q at q = 2, rho = 0.6, eps = 0.1 against 50-digit arithmetic")
{
    using big = boost::multiprecision::cpp_bin_float_50;
    const big rho("0.6"), eps("0.1"), q(2);
    const big p = 1 + (q - 1) * rho * rho;
    const big hi = eps + pow((1 + rho) / 2, p) * (1 - 2 * eps);
    const big lo = eps + pow((1 - rho) / 2, p) * (1 - 2 * eps);
    const big ref = (pow(hi, q / p) + pow(lo, q / p)) / 2;
    const double got = gamma_q(0.1, 0.6, 2.0);
    MESSAGE("Gamma_2(0.1; 0.6) = " << got);
    CHECK(std::abs(got - ref.convert_to<double>()) < 1e-14);
}

TEST_CASE("gamma_q sits on the Jensen side of 2^-q")
{
    for (double e : {0.0, 0.1, 0.3, 0.5}) {
        CHECK(gamma_q(e, 0.7, 2.0) >= 0.25 - 1e-15);
        CHECK(gamma_q(e, 0.7, 0.5) <= std::sqrt(0.5) + 1e-15);
    }
}

TEST_CASE("gamma_one examples")
{
    const double m = 0.5 * (1 - 0.6);
    CHECK(gamma_one(0.0, 0.6) == doctest::Approx(0.5 * neg_entropy(m)).epsilon(1e-14));
    for (double e : {0.0, 0.2, 0.5})
        CHECK(gamma_one(e, 0.0) == doctest::Approx(-0.5 * std::numbers::ln2).epsilon(1e-14));
    const double rho = 0.914;
    const double es = eps_star(rho);
    CHECK(std::abs(gamma_one(es, rho) - 0.5 * neg_entropy(0.5 * (1 - rho))) < 1e-10);
}

TEST_CASE("gamma_one matches the q -> 1 difference quotient")
{
    for (double rho : {0.2, 0.5, 0.8, 0.95})
        for (double e : {0.0, 0.05, 0.2, 0.4, 0.5}) {
            const double q = 1 + 1e-6;
            const double dq = (gamma_q(e, rho, q) - 0.5) / (q - 1);
            CHECK(std::abs(gamma_one(e, rho) - dq) < 1e-5);
        }
}

TEST_CASE("eps_star")
{
    const double es = eps_star(0.914);
    MESSAGE("eps_star(0.914) = " << es);
    CHECK(std::abs(es - 0.195055) <= 2e-6);
    CHECK(std::abs(eps_star_residual(es, 0.914)) < 1e-10);

    int below = 0;
    for (int k = 460; k <= 914; ++k) {
        const double rho = k / 1000.0;
        const double v = eps_star(rho);
        CHECK(std::abs(eps_star_residual(v, rho)) < 1e-10);
        if (v < 0.195)
            ++below;
    }
    CHECK(below == 0);

    CHECK_THROWS_AS(eps_star(0.0), std::domain_error);
    CHECK_THROWS_AS(eps_star(1.0), std::domain_error);
}

TEST_CASE("eps_star for small rho")
{
    // The root tends to 1 - ln 2 as rho -> 0.
    CHECK(std::abs(eps_star(1e-4) - (1 - std::numbers::ln2)) < 1e-6);
    for (int k = 1; k <= 50; ++k)
        CHECK_NOTHROW(eps_star(k * 1e-3));
}

TEST_CASE("eps_star residual changes sign once on the bracket")
{
    for (double rho : {0.3, 0.6, 0.9}) {
        int changes = 0;
        double prev = eps_star_residual(1e-6, rho);
        for (int k = 1; k < 500; ++k) {
            const double cur = eps_star_residual(k / 1000.0, rho);
            if ((cur > 0) != (prev > 0))
                ++changes;
            prev = cur;
        }
        CHECK(changes == 1);
    }
}

TEST_CASE("gamma_asymptotic sign and limit")
{
    const auto phi = PhiSpec::q_asymmetric(2.0);
    for (double rho : {0.3, 0.5, 0.9}) {
        const double base = dictator_stability(rho, phi);
        for (double e : {1e-2, 1e-4, 1e-8})
            CHECK(gamma_asymptotic(e, rho, phi) < base);
        CHECK(gamma_asymptotic(1e-300, rho, phi) == doctest::Approx(base).epsilon(1e-12));
    }
    const auto no_deriv = PhiSpec::custom("sq", [](double t) { return t * t; }, {}, true);
    CHECK_THROWS_AS(gamma_asymptotic(0.1, 0.5, no_deriv), std::logic_error);
    CHECK_THROWS_AS(gamma_asymptotic(0.0, 0.5, phi), std::domain_error);
    CHECK_THROWS_AS(gamma_asymptotic(0.5, 0.5, phi), std::domain_error);
}
