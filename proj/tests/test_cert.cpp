#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "noisestab/certifier.hpp"
#include "noisestab/gamma.hpp"
#include "noisestab/phi.hpp"

using namespace noisestab;
using namespace noisestab::cert;

TEST_CASE("varphi")
{
    CHECK(varphi(0.0) == 0.0);
    CHECK(varphi(1.0) == 0.0);
    CHECK(varphi(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(phi_c(0.5) == doctest::Approx(0.5 * std::numbers::ln2));
    CHECK(phi_lp(0.5) == 0.25);
    const double lp = 2 * 0.04 * (1 / std::sqrt(0.2) - 1);
    CHECK(phi_lp(0.2) == doctest::Approx(lp).epsilon(1e-15));
    CHECK(varphi(0.2) == doctest::Approx(std::min(phi_c(0.2), lp)).epsilon(1e-15));
    CHECK(varphi(0.8) == doctest::Approx(varphi(0.2)).epsilon(1e-14));
    // Both branches of phi_LP meet at 1/4.
    CHECK(phi_lp(0.25) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("omega")
{
    CHECK(omega(0.0) == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-14));
    CHECK(omega(0.0) == doctest::Approx(0.1591549).epsilon(1e-7));
    const double b0 = beta_zero();
    CHECK(std::abs(b0 - 0.175661) < 1e-6);
    CHECK(std::abs(omega(b0) - 0.193026) < 1e-6);
    CHECK(omega_closed_form(b0) == doctest::Approx(b0 * b0 - 0.5 * b0 + 0.25).epsilon(1e-13));
    double worst = 0.0;
    for (int k = 0; k < 30500; ++k) {
        const double b = k * 1e-5;
        worst = std::max(worst, std::abs(omega(b) - omega_closed_form(b)));
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(omega_closed_form(0.4), std::domain_error);
}

TEST_CASE("omega_max")
{
    const auto m = omega_max(0.914);
    CHECK(std::abs(m.value - 0.193026) <= 2e-6);
    CHECK(std::abs(m.argmax - 0.175661) <= 1e-4);

    // Dense-grid oracle at rho = 0.46.
    const double right = 0.5 - bounds::eps_star(0.46);
    double best = -1.0;
    for (long k = 0;; ++k) {
        const double b = std::min(right, k * 1e-7);
        best = std::max(best, omega(b));
        if (b >= right)
            break;
    }
    // omega has a corner at beta_zero, where a 1e-7 grid alone is only good to about 5e-9.
    if (beta_zero() <= right)
        best = std::max(best, omega(beta_zero()));
    const auto m46 = omega_max(0.46);
    MESSAGE("omega_max(0.46) = " << m46.value << " at " << m46.argmax);
    CHECK(std::abs(m46.value - best) < 1e-9);
    CHECK(m46.value >= best - 1e-12);
}

TEST_CASE("omega_max takes the right end when the window stops before beta_zero")
{
    // eps_star grows with rho toward 1/2, so 1/2 - eps_star(rho) < beta_zero near rho = 1.
    for (double rho : {0.97, 0.99}) {
        const double right = 0.5 - bounds::eps_star(rho);
        if (right < beta_zero()) {
            const auto m = omega_max(rho);
            CHECK(m.argmax == doctest::Approx(right).epsilon(1e-9));
            double prev = -1.0;
            for (int k = 0; k <= 1000; ++k) {
                const double v = omega(right * k / 1000.0);
                CHECK(v >= prev - 1e-15);
                prev = v;
            }
        }
    }
}

TEST_CASE("phi ratio")
{
    CHECK(phi_ratio(0.5) == doctest::Approx(-2 * std::numbers::ln2).epsilon(1e-15));
    CHECK(phi_ratio_prime(0.5) == doctest::Approx(4 * std::numbers::ln2).epsilon(1e-15));
    for (double s : {0.05, 0.2, 0.5, 0.7, 0.95}) {
        const double h = 1e-6;
        const double fd = (phi_ratio(s + h) - phi_ratio(s - h)) / (2 * h);
        CHECK(std::abs(phi_ratio_prime(s) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
    CHECK_THROWS_AS(phi_ratio(0.0), std::domain_error);
    CHECK_THROWS_AS(phi_ratio_prime(1.0), std::domain_error);
}

TEST_CASE("equal phi' values come in pairs summing past 1")
{
    // phi' decreases then increases; for each t1 left of the minimum find t2 on the right with the same value.
    const int n = 10000;
    int tmin = 1;
    for (int k = 1; k < n; ++k)
        if (phi_ratio_prime(k / double(n)) < phi_ratio_prime(tmin / double(n)))
            tmin = k;
    int pairs = 0, bad = 0;
    int j = tmin;
    for (int i = tmin - 1; i >= 1; --i) {
        const double target = phi_ratio_prime(i / double(n));
        while (j < n - 1 && phi_ratio_prime(j / double(n)) < target)
            ++j;
        if (phi_ratio_prime(j / double(n)) < target)
            break;
        ++pairs;
        if (i / double(n) + j / double(n) <= 1.0)
            ++bad;
    }
    CHECK(pairs > 100);
    CHECK(bad == 0);
}

TEST_CASE("t_rho")
{
    const double t = t_rho(0.914);
    CHECK(std::abs(t - 0.663100) <= 1e-4);
    const double w = omega_max(0.914).value;
    CHECK(std::abs(t_rho_residual(t, 0.914, w)) < 1e-9);
    for (int k = 0; k <= 20; ++k) {
        const double rho = 0.46 + k * (0.914 - 0.46) / 20;
        const double tr = t_rho(rho);
        CHECK(tr >= 0.0);
        CHECK(tr <= 0.75);
    }
}

TEST_CASE("theta and upsilon bar")
{
    const double th = theta_rho(0.914);
    CHECK(std::abs(th - (-0.00169063)) <= 1e-5);
    for (double rho : {0.5, 0.7, 0.9}) {
        const double dict = bounds::neg_entropy(0.5 * (1 + rho));
        const auto ub = upsilon_bar(rho);
        CHECK((theta_rho(rho) <= 0) == (ub.value <= dict));
    }
}

TEST_CASE("t_rho maximises the theta objective")
{
    for (double rho : {0.5, 0.7, 0.914}) {
        const double w = omega_max(rho).value;
        const double tr = t_rho(rho, w);
        const double at = theta_objective(tr, rho, w);
        double best = -1e300, arg = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const double t = k / 10000.0;
            const double v = theta_objective(t, rho, w);
            if (v > best) {
                best = v;
                arg = t;
            }
        }
        CHECK(best <= at + 1e-12);
        CHECK(at - best < 1e-6);
        CHECK(std::abs(arg - tr) <= 1e-4);
    }
}

TEST_CASE("upsilon bar is a true maximum over t")
{
    const auto ub = upsilon_bar(0.6);
    const double w = omega_max(0.6).value;
    const double rho = 0.6;
    for (int k = 0; k < 1000; ++k) {
        const double t = k / 1000.0;
        const double v = (1 - rho) * (1 + rho - 4 * rho * rho * w) / (2 * (1 + t - rho * rho)) *
                         phi_ratio((1 - t) / 2);
        CHECK(v <= ub.value + 1e-12);
    }
}

TEST_CASE("upsilon 2d")
{
    for (double rho : {0.6, 0.914}) {
        const auto p = upsilon_gamma(0.0, 0.0, 0.0, rho);
        REQUIRE(p.feasible);
        CHECK(p.gamma == doctest::Approx(2 * (p.p1 + p.p2) * -std::numbers::ln2).epsilon(1e-14));
    }
    // Nested grids: n + 1 doubling.
    for (double beta : {0.0, 0.1, 0.2}) {
        const double a = upsilon_2d(beta, 0.8, 49);
        const double b = upsilon_2d(beta, 0.8, 99);
        const double c = upsilon_2d(beta, 0.8, 199);
        CHECK(b >= a);
        CHECK(c >= b);
    }
    for (double rho : {0.6, 0.8, 0.914}) {
        const double ub = upsilon_bar(rho).value;
        const double right = 0.5 - bounds::eps_star(rho);
        for (int k = 0; k <= 10; ++k)
            CHECK(upsilon_2d(right * k / 10, rho, 99) <= ub + 1e-6);
    }
    CHECK_THROWS_AS(upsilon_2d(0.1, 0.5, 0), std::invalid_argument);
}

TEST_CASE("Lipschitz margin")
{
    for (double rho : {0.46, 0.6, 0.75, 0.914}) {
        const double fd = lipschitz_margin(rho);
        CHECK(fd <= 20.0);
        CHECK(std::abs(std::abs(theta_prime(rho)) - fd) < 1e-4);
    }
    double prev = lipschitz_margin(0.46);
    double worst_jump = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double cur = lipschitz_margin(0.46 + k * (0.914 - 0.46) / 100);
        worst_jump = std::max(worst_jump, std::abs(cur - prev));
        prev = cur;
    }
    CHECK(worst_jump < 0.5);
}

TEST_CASE("certificate grid")
{
    CHECK(grid_size(0.46, 0.914, 0.00008) == 5676);
    CHECK(grid_size(0.5, 0.5, 0.1) == 1);
    // Off-grid right end is appended.
    CHECK(grid_size(0.0 + 0.1, 0.35, 0.1) == 4);
}

TEST_CASE("certificate at the published constants")
{
    const auto c = verify_interval(0.46, 0.914, 0.0016, 20);
    CHECK(c.pass);
    CHECK(c.n_points == 5676);
    CHECK(c.per_point.size() == 5676);
    CHECK(c.worst_theta < -0.0016);
    CHECK(std::abs(c.worst_rho - 0.914) <= 0.0002);
    CHECK(c.per_point.front().rho == 0.46);
    CHECK(c.per_point.back().rho == 0.914);
    CHECK(c.max_abs_theta_prime <= 20.0);
    CHECK(c.tool_version == kToolVersion);

    const auto tight = verify_interval(0.46, 0.914, 0.002, 20, std::nullopt, false);
    CHECK_FALSE(tight.pass);
    CHECK(tight.per_point.empty());
}

TEST_CASE("certificate edge cases")
{
    const auto single = verify_interval(0.7, 0.7, 0.0016, 20);
    CHECK(single.n_points == 1);
    CHECK(single.worst_rho == 0.7);

    const auto coarse = verify_interval(0.6, 0.7, 0.0016, 20, 0.01);
    CHECK_FALSE(coarse.pass);
    CHECK_FALSE(coarse.diagnostics.empty());

    // Passing at a slack implies passing at any smaller slack on the same grid.
    const auto a = verify_interval(0.8, 0.81, 0.0016, 20, 0.00005);
    const auto b = verify_interval(0.8, 0.81, 0.001, 20, 0.00005);
    CHECK(a.pass);
    CHECK(b.pass);

    CHECK_THROWS_AS(verify_interval(0.7, 0.6, 0.0016, 20), std::invalid_argument);
    CHECK_THROWS_AS(verify_interval(0.6, 0.7, 0.0, 20), std::invalid_argument);
    CHECK_THROWS_AS(verify_interval(0.6, 0.7, 0.0016, -1), std::invalid_argument);
    CHECK_THROWS_AS(verify_interval(0.0, 0.7, 0.0016, 20), std::invalid_argument);
    CHECK_THROWS_AS(verify_interval(0.6, 1.0, 0.0016, 20), std::invalid_argument);
}

TEST_CASE("certificate is deterministic and independent of threads")
{
    const auto a = to_json(verify_interval(0.6, 0.62, 0.0016, 20, std::nullopt, true, 1));
    const auto b = to_json(verify_interval(0.6, 0.62, 0.0016, 20, std::nullopt, true, 1));
    const auto c = to_json(verify_interval(0.6, 0.62, 0.0016, 20, std::nullopt, true, 3));
    CHECK(a == b);
    CHECK(a == c);
    REQUIRE_FALSE(a.empty());
    CHECK(a.back() == '\n');

    const auto j = nlohmann::json::parse(a);
    for (const char* key : {"rho_lo", "rho_hi", "step", "delta", "lipschitz_m", "n_points", "worst_theta",
                            "worst_rho", "pass", "per_point", "tool_version"})
        CHECK(j.contains(key));
    CHECK(j["n_points"].get<std::size_t>() == j["per_point"].size());
    CHECK(j["rho_lo"].get<double>() == 0.6);
    CHECK(j["pass"].get<bool>());
}
