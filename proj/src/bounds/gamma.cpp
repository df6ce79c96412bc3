#include "noisestab/gamma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "noisestab/roots.hpp"
#include "noisestab/theta.hpp"

namespace noisestab::bounds {

namespace {

void check_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("rho must lie in [0,1]");
}

void check_eps(double eps)
{
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::domain_error("eps must lie in [0,1]");
}

std::vector<double> breakpoints_of(std::span<const ThetaProfile> profiles)
{
    std::vector<double> pts{0.0, 1.0};
    for (const auto& p : profiles)
        pts.insert(pts.end(), p.clause_boundaries().begin(), p.clause_boundaries().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace

double dictator_stability(double rho, const PhiSpec& phi)
{
    check_rho(rho);
    return 0.5 * (phi(0.5 * (1.0 + rho)) + phi(0.5 * (1.0 - rho)));
}

double gamma_phi(double eps, double rho, const PhiSpec& phi, const QuadratureOptions& options)
{
    check_eps(eps);
    check_rho(rho);
    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    const ThetaProfile profiles[] = {ThetaProfile(1.0 - eps, rho), ThetaProfile(eps, rho)};
    const auto& hi = profiles[0];
    const auto& lo = profiles[1];
    const auto pts = breakpoints_of(profiles);
    auto integrand = [&](double beta) {
        const double a = hi(beta);
        const double b = lo(beta);
        return 0.5 * (phi(p * a + m * b) + phi(m * a + p * b));
    };
    return integrate_or_throw(integrand, pts, options);
}

double gamma_phi_deficit(double eps, double rho, const PhiSpec& phi, const QuadratureOptions& options)
{
    check_eps(eps);
    check_rho(rho);
    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    const double base = dictator_stability(rho, phi);
    const ThetaProfile profiles[] = {ThetaProfile(1.0 - eps, rho), ThetaProfile(eps, rho)};
    const auto& hi = profiles[0];
    const auto& lo = profiles[1];
    const auto pts = breakpoints_of(profiles);
    auto integrand = [&](double beta) {
        const double a = hi(beta);
        const double b = lo(beta);
        return base - 0.5 * (phi(p * a + m * b) + phi(m * a + p * b));
    };
    return integrate_or_throw(integrand, pts, options);
}

double gamma_vec(std::span<const double> eps, int k, double rho, const PhiSpec& phi,
                 const QuadratureOptions& options)
{
    if (k < 0 || k > 16)
        throw std::invalid_argument("gamma_vec: k out of range");
    const std::size_t points = std::size_t{1} << k;
    if (eps.size() != points)
        throw std::invalid_argument("gamma_vec: expected 2^k entries");
    check_rho(rho);
    for (double e : eps)
        check_eps(e);

    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    std::vector<double> weights(points * points);
    for (std::size_t a = 0; a < points; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < points; ++b) {
            const int d = std::popcount(a ^ b);
            const double w = std::pow(p, k - d) * std::pow(m, d);
            weights[a * points + b] = w;
            row += w;
        }
        if (std::abs(row - 1.0) > 1e-12)
            throw std::logic_error("gamma_vec: mixing weights are not row-stochastic");
    }

    std::vector<ThetaProfile> profiles;
    profiles.reserve(points);
    for (double e : eps)
        profiles.emplace_back(e, rho);
    const auto pts = breakpoints_of(profiles);

    std::vector<double> th(points);
    auto integrand = [&](double beta) {
        for (std::size_t b = 0; b < points; ++b)
            th[b] = profiles[b](beta);
        double sum = 0.0;
        for (std::size_t a = 0; a < points; ++a) {
            double mix = 0.0;
            for (std::size_t b = 0; b < points; ++b)
                mix += weights[a * points + b] * th[b];
            sum += phi(mix);
        }
        return sum / static_cast<double>(points);
    };
    return integrate_or_throw(integrand, pts, options);
}

double gamma_q(double eps, double rho, double q)
{
    check_eps(eps);
    check_rho(rho);
    if (!(q > 0.0) || q == 1.0)
        throw std::domain_error("gamma_q needs q > 0 and q != 1");
    const double e = std::min(eps, 1.0 - eps);
    const double p = 1.0 + (q - 1.0) * rho * rho;
    const double hi = e + std::pow(0.5 * (1.0 + rho), p) * (1.0 - 2.0 * e);
    const double lo = e + std::pow(0.5 * (1.0 - rho), p) * (1.0 - 2.0 * e);
    return 0.5 * std::pow(hi, q / p) + 0.5 * std::pow(lo, q / p);
}

double gamma_one(double eps, double rho)
{
    check_eps(eps);
    check_rho(rho);
    const double e = std::min(eps, 1.0 - eps);
    const double m = 0.5 * (1.0 - rho);
    return 0.5 * (1.0 - rho * rho) * neg_entropy(m + rho * e) + (0.5 - e) * rho * rho * neg_entropy(m);
}

double eps_star_residual(double eps, double rho)
{
    const double m = 0.5 * (1.0 - rho);
    const double d = rho * eps;
    // h(m + d) - h(m) without cancellation, so the sign near eps = 0 survives small rho.
    const double dh = m * std::log1p(d / m) + d * std::log(m + d) + (1.0 - m) * std::log1p(-d / (1.0 - m)) -
                      d * std::log(1.0 - m - d);
    return dh - 2.0 * rho * rho * eps / (1.0 - rho * rho) * neg_entropy(m);
}

double eps_star(double rho)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("eps_star needs rho in (0,1)");
    return bisect([rho](double e) { return eps_star_residual(e, rho); }, 1e-12, 0.5 - 1e-12, 1e-12);
}

double gamma_asymptotic(double eps, double rho, const PhiSpec& phi)
{
    if (!(eps > 0.0 && eps < 0.5))
        throw std::domain_error("gamma_asymptotic needs eps in (0, 1/2)");
    check_rho(rho);
    if (!phi.has_deriv())
        throw std::logic_error("gamma_asymptotic needs a differentiable Phi");
    const double slope = phi.deriv(0.5 * (1.0 + rho)) - phi.deriv(0.5 * (1.0 - rho));
    const double l = 2.0 * std::log(1.0 / eps);
    return dictator_stability(rho, phi) - 0.25 * rho * slope * l * std::sqrt(l) * eps;
}

} // namespace noisestab::bounds
