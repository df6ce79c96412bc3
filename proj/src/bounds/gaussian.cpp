#include "noisestab/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace noisestab::bounds {

namespace {

// Acklam's rational approximation, relative error about 1e-9 before refinement.
constexpr double kA[6] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                          1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[5] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                          6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kC[6] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                          -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[4] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                          3.754408661907416e+00};
constexpr double kLow = 0.02425;

double acklam(double p)
{
    if (p < kLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

// Lower half only (p <= 1/2), where erfc keeps full relative accuracy.
double lower_quantile(double p)
{
    double x = acklam(p);
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

} // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("normal_quantile needs p in [0,1]");
    if (p == 0.0)
        return -std::numeric_limits<double>::infinity();
    if (p == 1.0)
        return std::numeric_limits<double>::infinity();
    if (p == 0.5)
        return 0.0;
    if (p < 0.5)
        return lower_quantile(p);
    return -lower_quantile(1.0 - p);
}

double gaussian_theta(double alpha, double beta, double rho)
{
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("gaussian_theta needs alpha, beta in [0,1]");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("rho must lie in [0,1]");
    if (alpha == 0.0 || alpha == 1.0 || rho == 0.0)
        return alpha;
    if (rho == 1.0)
        return beta < alpha ? 1.0 : 0.0;
    if (beta == 0.0)
        return 1.0;
    if (beta == 1.0)
        return 0.0;
    const double arg = (normal_quantile(alpha) - rho * normal_quantile(beta)) / std::sqrt(1.0 - rho * rho);
    return normal_cdf(arg);
}

double borell_bound(double alpha, double rho, const PhiSpec& phi, const QuadratureOptions& options)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("borell_bound needs alpha in [0,1]");
    std::vector<double> pts{0.0, 1.0};
    if (alpha > 0.0 && alpha < 1.0)
        pts = {0.0, alpha, 1.0};
    return integrate_or_throw([&](double beta) { return phi(gaussian_theta(alpha, beta, rho)); }, pts, options);
}

} // namespace noisestab::bounds
