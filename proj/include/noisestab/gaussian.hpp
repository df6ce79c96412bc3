#pragma once

#include "noisestab/phi.hpp"
#include "noisestab/quadrature.hpp"

namespace noisestab::bounds {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF. Rational first guess refined by two Halley steps on erfc.
/// Returns -inf at 0 and +inf at 1; throws std::domain_error outside [0,1].
double normal_quantile(double p);

/// Gaussian theta profile Psi((Psi^{-1}(alpha) - rho Psi^{-1}(beta)) / sqrt(1 - rho^2)).
/// Endpoints in alpha or beta return the limiting 0/1 value; rho = 1 gives the step 1{beta < alpha}.
double gaussian_theta(double alpha, double beta, double rho);

/// int_0^1 Phi(gaussian_theta(alpha, beta, rho)) dbeta; equals the Phi-stability of a half-space
/// of measure alpha under the Ornstein-Uhlenbeck operator.
double borell_bound(double alpha, double rho, const PhiSpec& phi, const QuadratureOptions& options = {});

} // namespace noisestab::bounds
