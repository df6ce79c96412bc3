#pragma once

#include <span>

#include "noisestab/phi.hpp"
#include "noisestab/quadrature.hpp"

namespace noisestab::bounds {

/// Phi-stability of a dictator: (Phi((1+rho)/2) + Phi((1-rho)/2)) / 2.
double dictator_stability(double rho, const PhiSpec& phi);

/// Upper bound on the Phi-stability of a balanced function at distance eps from a dictator:
///
///   1/2 * int_0^1 [ Phi(P th_{1-eps} + M th_eps) + Phi(M th_{1-eps} + P th_eps) ] dbeta
///
/// with P = (1+rho)/2, M = (1-rho)/2 and th_a the theta profile of mean a. Quadrature panels
/// are split at every clause boundary of both profiles.
double gamma_phi(double eps, double rho, const PhiSpec& phi, const QuadratureOptions& options = {});

/// dictator_stability - gamma_phi, integrated directly so that tiny deficits keep relative accuracy.
double gamma_phi_deficit(double eps, double rho, const PhiSpec& phi, const QuadratureOptions& options = {});

/// Vector form over a k-subcube: eps has 2^k entries indexed by point masks a, each the
/// conditional mean of f on the subcube x_S = a. Mixing weights are P^{k-d} M^d with d the
/// Hamming distance between masks.
double gamma_vec(std::span<const double> eps, int k, double rho, const PhiSpec& phi,
                 const QuadratureOptions& options = {});

/// Closed-form bound on E[(T_rho f)^q] with p = 1 + (q-1) rho^2. eps is folded to min(eps, 1-eps).
/// An upper bound for q > 1 and a lower bound for 0 < q < 1.
double gamma_q(double eps, double rho, double q);

/// q-derivative of gamma_q at q = 1: bound on E[T f ln T f].
double gamma_one(double eps, double rho);

/// Root in (0, 1/2) of h(M + rho eps) = (1 + 2 rho^2 eps / (1 - rho^2)) h(M).
/// Throws BracketError if the bracket [1e-12, 1/2 - 1e-12] has no sign change.
double eps_star(double rho);

/// Left side minus right side of the eps_star equation.
double eps_star_residual(double eps, double rho);

/// Leading small-eps expansion: dictator_stability - (rho/4)(Phi'(P) - Phi'(M)) (2 ln(1/eps))^{3/2} eps.
/// Throws std::logic_error if phi has no derivative.
double gamma_asymptotic(double eps, double rho, const PhiSpec& phi);

} // namespace noisestab::bounds
