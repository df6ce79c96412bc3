#pragma once

#include <span>
#include <vector>

namespace noisestab::bounds {

/// Small-set-expansion envelope on the maximal noise stability of a pair of sets with
/// measures (alpha, beta) under correlation rho:
///
///   min{ alpha, beta, J(s,t), alpha + beta - 1 + J(s^,t^) },
///   J(s,t) = exp(-(s^2 + t^2 - 2 rho s t) / (2 (1 - rho^2))),
///
/// with alpha = e^{-s^2/2} = 1 - e^{-s^^2/2} and likewise (t, t^) for beta. The joint term J(s,t)
/// only bounds the stability for rho s <= t <= s/rho, and the complement term only for
/// rho s^ <= t^ <= s^/rho; outside those ranges they are not admitted to the min.
/// rho = 0 gives alpha*beta, rho = 1 gives min(alpha, beta).
double big_theta(double alpha, double beta, double rho);

/// Which expression of the envelope is active at a given beta.
enum class ThetaClause {
    joint,      ///< J(s,t)
    complement, ///< alpha + beta - 1 + J(s^,t^)
    zero,       ///< alpha (the profile is 0 there)
    one,        ///< beta (the profile is 1 there)
};

/// beta-derivative of big_theta(alpha, ., rho): the decreasing profile that majorizes every
/// noised Boolean function of mean alpha. Immutable after construction.
class ThetaProfile {
public:
    ThetaProfile(double alpha, double rho);

    double alpha() const { return alpha_; }
    double rho() const { return rho_; }
    double s() const { return s_; }
    double s_hat() const { return s_hat_; }

    double operator()(double beta) const;

    /// Active clause, chosen as the minimizing envelope term (ties go to the earlier clause).
    ThetaClause clause(double beta) const;

    /// Clauses whose stated (s, t, s^, t^) region conditions contain beta.
    std::vector<ThetaClause> region_clauses(double beta) const;

    /// Evaluates through the region conditions; throws std::domain_error naming beta when no
    /// region claims it or the claiming regions disagree with the minimizing term.
    double checked_eval(double beta) const;

    /// Interior beta values where the active clause can change, sorted.
    std::span<const double> clause_boundaries() const { return boundaries_; }

    /// Integral of the profile from 0 to beta, i.e. big_theta(alpha, beta, rho).
    double cumulative(double beta) const;

private:
    double clause_value(ThetaClause c, double beta) const;

    double alpha_;
    double rho_;
    double s_ = 0.0;
    double s_hat_ = 0.0;
    std::vector<double> boundaries_;
};

/// Pointwise weighted sum of theta profiles.
class MixtureProfile {
public:
    MixtureProfile(std::span<const double> lambdas, std::span<const double> alphas, double rho);

    double operator()(double beta) const;
    /// Union of the components' clause boundaries, sorted and deduplicated.
    std::vector<double> clause_boundaries() const;
    std::size_t size() const { return profiles_.size(); }

private:
    std::vector<double> weights_;
    std::vector<ThetaProfile> profiles_;
};

MixtureProfile theta_mixture(std::span<const double> lambdas, std::span<const double> alphas, double rho);

} // namespace noisestab::bounds
