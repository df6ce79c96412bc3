#include "noisestab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace noisestab::bounds {

namespace {

constexpr double kLowClamp = 1e-300;
constexpr double kHighClamp = 1.0 - 1e-16;

void check_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("rho must lie in [0,1]");
}

void check_unit(double x, const char* what)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

double clamp_open(double x) { return std::clamp(x, kLowClamp, kHighClamp); }

// sqrt(-2 ln x) and sqrt(-2 ln(1 - x))
double gauss_level(double x) { return std::sqrt(-2.0 * std::log(x)); }
double gauss_level_hat(double x) { return std::sqrt(-2.0 * std::log1p(-x)); }

struct Levels {
    double s, t, s_hat, t_hat;
};

Levels levels(double alpha, double beta)
{
    return {gauss_level(alpha), gauss_level(beta), gauss_level_hat(alpha), gauss_level_hat(beta)};
}

bool joint_admissible(const Levels& l, double rho) { return rho * l.s <= l.t && l.t * rho <= l.s; }
bool complement_admissible(const Levels& l, double rho)
{
    return rho * l.s_hat <= l.t_hat && l.t_hat * rho <= l.s_hat;
}

double joint_exponent(double a, double b, double rho)
{
    return -(a * a + b * b - 2.0 * rho * a * b) / (2.0 * (1.0 - rho * rho));
}

// Envelope terms in clause order; inadmissible terms are +inf.
struct Terms {
    double value[4];
};

Terms envelope_terms(double alpha, double beta, double rho, const Levels& l)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    Terms out{{inf, inf, alpha, beta}};
    if (joint_admissible(l, rho))
        out.value[0] = std::exp(joint_exponent(l.s, l.t, rho));
    if (complement_admissible(l, rho))
        out.value[1] = alpha + beta - 1.0 + std::exp(joint_exponent(l.s_hat, l.t_hat, rho));
    return out;
}

ThetaClause argmin_clause(const Terms& terms)
{
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (terms.value[i] < terms.value[best])
            best = i;
    return static_cast<ThetaClause>(best);
}

} // namespace

double big_theta(double alpha, double beta, double rho)
{
    check_unit(alpha, "alpha");
    check_unit(beta, "beta");
    check_rho(rho);
    if (alpha == 0.0 || beta == 0.0)
        return 0.0;
    if (alpha == 1.0)
        return beta;
    if (beta == 1.0)
        return alpha;
    if (rho == 0.0)
        return alpha * beta;
    if (rho == 1.0)
        return std::min(alpha, beta);
    const double a = clamp_open(alpha);
    const double b = clamp_open(beta);
    const auto terms = envelope_terms(a, b, rho, levels(a, b));
    return *std::min_element(std::begin(terms.value), std::end(terms.value));
}

ThetaProfile::ThetaProfile(double alpha, double rho) : alpha_(alpha), rho_(rho)
{
    check_unit(alpha, "alpha");
    check_rho(rho);
    if (alpha == 0.0 || alpha == 1.0 || rho == 0.0)
        return;
    const double a = clamp_open(alpha);
    s_ = gauss_level(a);
    s_hat_ = gauss_level_hat(a);
    if (rho == 1.0) {
        boundaries_.push_back(alpha);
        return;
    }
    const double r2 = rho * rho;
    const double la = std::log(a);
    const double l1a = std::log1p(-a);
    const double candidates[] = {
        std::exp(la / r2),     // t = s / rho
        std::exp(la * r2),     // t = rho s
        -std::expm1(l1a * r2), // t^ = rho s^
        -std::expm1(l1a / r2), // t^ = s^ / rho
        1.0 - a,               // t = s^
    };
    for (double c : candidates)
        if (c > 0.0 && c < 1.0)
            boundaries_.push_back(c);
    std::sort(boundaries_.begin(), boundaries_.end());
    boundaries_.erase(std::unique(boundaries_.begin(), boundaries_.end()), boundaries_.end());
}

ThetaClause ThetaProfile::clause(double beta) const
{
    check_unit(beta, "beta");
    if (alpha_ == 0.0)
        return ThetaClause::zero;
    if (alpha_ == 1.0)
        return ThetaClause::one;
    if (rho_ == 1.0)
        return beta < alpha_ ? ThetaClause::one : ThetaClause::zero;
    // t or t_hat is infinite at the end points; the clamped levels would miss that.
    if (beta == 0.0)
        return ThetaClause::one;
    if (beta == 1.0)
        return ThetaClause::zero;
    const double a = clamp_open(alpha_);
    const double b = clamp_open(beta);
    return argmin_clause(envelope_terms(a, b, rho_, levels(a, b)));
}

double ThetaProfile::clause_value(ThetaClause c, double beta) const
{
    switch (c) {
    case ThetaClause::zero:
        return 0.0;
    case ThetaClause::one:
        return 1.0;
    case ThetaClause::joint:
    case ThetaClause::complement: {
        const double b = clamp_open(beta);
        const auto l = levels(clamp_open(alpha_), b);
        const double one_minus_r2 = 1.0 - rho_ * rho_;
        if (c == ThetaClause::joint) {
            // d/dbeta J(s,t) with dt/dbeta = -e^{t^2/2}/t
            const double e = l.t * l.t / 2.0 + joint_exponent(l.s, l.t, rho_);
            return (l.t - rho_ * l.s) / (one_minus_r2 * l.t) * std::exp(e);
        }
        const double e = l.t_hat * l.t_hat / 2.0 + joint_exponent(l.s_hat, l.t_hat, rho_);
        return 1.0 - (l.t_hat - rho_ * l.s_hat) / (one_minus_r2 * l.t_hat) * std::exp(e);
    }
    }
    throw std::logic_error("unknown theta clause");
}

double ThetaProfile::operator()(double beta) const
{
    if (rho_ == 0.0 || alpha_ == 0.0 || alpha_ == 1.0) {
        check_unit(beta, "beta");
        return alpha_;
    }
    return std::clamp(clause_value(clause(beta), beta), 0.0, 1.0);
}

std::vector<ThetaClause> ThetaProfile::region_clauses(double beta) const
{
    check_unit(beta, "beta");
    std::vector<ThetaClause> out;
    if (alpha_ == 0.0 || alpha_ == 1.0 || rho_ == 0.0 || rho_ == 1.0 || beta == 0.0 || beta == 1.0) {
        out.push_back(clause(beta));
        return out;
    }
    const double a = clamp_open(alpha_);
    const auto l = levels(a, clamp_open(beta));
    const double r = rho_;
    const bool joint_range = r * l.s <= l.t && l.t <= l.s / r;
    const bool comp_range = r * l.s_hat <= l.t_hat && l.t_hat <= l.s_hat / r;
    const bool comp_outside = l.t_hat <= r * l.s_hat || l.t_hat >= l.s_hat / r;
    const bool joint_outside = l.t <= r * l.s || l.t >= l.s / r;
    if ((joint_range && comp_range && l.t >= l.s_hat) || (joint_range && comp_outside))
        out.push_back(ThetaClause::joint);
    if ((comp_range && joint_range && l.t <= l.s_hat) || (comp_range && joint_outside))
        out.push_back(ThetaClause::complement);
    if (l.t <= r * l.s && l.t_hat >= l.s_hat / r)
        out.push_back(ThetaClause::zero);
    if (l.t >= l.s / r && l.t_hat <= r * l.s_hat)
        out.push_back(ThetaClause::one);
    return out;
}

double ThetaProfile::checked_eval(double beta) const
{
    const auto regions = region_clauses(beta);
    if (regions.empty())
        throw std::domain_error("theta region conditions do not classify beta = " + std::to_string(beta));
    const auto active = clause(beta);
    if (std::find(regions.begin(), regions.end(), active) == regions.end())
        throw std::domain_error("theta region conditions disagree with the active envelope term at beta = " +
                                std::to_string(beta));
    return (*this)(beta);
}

double ThetaProfile::cumulative(double beta) const { return big_theta(alpha_, beta, rho_); }

MixtureProfile::MixtureProfile(std::span<const double> lambdas, std::span<const double> alphas, double rho)
{
    if (lambdas.size() != alphas.size())
        throw std::invalid_argument("theta mixture: weight and mean vectors differ in length");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= 0.0))
            throw std::invalid_argument("theta mixture: weights must be nonnegative");
        weights_.push_back(lambdas[i]);
        profiles_.emplace_back(alphas[i], rho);
    }
}

double MixtureProfile::operator()(double beta) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < profiles_.size(); ++i)
        sum += weights_[i] * profiles_[i](beta);
    return sum;
}

std::vector<double> MixtureProfile::clause_boundaries() const
{
    std::vector<double> out;
    for (const auto& p : profiles_)
        out.insert(out.end(), p.clause_boundaries().begin(), p.clause_boundaries().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MixtureProfile theta_mixture(std::span<const double> lambdas, std::span<const double> alphas, double rho)
{
    return MixtureProfile(lambdas, alphas, rho);
}

} // namespace noisestab::bounds
