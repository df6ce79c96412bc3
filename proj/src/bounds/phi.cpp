#include "noisestab/phi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace noisestab::bounds {

namespace {

constexpr double kSeriesBand = 1e-9;

// t * ln_q(t) with the 0 ln_q 0 = 0 convention.
double t_log_q(double t, double q)
{
    if (t == 0.0) {
        if (q <= 0.0)
            throw std::domain_error("t ln_q t has no finite limit at t = 0 for q <= 0");
        return 0.0;
    }
    return t * q_log(t, q);
}

// d/dt [t ln_q t] = ln_q t + t^{q-1}
double t_log_q_deriv(double t, double q)
{
    if (t <= 0.0 || t >= 1.0 + 1e-15)
        throw std::domain_error("Phi derivative requested outside (0,1]");
    return q_log(t, q) + std::pow(t, q - 1.0);
}

// Arguments produced by sums of probabilities may overshoot [0,1] by a few ulps.
double check_unit(double t)
{
    constexpr double slack = 1e-12;
    if (!(t >= -slack && t <= 1.0 + slack))
        throw std::domain_error("Phi argument outside [0,1]: " + std::to_string(t));
    return std::clamp(t, 0.0, 1.0);
}

} // namespace

double q_log(double t, double q)
{
    if (!(t > 0.0))
        throw std::domain_error("q_log requires t > 0");
    const double lt = std::log(t);
    const double dq = q - 1.0;
    if (std::abs(dq) < kSeriesBand)
        return lt * (1.0 + 0.5 * dq * lt);
    return std::expm1(dq * lt) / dq;
}

double neg_entropy(double t)
{
    if (t <= 0.0 || t >= 1.0)
        return 0.0;
    return t * std::log(t) + (1.0 - t) * std::log1p(-t);
}

PhiSpec::PhiSpec(PhiKind kind, double q, std::string name, Map eval, Map deriv, bool convex)
    : kind_(kind), q_(q), name_(std::move(name)), eval_(std::move(eval)), deriv_(std::move(deriv)),
      convex_(convex)
{
}

PhiSpec PhiSpec::q_asymmetric(double q)
{
    if (!(q > 0.0))
        throw std::invalid_argument("q must be positive");
    return PhiSpec(
        PhiKind::q_asymmetric, q, "q-asym(" + std::to_string(q) + ")",
        [q](double t) {
            t = check_unit(t);
            return t_log_q(t, q);
        },
        [q](double t) { return t_log_q_deriv(t, q); }, true);
}

PhiSpec PhiSpec::q_symmetric(double q)
{
    if (!(q > 0.0))
        throw std::invalid_argument("q must be positive");
    return PhiSpec(
        PhiKind::q_symmetric, q, "q-sym(" + std::to_string(q) + ")",
        [q](double t) {
            t = check_unit(t);
            return t_log_q(t, q) + t_log_q(1.0 - t, q);
        },
        [q](double t) { return t_log_q_deriv(t, q) - t_log_q_deriv(1.0 - t, q); }, true);
}

PhiSpec PhiSpec::one_asymmetric()
{
    return PhiSpec(
        PhiKind::one_asymmetric, 1.0, "one-asym",
        [](double t) {
            t = check_unit(t);
            return t == 0.0 ? 0.0 : t * std::log(t);
        },
        [](double t) {
            if (t <= 0.0)
                throw std::domain_error("t ln t has no derivative at 0");
            return std::log(t) + 1.0;
        },
        true);
}

PhiSpec PhiSpec::one_symmetric()
{
    return PhiSpec(
        PhiKind::one_symmetric, 1.0, "one-sym",
        [](double t) {
            t = check_unit(t);
            return neg_entropy(t);
        },
        [](double t) {
            if (t <= 0.0 || t >= 1.0)
                throw std::domain_error("binary entropy has no derivative at 0 or 1");
            return std::log(t) - std::log1p(-t);
        },
        true);
}

PhiSpec PhiSpec::custom(std::string name, Map eval, Map deriv, bool convex)
{
    if (!eval)
        throw std::invalid_argument("custom Phi needs an evaluation map");
    return PhiSpec(PhiKind::custom, 0.0, std::move(name), std::move(eval), std::move(deriv), convex);
}

double PhiSpec::deriv(double t) const
{
    if (!deriv_)
        throw std::logic_error("Phi '" + name_ + "' has no derivative");
    return deriv_(t);
}

} // namespace noisestab::bounds
