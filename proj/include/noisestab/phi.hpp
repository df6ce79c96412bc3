#pragma once

#include <functional>
#include <string>

namespace noisestab::bounds {

/// Tsallis q-logarithm, reparameterized: (t^{q-1} - 1)/(q - 1), ln t at q = 1.
/// Continuous in q; for |q - 1| < 1e-9 a second-order series around ln t is used.
double q_log(double t, double q);

/// t ln t + (1 - t) ln(1 - t) with 0 ln 0 = 0. Nonpositive on [0,1].
double neg_entropy(double t);

enum class PhiKind { q_asymmetric, q_symmetric, one_asymmetric, one_symmetric, custom };

/// A convex test function on [0,1] used for Phi-stability.
///
/// Built-in kinds:
///   q_asymmetric(q):   t ln_q t
///   q_symmetric(q):    t ln_q t + (1-t) ln_q (1-t)
///   one_asymmetric:    t ln t
///   one_symmetric:     t ln t + (1-t) ln(1-t)
/// All of them use 0 ln_q 0 = 0 at the endpoints.
class PhiSpec {
public:
    using Map = std::function<double(double)>;

    static PhiSpec q_asymmetric(double q);
    static PhiSpec q_symmetric(double q);
    static PhiSpec one_asymmetric();
    static PhiSpec one_symmetric();
    /// `deriv` may be empty; `convex` is taken on trust.
    static PhiSpec custom(std::string name, Map eval, Map deriv, bool convex);

    double operator()(double t) const { return eval_(t); }
    double deriv(double t) const;
    bool has_deriv() const { return static_cast<bool>(deriv_); }
    bool convex() const { return convex_; }
    PhiKind kind() const { return kind_; }
    double q() const { return q_; }
    const std::string& name() const { return name_; }

private:
    PhiSpec(PhiKind kind, double q, std::string name, Map eval, Map deriv, bool convex);

    PhiKind kind_;
    double q_;
    std::string name_;
    Map eval_;
    Map deriv_;
    bool convex_;
};

} // namespace noisestab::bounds
