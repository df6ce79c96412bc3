#pragma once

#include <span>
#include <vector>

#include "noisestab/cube.hpp"

namespace noisestab::cube {

/// Decreasing rearrangement of a nonnegative function, as (mass, value) steps with strictly
/// decreasing values. Equal values are merged into one step.
class StepSpectrum {
public:
    struct Step {
        double mass;
        double value;
    };

    StepSpectrum() = default;
    /// Arbitrary (mass, value) pairs; sorted and merged. Masses must be positive, values >= 0.
    static StepSpectrum from_steps(std::span<const double> masses, std::span<const double> values);
    /// Uniform mass 1/size on each value.
    static StepSpectrum from_values(std::span<const double> values);
    static StepSpectrum from_field(const CubeField& g) { return from_values(g.values); }

    std::span<const Step> steps() const { return steps_; }
    double total_mass() const;
    /// int f_down over the whole space.
    double integral() const;
    /// int_0^t f_down, linear between breakpoints, flat after total_mass().
    double concentration(double t) const;
    /// int [f - gamma]^+.
    double e_gamma(double gamma) const;
    /// Cumulative masses at the end of each step (the kinks of concentration()).
    std::vector<double> breakpoints() const;

private:
    std::vector<Step> steps_;
};

/// Throws std::invalid_argument on negative values.
StepSpectrum decreasing_rearrangement(const CubeField& g);

double concentration(const CubeField& g, double t);
double e_gamma(const CubeField& g, double gamma);

/// g majorized by h: concentration_g <= concentration_h + tol at every breakpoint of either.
/// Throws std::invalid_argument if the integrals differ by more than tol.
bool majorized_by(const StepSpectrum& g, const StepSpectrum& h, double tol);
bool majorized_by(const CubeField& g, const CubeField& h, double tol);

/// Same verdict through E_gamma(g) <= E_gamma(h) + tol at every step value of either.
bool majorized_by_e_gamma(const StepSpectrum& g, const StepSpectrum& h, double tol);

} // namespace noisestab::cube
