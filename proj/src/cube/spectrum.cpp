#include "noisestab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace noisestab::cube {

StepSpectrum StepSpectrum::from_steps(std::span<const double> masses, std::span<const double> values)
{
    if (masses.size() != values.size())
        throw std::invalid_argument("spectrum: mass and value lists differ in length");
    std::vector<Step> raw;
    raw.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0))
            throw std::invalid_argument("spectrum: values must be nonnegative");
        if (!(masses[i] > 0.0))
            throw std::invalid_argument("spectrum: masses must be positive");
        raw.push_back({masses[i], values[i]});
    }
    std::stable_sort(raw.begin(), raw.end(), [](const Step& l, const Step& r) { return l.value > r.value; });
    StepSpectrum out;
    for (const auto& s : raw) {
        if (!out.steps_.empty() && out.steps_.back().value == s.value)
            out.steps_.back().mass += s.mass;
        else
            out.steps_.push_back(s);
    }
    return out;
}

StepSpectrum StepSpectrum::from_values(std::span<const double> values)
{
    const std::vector<double> masses(values.size(), 1.0 / static_cast<double>(values.size()));
    return from_steps(masses, values);
}

double StepSpectrum::total_mass() const
{
    double m = 0.0;
    for (const auto& s : steps_)
        m += s.mass;
    return m;
}

double StepSpectrum::integral() const
{
    double sum = 0.0;
    for (const auto& s : steps_)
        sum += s.mass * s.value;
    return sum;
}

double StepSpectrum::concentration(double t) const
{
    if (!(t >= 0.0))
        throw std::domain_error("concentration needs t >= 0");
    double used = 0.0;
    double sum = 0.0;
    for (const auto& s : steps_) {
        if (t <= used + s.mass)
            return sum + (t - used) * s.value;
        used += s.mass;
        sum += s.mass * s.value;
    }
    return sum;
}

double StepSpectrum::e_gamma(double gamma) const
{
    if (!(gamma >= 0.0))
        throw std::domain_error("e_gamma needs gamma >= 0");
    double sum = 0.0;
    for (const auto& s : steps_)
        sum += s.mass * std::max(s.value - gamma, 0.0);
    return sum;
}

std::vector<double> StepSpectrum::breakpoints() const
{
    std::vector<double> out;
    double used = 0.0;
    for (const auto& s : steps_) {
        used += s.mass;
        out.push_back(used);
    }
    return out;
}

StepSpectrum decreasing_rearrangement(const CubeField& g) { return StepSpectrum::from_field(g); }

double concentration(const CubeField& g, double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("concentration needs t in [0,1]");
    return decreasing_rearrangement(g).concentration(t);
}

double e_gamma(const CubeField& g, double gamma)
{
    if (!(gamma >= 0.0))
        throw std::domain_error("e_gamma needs gamma >= 0");
    double sum = 0.0;
    for (double v : g.values)
        sum += std::max(v - gamma, 0.0);
    return sum / static_cast<double>(g.points());
}

namespace {

void check_means(const StepSpectrum& g, const StepSpectrum& h, double tol)
{
    if (std::abs(g.integral() - h.integral()) > tol)
        throw std::invalid_argument("majorization needs equal means: " + std::to_string(g.integral()) + " vs " +
                                    std::to_string(h.integral()));
}

} // namespace

bool majorized_by(const StepSpectrum& g, const StepSpectrum& h, double tol)
{
    check_means(g, h, tol);
    auto pts = g.breakpoints();
    const auto more = h.breakpoints();
    pts.insert(pts.end(), more.begin(), more.end());
    for (double t : pts)
        if (g.concentration(t) > h.concentration(t) + tol)
            return false;
    return true;
}

bool majorized_by(const CubeField& g, const CubeField& h, double tol)
{
    return majorized_by(decreasing_rearrangement(g), decreasing_rearrangement(h), tol);
}

bool majorized_by_e_gamma(const StepSpectrum& g, const StepSpectrum& h, double tol)
{
    check_means(g, h, tol);
    for (const auto* spec : {&g, &h})
        for (const auto& s : spec->steps())
            if (g.e_gamma(s.value) > h.e_gamma(s.value) + tol)
                return false;
    return true;
}

} // namespace noisestab::cube
