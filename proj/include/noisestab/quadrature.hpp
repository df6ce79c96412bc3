#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace noisestab::bounds {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the sorted breakpoints.
/// Each gap between consecutive breakpoints starts as its own panel, so kinks placed on
/// breakpoints never land inside a panel. The error estimate per panel is |K15 - G7|.
QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

/// As `integrate`, but throws QuadratureError when the tolerance is not met within budget.
double integrate_or_throw(const std::function<double(double)>& f, std::span<const double> breakpoints,
                          const QuadratureOptions& options = {});

} // namespace noisestab::bounds
