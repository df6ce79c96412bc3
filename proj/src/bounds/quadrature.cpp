#include "noisestab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace noisestab::bounds {

namespace {

// Kronrod abscissae (positive half) and weights for the 15-point rule, with the
// embedded 7-point Gauss weights on the odd-indexed nodes plus the center.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1)
            gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options)
{
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate needs at least two breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw std::invalid_argument("integrate breakpoints must be sorted");

    std::priority_queue<Panel> panels;
    QuadratureResult result;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] <= breakpoints[i])
            continue;
        panels.push(gk15(f, breakpoints[i], breakpoints[i + 1]));
        result.evaluations += 15;
    }

    auto totals = [&panels] {
        // Sum in a fixed order so repeated runs give identical bits.
        std::vector<Panel> all;
        auto copy = panels;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        double value = 0.0;
        double error = 0.0;
        for (const auto& p : all) {
            value += p.value;
            error += p.error;
        }
        return std::pair{value, error};
    };

    double value = 0.0;
    double error = 0.0;
    {
        auto copy = panels;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    }

    while (!panels.empty()) {
        const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(value));
        if (error <= tol) {
            result.converged = true;
            break;
        }
        if (result.evaluations + 30 > options.max_evaluations)
            break;
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in double precision; accept it as is.
            break;
        }
        panels.pop();
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        result.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    const auto [final_value, final_error] = totals();
    result.value = final_value;
    result.error = final_error;
    if (!result.converged)
        result.converged = final_error <= std::max(options.abs_tol, options.rel_tol * std::abs(final_value));
    return result;
}

double integrate_or_throw(const std::function<double(double)>& f, std::span<const double> breakpoints,
                          const QuadratureOptions& options)
{
    const auto result = integrate(f, breakpoints, options);
    if (!result.converged)
        throw QuadratureError("quadrature did not converge: error estimate " + std::to_string(result.error) +
                              " after " + std::to_string(result.evaluations) + " evaluations");
    return result.value;
}

} // namespace noisestab::bounds
