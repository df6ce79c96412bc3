#include "noisestab/certifier.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "noisestab/gamma.hpp"
#include "noisestab/phi.hpp"
#include "noisestab/roots.hpp"

namespace noisestab::cert {

using bounds::bisect;
using bounds::golden_max;
using bounds::neg_entropy;

namespace {

constexpr double kOmegaGridStep = 1e-5;
constexpr int kUpsilonGrid = 10'000;

void check_open_rho(double rho)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("rho must lie in (0,1)");
}

double gaussian_branch(double beta)
{
    const double c = 4.0 * (std::numbers::pi - std::sqrt(2.0 * std::numbers::pi));
    const double r = 1.0 + std::sqrt(1.0 + c * beta);
    return r * r / (8.0 * std::numbers::pi);
}

OmegaMax omega_max_on(double hi)
{
    const auto n = static_cast<long>(std::ceil(hi / kOmegaGridStep));
    long best = 0;
    double best_value = omega(0.0);
    for (long k = 1; k <= n; ++k) {
        const double v = omega(hi * static_cast<double>(k) / static_cast<double>(n));
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    auto at = [hi, n](long k) { return hi * static_cast<double>(std::clamp(k, 0L, n)) / static_cast<double>(n); };
    const auto refined = golden_max([](double b) { return omega(b); }, at(best - 1), at(best + 1), 1e-13);
    if (refined.value > best_value)
        return {refined.value, refined.x};
    return {best_value, at(best)};
}

struct RhoEval {
    double eps_star;
    double omega_max;
    double t_rho;
    double theta;
};

RhoEval evaluate(double rho)
{
    check_open_rho(rho);
    const double e = bounds::eps_star(rho);
    const double w = omega_max_on(0.5 - e).value;
    const double t = t_rho(rho, w);
    return {e, w, t, theta_objective(t, rho, w)};
}

double theta_prime_at(double rho, double w, double t)
{
    const double m = 0.5 * (1.0 - rho);
    return (1.0 - 8.0 * rho * w) * phi_ratio(0.5 * (1.0 - t)) + 2.0 * rho * phi_ratio(m) +
           0.5 * (1.0 + t - rho * rho) * phi_ratio_prime(m);
}

std::vector<double> grid_points(double lo, double hi, double step)
{
    const auto k_max = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> pts;
    pts.reserve(k_max + 2);
    for (std::size_t k = 0; k <= k_max; ++k)
        pts.push_back(lo + static_cast<double>(k) * step);
    if (std::abs(pts.back() - hi) <= 1e-9 * step)
        pts.back() = hi;
    else
        pts.push_back(hi);
    return pts;
}

void append_number(std::string& out, double v)
{
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void append_string(std::string& out, const std::string& s)
{
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

} // namespace

double phi_c(double t)
{
    if (!(t >= 0.0))
        throw std::domain_error("phi_c needs t >= 0");
    return t == 0.0 ? 0.0 : 2.0 * t * t * std::log(1.0 / t);
}

double phi_lp(double t)
{
    if (!(t >= 0.0 && t <= 0.5))
        throw std::domain_error("phi_lp needs t in [0, 1/2]");
    if (t <= 0.25)
        return 2.0 * t * t * (1.0 / std::sqrt(t) - 1.0);
    return 0.5 * t;
}

double varphi(double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("varphi needs t in [0,1]");
    const double f = std::min(t, 1.0 - t);
    if (f == 0.0)
        return 0.0;
    return std::min(phi_c(f), phi_lp(f));
}

double omega(double beta)
{
    if (!(beta >= 0.0 && beta <= 0.5))
        throw std::domain_error("omega needs beta in [0, 1/2]");
    return std::min(beta * beta + varphi(0.5 - beta), gaussian_branch(beta));
}

double beta_zero()
{
    return bisect([](double b) { return gaussian_branch(b) - (b * b - 0.5 * b + 0.25); }, 0.0, 0.25, 1e-15);
}

double omega_closed_form(double beta)
{
    if (!(beta >= 0.0 && beta <= 0.5 - 0.195))
        throw std::domain_error("omega_closed_form needs beta in [0, 0.305]");
    if (beta <= beta_zero())
        return gaussian_branch(beta);
    if (beta <= 0.25)
        return beta * beta - 0.5 * beta + 0.25;
    const double u = 0.5 - beta;
    return beta * beta + 2.0 * u * std::sqrt(u) - 2.0 * u * u;
}

OmegaMax omega_max(double rho)
{
    check_open_rho(rho);
    return omega_max_on(0.5 - bounds::eps_star(rho));
}

double phi_ratio(double s)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("phi_ratio needs s in (0,1)");
    return neg_entropy(s) / s;
}

double phi_ratio_prime(double s)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("phi_ratio_prime needs s in (0,1)");
    return -std::log1p(-s) / (s * s);
}

double t_rho_residual(double t, double rho, double w)
{
    const double a = 1.0 + rho - 4.0 * rho * rho * w;
    return -0.5 * a * phi_ratio_prime(0.5 * (1.0 - t)) - phi_ratio(0.5 * (1.0 - rho));
}

double t_rho(double rho, double w)
{
    check_open_rho(rho);
    return bisect([rho, w](double t) { return t_rho_residual(t, rho, w); }, 1e-12, 1.0 - 1e-12, 1e-12);
}

double t_rho(double rho) { return t_rho(rho, omega_max(rho).value); }

double theta_objective(double t, double rho, double w)
{
    const double a = 1.0 + rho - 4.0 * rho * rho * w;
    return a * phi_ratio(0.5 * (1.0 - t)) - (1.0 + t - rho * rho) * phi_ratio(0.5 * (1.0 - rho));
}

double theta_rho(double rho) { return evaluate(rho).theta; }

UpsilonBar upsilon_bar(double rho, double w)
{
    check_open_rho(rho);
    const double a = 1.0 + rho - 4.0 * rho * rho * w;
    auto f = [rho, a](double t) { return (1.0 - rho) * a / (2.0 * (1.0 + t - rho * rho)) * phi_ratio(0.5 * (1.0 - t)); };
    const double t_hi = 1.0 - 1e-9;
    auto at = [t_hi](int k) { return t_hi * static_cast<double>(std::clamp(k, 0, kUpsilonGrid)) / kUpsilonGrid; };
    int best = 0;
    double best_value = f(0.0);
    for (int k = 1; k <= kUpsilonGrid; ++k) {
        const double v = f(at(k));
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    const auto refined = golden_max(f, at(best - 1), at(best + 1), 1e-13);
    if (refined.value > best_value)
        return {refined.value, refined.x};
    return {best_value, at(best)};
}

UpsilonBar upsilon_bar(double rho) { return upsilon_bar(rho, omega_max(rho).value); }

UpsilonPoint upsilon_gamma(double z1, double z2, double beta, double rho)
{
    check_open_rho(rho);
    if (!(beta >= 0.0 && beta <= 0.5))
        throw std::domain_error("upsilon needs beta in [0, 1/2]");
    const double w = omega(beta);
    const double a = 1.0 + rho - 4.0 * rho * rho * w;
    const double den = 1.0 + rho * z2 - rho * z1 - rho * rho;
    const double p1 = (1.0 - rho) * (a + 2.0 * beta * (1.0 + 2.0 * rho * z2 - rho * rho)) /
                      (4.0 * (1.0 + 2.0 * rho * z1) * den);
    const double p2 = (1.0 - rho) * (a - 2.0 * beta * (1.0 - 2.0 * rho * z1 - rho * rho)) /
                      (4.0 * (1.0 - 2.0 * rho * z2) * den);
    const double edge = 0.5 / rho;
    const bool feasible = z1 > -edge && z2 < edge && z1 <= z2 && p1 >= 0.0 && p1 <= 0.25 + 0.5 * beta &&
                          p2 >= 0.0 && p2 <= 0.25 - 0.5 * beta;
    double gamma = (1.0 - 2.0 * p1 - 2.0 * p2) * neg_entropy(0.0);
    if (feasible)
        gamma += 2.0 * p1 * neg_entropy(0.5 + rho * z1) + 2.0 * p2 * neg_entropy(0.5 + rho * z2);
    return {p1, p2, gamma, feasible};
}

double upsilon_2d(double beta, double rho, int n)
{
    check_open_rho(rho);
    if (n < 1)
        throw std::invalid_argument("upsilon_2d needs a positive grid size");
    const double edge = 0.5 / rho;
    const double h = 1.0 / (rho * (n + 1));
    bool any = false;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z1 = -edge + (i + 1) * h;
        for (int j = i; j < n; ++j) {
            const double z2 = -edge + (j + 1) * h;
            const auto pt = upsilon_gamma(z1, z2, beta, rho);
            if (!pt.feasible)
                continue;
            if (!any || pt.gamma > best)
                best = pt.gamma;
            any = true;
        }
    }
    if (!any)
        throw std::runtime_error("upsilon_2d: no feasible grid point at beta = " + std::to_string(beta) +
                                 ", rho = " + std::to_string(rho));
    return best;
}

double theta_prime(double rho)
{
    const auto e = evaluate(rho);
    return theta_prime_at(rho, e.omega_max, e.t_rho);
}

double lipschitz_margin(double rho, double h)
{
    return std::abs(theta_rho(rho + h) - theta_rho(rho - h)) / (2.0 * h);
}

std::size_t grid_size(double rho_lo, double rho_hi, double step) { return grid_points(rho_lo, rho_hi, step).size(); }

Certificate verify_interval(double rho_lo, double rho_hi, double delta, double lipschitz_m,
                            std::optional<double> step, bool keep_points, int threads)
{
    if (!(rho_lo > 0.0 && rho_hi < 1.0 && rho_lo <= rho_hi))
        throw std::invalid_argument("verify_interval needs 0 < rho_lo <= rho_hi < 1");
    if (!(delta > 0.0) || !(lipschitz_m > 0.0))
        throw std::invalid_argument("verify_interval needs delta > 0 and lipschitz_m > 0");
    if (step && !(*step > 0.0))
        throw std::invalid_argument("verify_interval needs step > 0");

    Certificate c;
    c.rho_lo = rho_lo;
    c.rho_hi = rho_hi;
    c.delta = delta;
    c.lipschitz_m = lipschitz_m;
    c.step = step.value_or(delta / lipschitz_m);

    const auto pts = grid_points(rho_lo, rho_hi, c.step);
    c.n_points = pts.size();

    struct Slot {
        RhoEval eval{};
        double theta_prime = 0.0;
        std::string error;
    };
    std::vector<Slot> slots(pts.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            try {
                slots[k].eval = evaluate(pts[k]);
                slots[k].theta_prime = theta_prime_at(pts[k], slots[k].eval.omega_max, slots[k].eval.t_rho);
            } catch (const std::exception& ex) {
                slots[k].error = ex.what();
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        work(0, pts.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (pts.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(pts.size(), w * chunk);
            const std::size_t end = std::min(pts.size(), begin + chunk);
            if (begin < end)
                pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }

    bool failed = false;
    bool have_worst = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& s = slots[k];
        if (!s.error.empty()) {
            failed = true;
            c.diagnostics.push_back("evaluation failed at rho = " + std::to_string(pts[k]) + ": " + s.error);
            continue;
        }
        if (!have_worst || s.eval.theta > c.worst_theta) {
            c.worst_theta = s.eval.theta;
            c.worst_rho = pts[k];
            have_worst = true;
        }
        c.max_abs_theta_prime = std::max(c.max_abs_theta_prime, std::abs(s.theta_prime));
        if (std::abs(s.theta_prime) > lipschitz_m) {
            failed = true;
            c.diagnostics.push_back("|theta'| = " + std::to_string(std::abs(s.theta_prime)) +
                                    " exceeds the Lipschitz constant at rho = " + std::to_string(pts[k]));
        }
        if (keep_points)
            c.per_point.push_back({pts[k], s.eval.theta, s.eval.t_rho, s.eval.eps_star, s.eval.omega_max});
    }
    if (c.step > (delta / lipschitz_m) * (1.0 + 1e-12)) {
        failed = true;
        c.diagnostics.push_back("step " + std::to_string(c.step) + " is coarser than delta / lipschitz_m = " +
                                std::to_string(delta / lipschitz_m));
    }
    if (have_worst && !(c.worst_theta < -delta))
        c.diagnostics.push_back("worst theta " + std::to_string(c.worst_theta) + " is not below -delta");
    c.pass = !failed && have_worst && c.worst_theta < -delta;
    return c;
}

std::string to_json(const Certificate& c)
{
    std::string out = "{\n";
    auto key = [&out](const char* k) {
        out += "  \"";
        out += k;
        out += "\": ";
    };
    auto number = [&](const char* k, double v) {
        key(k);
        append_number(out, v);
        out += ",\n";
    };
    number("rho_lo", c.rho_lo);
    number("rho_hi", c.rho_hi);
    number("step", c.step);
    number("delta", c.delta);
    number("lipschitz_m", c.lipschitz_m);
    key("n_points");
    out += std::to_string(c.n_points) + ",\n";
    number("worst_theta", c.worst_theta);
    number("worst_rho", c.worst_rho);
    number("max_abs_theta_prime", c.max_abs_theta_prime);
    key("pass");
    out += c.pass ? "true" : "false";
    out += ",\n";
    key("per_point");
    out += "[";
    for (std::size_t i = 0; i < c.per_point.size(); ++i) {
        const auto& p = c.per_point[i];
        out += i == 0 ? "\n" : ",\n";
        out += "    {\"rho\": ";
        append_number(out, p.rho);
        out += ", \"theta\": ";
        append_number(out, p.theta);
        out += ", \"t_rho\": ";
        append_number(out, p.t_rho);
        out += ", \"eps_star\": ";
        append_number(out, p.eps_star);
        out += ", \"omega_max\": ";
        append_number(out, p.omega_max);
        out += "}";
    }
    out += c.per_point.empty() ? "],\n" : "\n  ],\n";
    key("diagnostics");
    out += "[";
    for (std::size_t i = 0; i < c.diagnostics.size(); ++i) {
        if (i)
            out += ", ";
        append_string(out, c.diagnostics[i]);
    }
    out += "],\n";
    key("tool_version");
    append_string(out, c.tool_version);
    out += "\n}\n";
    return out;
}

} // namespace noisestab::cert
