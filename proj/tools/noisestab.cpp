#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "noisestab/certifier.hpp"
#include "noisestab/gamma.hpp"
#include "noisestab/phi.hpp"
#include "noisestab/sweep.hpp"

namespace {

using namespace noisestab;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v, int digits = 17)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

void write_output(const std::string& path, std::string content)
{
    if (content.empty() || content.back() != '\n')
        content += '\n';
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw UsageError("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out)
        throw UsageError("cannot write output file: " + path);
}

bounds::PhiSpec make_phi(const std::string& kind, double q)
{
    if (kind == "q-sym")
        return bounds::PhiSpec::q_symmetric(q);
    if (kind == "q-asym")
        return bounds::PhiSpec::q_asymmetric(q);
    if (kind == "one-sym")
        return bounds::PhiSpec::one_symmetric();
    if (kind == "one-asym")
        return bounds::PhiSpec::one_asymmetric();
    throw UsageError("unknown --phi " + kind);
}

unsigned default_threads()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct Options {
    double rho_lo = 0.46;
    double rho_hi = 0.914;
    double delta = 0.0016;
    double lipschitz = 20.0;
    std::optional<double> step;
    std::vector<double> rhos;
    double eps = 0.0;
    double q = 2.0;
    std::string phi = "one-sym";
    int n = 4;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 1;
    std::string checks = "all";
    unsigned threads = default_threads();
    std::string out;
    std::string format;
    bool per_point = true;
};

std::string format_or(const Options& o, const char* fallback) { return o.format.empty() ? fallback : o.format; }

int cmd_verify(const Options& o)
{
    if (o.rho_hi < o.rho_lo)
        throw UsageError("--rho-hi must not be below --rho-lo");
    const auto fmt = format_or(o, "json");
    const auto cert = cert::verify_interval(o.rho_lo, o.rho_hi, o.delta, o.lipschitz, o.step,
                                            fmt == "json" && o.per_point, static_cast<int>(o.threads));
    if (fmt == "json") {
        write_output(o.out, cert::to_json(cert));
    } else {
        const double r = o.rho_hi;
        const auto om = cert::omega_max(r);
        std::ostringstream s;
        s << "interval [" << num(o.rho_lo, 6) << ", " << num(o.rho_hi, 6) << "]  delta " << num(o.delta, 6)
          << "  M " << num(o.lipschitz, 6) << "  step " << num(cert.step, 6) << "  points " << cert.n_points
          << "\n\n";
        s << "quantity            computed          published (rho = 0.914)\n";
        s << "eps_star(" << fixed(r, 3) << ")     " << fixed(bounds::eps_star(r), 9) << "       0.195055\n";
        s << "omega_max(" << fixed(r, 3) << ")    " << fixed(om.value, 9) << "       0.193026\n";
        s << "beta_0              " << fixed(om.argmax, 9) << "       0.175661\n";
        s << "t_rho(" << fixed(r, 3) << ")        " << fixed(cert::t_rho(r, om.value), 9) << "       0.663100\n";
        s << "worst theta         " << fixed(cert.worst_theta, 9) << "      -0.00169063\n";
        s << "worst rho           " << fixed(cert.worst_rho, 9) << "       0.914\n";
        s << "max |theta'|        " << fixed(cert.max_abs_theta_prime, 9) << "       <= 20\n\n";
        for (const auto& d : cert.diagnostics)
            s << "note: " << d << "\n";
        s << (cert.pass ? "PASS" : "FAIL") << "\n";
        write_output(o.out, s.str());
    }
    return cert.pass ? kPass : kFail;
}

int cmd_eps_star(const Options& o)
{
    if (o.rhos.empty())
        throw UsageError("--rho is required");
    const auto fmt = format_or(o, "text");
    std::ostringstream s;
    nlohmann::json j = nlohmann::json::array();
    if (fmt == "csv")
        s << "rho,eps_star\n";
    for (double r : o.rhos) {
        const double e = bounds::eps_star(r);
        if (fmt == "csv")
            s << num(r, 12) << "," << num(e) << "\n";
        else if (fmt == "json")
            j.push_back({{"rho", r}, {"eps_star", e}, {"residual", bounds::eps_star_residual(e, r)}});
        else
            s << "eps_star(" << num(r, 12) << ") = " << num(e) << "\n";
    }
    write_output(o.out, fmt == "json" ? j.dump(2) : s.str());
    return kPass;
}

int cmd_gamma(const Options& o)
{
    if (o.rhos.size() != 1)
        throw UsageError("gamma needs exactly one --rho");
    const double r = o.rhos.front();
    const auto phi = make_phi(o.phi, o.q);
    const double g = bounds::gamma_phi(o.eps, r, phi);
    const double dict = bounds::dictator_stability(r, phi);
    std::optional<double> closed;
    if (o.phi == "q-asym" && o.q != 1.0)
        closed = (bounds::gamma_q(o.eps, r, o.q) - 0.5) / (o.q - 1.0);
    else if (o.phi == "one-asym")
        closed = bounds::gamma_one(o.eps, r);
    const auto fmt = format_or(o, "text");
    if (fmt == "json") {
        nlohmann::json j{{"eps", o.eps}, {"rho", r}, {"phi", phi.name()}, {"gamma", g}, {"dictator", dict}};
        if (closed)
            j["closed_form"] = *closed;
        write_output(o.out, j.dump(2));
    } else if (fmt == "csv") {
        std::string s = "eps,rho,phi,gamma,dictator,closed_form\n";
        s += num(o.eps) + "," + num(r) + "," + phi.name() + "," + num(g) + "," + num(dict) + "," +
             (closed ? num(*closed) : "") + "\n";
        write_output(o.out, s);
    } else {
        std::string s = "Gamma(" + num(o.eps, 12) + ") at rho " + num(r, 12) + ", Phi = " + phi.name() + ": " + num(g) +
                        "\ndictator stability: " + num(dict) + "\n";
        if (closed)
            s += "closed form (balanced): " + num(*closed) + "\n";
        write_output(o.out, s);
    }
    return kPass;
}

int cmd_bounds_table(const Options& o)
{
    const std::vector<double> rhos = o.rhos.empty() ? std::vector<double>{0.46, 0.6, 0.8, 0.914} : o.rhos;
    const auto fmt = format_or(o, "csv");
    std::ostringstream s;
    nlohmann::json j = nlohmann::json::array();
    s << "rho,eps_star,omega_max,omega_argmax,t_rho,theta,upsilon_bar,dictator_sym\n";
    for (double r : rhos) {
        const double e = bounds::eps_star(r);
        const auto om = cert::omega_max(r);
        const double t = cert::t_rho(r, om.value);
        const double th = cert::theta_objective(t, r, om.value);
        const auto ub = cert::upsilon_bar(r, om.value);
        const double dict = bounds::neg_entropy(0.5 * (1.0 + r));
        s << num(r, 12) << "," << num(e) << "," << num(om.value) << "," << num(om.argmax) << "," << num(t) << ","
          << num(th) << "," << num(ub.value) << "," << num(dict) << "\n";
        j.push_back({{"rho", r},
                     {"eps_star", e},
                     {"omega_max", om.value},
                     {"omega_argmax", om.argmax},
                     {"t_rho", t},
                     {"theta", th},
                     {"upsilon_bar", ub.value},
                     {"dictator_sym", dict}});
    }
    write_output(o.out, fmt == "json" ? j.dump(2) : s.str());
    return kPass;
}

int cmd_brute(const Options& o)
{
    if (o.n < 1 || o.n > 5)
        throw UsageError("--n must lie in [1, 5]");
    if (o.n == 5 && !o.sample)
        throw UsageError("n = 5 needs --sample");
    sweep::BruteConfig cfg;
    cfg.n = o.n;
    if (!o.rhos.empty())
        cfg.rhos = o.rhos;
    cfg.sample = o.sample;
    cfg.seed = o.seed;
    cfg.threads = static_cast<int>(o.threads);
    if (o.checks != "all") {
        cfg.checks.clear();
        std::stringstream in(o.checks);
        std::string name;
        while (std::getline(in, name, ',')) {
            const auto c = sweep::parse_check(name);
            if (!c)
                throw UsageError("unknown check " + name);
            cfg.checks.push_back(*c);
        }
    }
    const auto rep = sweep::run_brute(cfg);
    const auto fmt = format_or(o, "text");
    if (fmt == "json") {
        nlohmann::json j{{"n", rep.n}, {"functions", rep.functions}, {"rhos", rep.rhos}, {"pass", rep.pass}};
        if (o.n == 5)
            j["seed"] = o.seed;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : rep.checks)
            j["checks"].push_back({{"name", sweep::check_name(c.check)},
                                   {"tested", c.tested},
                                   {"violations", c.violations},
                                   {"max_violation", c.max_violation},
                                   {"pass", c.pass}});
        write_output(o.out, j.dump(2));
    } else {
        std::ostringstream s;
        s << "n = " << rep.n << ", balanced functions = " << rep.functions << ", rho =";
        for (double r : rep.rhos)
            s << " " << num(r, 12);
        s << "\n";
        for (const auto& c : rep.checks)
            s << sweep::check_name(c.check) << ": tested " << c.tested << ", violations " << c.violations
              << ", max excess " << num(c.max_violation, 6) << ", " << (c.pass ? "pass" : "FAIL") << "\n";
        s << (rep.pass ? "PASS" : "FAIL") << "\n";
        write_output(o.out, s.str());
    }
    return rep.pass ? kPass : kFail;
}

int cmd_plot(const Options& o)
{
    const double step = o.step.value_or(0.01);
    if (!(step > 0.0 && step < 1.0))
        throw UsageError("--rho-step must lie in (0,1)");
    std::string s = "rho,eps_star\n";
    for (long k = 1;; ++k) {
        const double r = static_cast<double>(k) * step;
        if (r >= 1.0 - 1e-9)
            break;
        s += num(r, 12) + "," + num(bounds::eps_star(r)) + "\n";
    }
    write_output(o.out.empty() ? "-" : o.out, s);
    return kPass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Noise-stability bounds and the Courtade-Kumar certificate"};
    app.require_subcommand(1);
    Options o;

    auto add_out = [&](CLI::App* sub, const char* formats) {
        sub->add_option("--out", o.out, "Output path (default stdout)");
        sub->add_option("--format", o.format, std::string("Output format: ") + formats)
            ->check(CLI::IsMember(CLI::detail::split(formats, '|')));
    };
    auto add_rho = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--rho", o.rhos, "Correlation(s)")->check(CLI::Range(0.0, 1.0));
        if (required)
            opt->required();
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    };

    auto* verify = app.add_subcommand("verify", "Grid/Lipschitz certificate that theta(rho) < 0");
    verify->add_option("--rho-lo", o.rho_lo, "Left end of the interval")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--rho-hi", o.rho_hi, "Right end of the interval")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--delta", o.delta, "Slack")->check(CLI::PositiveNumber);
    verify->add_option("--lipschitz", o.lipschitz, "Lipschitz constant M")->check(CLI::PositiveNumber);
    verify->add_option("--step", o.step, "Grid step (default delta / M)")->check(CLI::PositiveNumber);
    verify->add_flag("!--no-points", o.per_point, "Omit per-point records");
    add_threads(verify);
    add_out(verify, "json|text");

    auto* eps = app.add_subcommand("eps-star", "Threshold eps*(rho)");
    add_rho(eps, true);
    add_out(eps, "text|json|csv");

    auto* gamma = app.add_subcommand("gamma", "Gamma(eps) bound on Phi-stability");
    add_rho(gamma, true);
    gamma->add_option("--eps", o.eps, "Distance to the nearest dictator")->required()->check(CLI::Range(0.0, 1.0));
    gamma->add_option("--phi", o.phi, "Test function")->check(CLI::IsMember({"q-sym", "q-asym", "one-sym", "one-asym"}));
    gamma->add_option("--q", o.q, "Order for q-sym / q-asym")->check(CLI::PositiveNumber);
    add_out(gamma, "text|json|csv");

    auto* table = app.add_subcommand("bounds-table", "eps*, omega_max, t_rho, theta and Upsilon per rho");
    add_rho(table, false);
    add_out(table, "csv|json");

    auto* brute = app.add_subcommand("brute", "Exhaustive checks on small cubes");
    brute->add_option("--n", o.n, "Cube dimension");
    add_rho(brute, false);
    brute->add_option("--checks", o.checks,
                      "Comma list of majorization,gamma_bound,q_stability,courtade_kumar,local_optimality or all");
    brute->add_option("--sample", o.sample, "Number of sampled functions (n = 5)")->check(CLI::PositiveNumber);
    brute->add_option("--seed", o.seed, "Sampling seed");
    add_threads(brute);
    add_out(brute, "text|json");

    auto* plot = app.add_subcommand("plot", "CSV of eps*(rho) on a grid of (0,1)");
    plot->add_option("--rho-step,--step", o.step, "Grid spacing")->check(CLI::Range(0.0, 1.0));
    plot->add_option("--out", o.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (verify->parsed())
            return cmd_verify(o);
        if (eps->parsed())
            return cmd_eps_star(o);
        if (gamma->parsed())
            return cmd_gamma(o);
        if (table->parsed())
            return cmd_bounds_table(o);
        if (brute->parsed())
            return cmd_brute(o);
        if (plot->parsed())
            return cmd_plot(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
