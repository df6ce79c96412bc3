#include "noisestab/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "noisestab/gamma.hpp"
#include "noisestab/phi.hpp"
#include "noisestab/theta.hpp"

namespace noisestab::sweep {

using cube::BooleanFunction;
using cube::CubeField;
using cube::StepSpectrum;

std::vector<BooleanFunction> balanced_functions(int n)
{
    if (n < 1 || n > 4)
        throw cube::DimensionError("exhaustive enumeration needs 1 <= n <= 4");
    const std::size_t pts = std::size_t{1} << n;
    std::vector<BooleanFunction> out;
    const std::uint64_t count = std::uint64_t{1} << pts;
    for (std::uint64_t bits = 0; bits < count; ++bits)
        if (2 * static_cast<std::size_t>(__builtin_popcountll(bits)) == pts)
            out.emplace_back(n, bits);
    return out;
}

std::vector<BooleanFunction> sample_balanced(int n, std::size_t count, std::uint64_t seed)
{
    if (n < 1 || n > cube::kMaxDimension)
        throw cube::DimensionError("sampling needs 1 <= n <= 6");
    std::mt19937_64 gen(seed);
    const std::size_t pts = std::size_t{1} << n;
    std::vector<cube::Point> order(pts);
    std::iota(order.begin(), order.end(), cube::Point{0});
    std::vector<BooleanFunction> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::shuffle(order.begin(), order.end(), gen);
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < pts / 2; ++i)
            bits |= std::uint64_t{1} << order[i];
        out.emplace_back(n, bits);
    }
    return out;
}

StepSpectrum sampled_theta_spectrum(double alpha, double rho, int cells)
{
    if (cells < 1)
        throw std::invalid_argument("sampled theta spectrum needs at least one cell");
    std::vector<double> masses;
    std::vector<double> values;
    double prev = 0.0;
    for (int k = 1; k <= cells; ++k) {
        const double cur = bounds::big_theta(alpha, static_cast<double>(k) / cells, rho);
        const double v = std::max(0.0, (cur - prev) * cells);
        prev = cur;
        if (v == 0.0)
            continue;
        masses.push_back(1.0 / cells);
        values.push_back(v);
    }
    return StepSpectrum::from_steps(masses, values);
}

const char* check_name(Check c)
{
    switch (c) {
    case Check::majorization:
        return "majorization";
    case Check::gamma_bound:
        return "gamma_bound";
    case Check::q_stability:
        return "q_stability";
    case Check::courtade_kumar:
        return "courtade_kumar";
    case Check::local_optimality:
        return "local_optimality";
    }
    return "unknown";
}

std::vector<Check> all_checks()
{
    return {Check::majorization, Check::gamma_bound, Check::q_stability, Check::courtade_kumar,
            Check::local_optimality};
}

std::optional<Check> parse_check(const std::string& name)
{
    for (Check c : all_checks())
        if (name == check_name(c))
            return c;
    return std::nullopt;
}

namespace {

constexpr double kMajorizationSlack = 1e-9;
constexpr double kGammaSlack = 1e-7;
constexpr double kQSlack = 1e-10;
constexpr double kEntropySlack = 1e-9;
constexpr int kThetaGrid = 64;
constexpr double kUpperQ[] = {1.5, 2.0, 3.0};
constexpr double kLowerQ = 0.5;

struct Tally {
    std::size_t tested = 0;
    std::size_t violations = 0;
    double max_violation = -1e300;

    void add(double excess, double slack)
    {
        ++tested;
        max_violation = std::max(max_violation, excess);
        if (excess > slack)
            ++violations;
    }
    void merge(const Tally& o)
    {
        tested += o.tested;
        violations += o.violations;
        max_violation = std::max(max_violation, o.max_violation);
    }
};

// Quantities that depend only on rho and d~ 2^n, shared by all functions.
struct RhoTables {
    double rho;
    double eps_star;
    std::vector<double> theta_grid;                 // big_theta(1/2, k/64)
    std::vector<std::array<double, 3>> gamma_phi;   // by d~ 2^n, per Phi
    std::vector<std::array<double, 4>> gamma_q;     // by d~ 2^n, q = 1.5, 2, 3, 0.5
};

std::vector<bounds::PhiSpec> gamma_phis()
{
    return {bounds::PhiSpec::one_symmetric(), bounds::PhiSpec::q_asymmetric(2.0), bounds::PhiSpec::q_asymmetric(3.0)};
}

RhoTables build_tables(int n, double rho, const std::vector<Check>& checks)
{
    auto wants = [&](Check c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };
    RhoTables t{rho, 0.0, {}, {}, {}};
    if (wants(Check::local_optimality))
        t.eps_star = (rho > 0.0 && rho < 1.0) ? bounds::eps_star(rho) : 0.0;
    if (wants(Check::majorization))
        for (int k = 0; k <= kThetaGrid; ++k)
            t.theta_grid.push_back(bounds::big_theta(0.5, static_cast<double>(k) / kThetaGrid, rho));
    const std::size_t pts = std::size_t{1} << n;
    const std::size_t levels = pts / 2 + 1;
    if (wants(Check::gamma_bound)) {
        const auto phis = gamma_phis();
        t.gamma_phi.resize(levels);
        for (std::size_t d = 0; d < levels; ++d)
            for (std::size_t j = 0; j < phis.size(); ++j)
                t.gamma_phi[d][j] = bounds::gamma_phi(static_cast<double>(d) / pts, rho, phis[j]);
    }
    if (wants(Check::q_stability)) {
        t.gamma_q.resize(levels);
        for (std::size_t d = 0; d < levels; ++d) {
            const double e = static_cast<double>(d) / pts;
            for (std::size_t j = 0; j < 3; ++j)
                t.gamma_q[d][j] = bounds::gamma_q(e, rho, kUpperQ[j]);
            t.gamma_q[d][3] = bounds::gamma_q(e, rho, kLowerQ);
        }
    }
    return t;
}

using Tallies = std::map<Check, Tally>;

void check_function(const BooleanFunction& f, const RhoTables& t, const std::vector<Check>& checks, Tallies& out)
{
    const auto g = cube::noise_apply(f, t.rho);
    const std::size_t pts = f.points();
    const double inv = 1.0 / static_cast<double>(pts);

    std::vector<std::size_t> dtilde_counts;
    for (int i = 0; i < f.n(); ++i) {
        const double dt = cube::dictator_distance(f, i).d_tilde;
        dtilde_counts.push_back(static_cast<std::size_t>(std::llround(dt * pts)));
    }
    const std::size_t min_d = *std::min_element(dtilde_counts.begin(), dtilde_counts.end());

    auto moment = [&](auto&& fn) {
        double s = 0.0;
        for (double v : g.values)
            s += fn(v);
        return s * inv;
    };

    for (Check c : checks) {
        auto& tally = out[c];
        switch (c) {
        case Check::majorization: {
            const auto spec = cube::decreasing_rearrangement(g);
            double worst = -1e300;
            for (int k = 0; k <= kThetaGrid; ++k)
                worst = std::max(worst, spec.concentration(static_cast<double>(k) / kThetaGrid) - t.theta_grid[k]);
            tally.add(worst, kMajorizationSlack);
            break;
        }
        case Check::gamma_bound: {
            const auto phis = gamma_phis();
            for (std::size_t j = 0; j < phis.size(); ++j) {
                const double stab = cube::field_phi_mean(g, phis[j]);
                double bound = 1e300;
                for (auto d : dtilde_counts)
                    bound = std::min(bound, t.gamma_phi[d][j]);
                tally.add(stab - bound, kGammaSlack);
            }
            break;
        }
        case Check::q_stability: {
            for (std::size_t j = 0; j < 3; ++j) {
                const double q = kUpperQ[j];
                const double stab = moment([q](double v) { return std::pow(v, q); });
                for (auto d : dtilde_counts)
                    tally.add(stab - t.gamma_q[d][j], kQSlack);
            }
            const double low = moment([](double v) { return std::pow(v, kLowerQ); });
            for (auto d : dtilde_counts)
                tally.add(t.gamma_q[d][3] - low, kQSlack);
            break;
        }
        case Check::courtade_kumar: {
            const double stab = moment([](double v) { return bounds::neg_entropy(v); });
            tally.add(stab - bounds::neg_entropy(0.5 * (1.0 + t.rho)), kEntropySlack);
            break;
        }
        case Check::local_optimality: {
            if (static_cast<double>(min_d) * inv > t.eps_star)
                break;
            const double stab = moment([](double v) { return v > 0.0 ? v * std::log(v) : 0.0; });
            tally.add(stab - 0.5 * bounds::neg_entropy(0.5 * (1.0 - t.rho)), kEntropySlack);
            break;
        }
        }
    }
}

} // namespace

BruteReport run_brute(const BruteConfig& config)
{
    if (config.n < 1 || config.n > 5)
        throw cube::DimensionError("brute force supports 1 <= n <= 5");
    std::vector<BooleanFunction> functions;
    if (config.n <= 4) {
        functions = balanced_functions(config.n);
    } else {
        if (!config.sample || *config.sample == 0)
            throw std::invalid_argument("n = 5 needs a sample size");
        functions = sample_balanced(config.n, *config.sample, config.seed);
    }
    for (double rho : config.rhos)
        if (!(rho >= 0.0 && rho <= 1.0))
            throw std::invalid_argument("rho values must lie in [0,1]");

    std::vector<RhoTables> tables;
    for (double rho : config.rhos)
        tables.push_back(build_tables(config.n, rho, config.checks));

    const auto workers = static_cast<std::size_t>(std::max(1, config.threads));
    std::vector<Tallies> partial(workers);
    auto work = [&](std::size_t w, std::size_t begin, std::size_t end) {
        for (const auto& t : tables)
            for (std::size_t k = begin; k < end; ++k)
                check_function(functions[k], t, config.checks, partial[w]);
    };
    const std::size_t chunk = (functions.size() + workers - 1) / workers;
    if (workers == 1) {
        work(0, 0, functions.size());
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(functions.size(), w * chunk);
            const std::size_t end = std::min(functions.size(), begin + chunk);
            pool.emplace_back(work, w, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }

    BruteReport report;
    report.n = config.n;
    report.functions = functions.size();
    report.rhos = config.rhos;
    for (Check c : config.checks) {
        Tally total;
        for (const auto& p : partial)
            if (auto it = p.find(c); it != p.end())
                total.merge(it->second);
        CheckReport r{c, total.tested, total.violations, total.max_violation, total.violations == 0};
        report.pass = report.pass && r.pass;
        report.checks.push_back(r);
    }
    return report;
}

} // namespace noisestab::sweep
