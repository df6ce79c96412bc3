#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noisestab/cube.hpp"
#include "noisestab/spectrum.hpp"

namespace noisestab::sweep {

/// Every balanced function on {+-1}^n, in increasing bit-set order. n <= 4.
std::vector<cube::BooleanFunction> balanced_functions(int n);

/// `count` balanced functions drawn uniformly (with replacement) from a seeded mt19937_64.
std::vector<cube::BooleanFunction> sample_balanced(int n, std::size_t count, std::uint64_t seed);

/// Step function with `cells` equal cells whose averages are the increments of
/// big_theta(alpha, ., rho); its concentration equals big_theta at the cell edges.
cube::StepSpectrum sampled_theta_spectrum(double alpha, double rho, int cells = 64);

enum class Check { majorization, gamma_bound, q_stability, courtade_kumar, local_optimality };

const char* check_name(Check c);
std::optional<Check> parse_check(const std::string& name);
std::vector<Check> all_checks();

struct BruteConfig {
    int n = 4;
    std::vector<double> rhos{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<Check> checks = all_checks();
    /// Required for n = 5; ignored for n <= 4.
    std::optional<std::size_t> sample;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct CheckReport {
    Check check;
    std::size_t tested = 0;
    std::size_t violations = 0;
    /// Largest (bound side - allowed side) seen; a pass keeps it at or below the slack.
    double max_violation = -1e300;
    bool pass = true;
};

struct BruteReport {
    int n = 0;
    std::size_t functions = 0;
    std::vector<double> rhos;
    std::vector<CheckReport> checks;
    bool pass = true;
};

/// Runs the selected checks over every (function, rho) pair:
///   majorization      concentration of T f <= big_theta(1/2, beta) + 1e-9 on beta = k/64
///   gamma_bound       Stab_Phi[f] <= min_i Gamma(d~_i) + 1e-7 for Phi in {t ln t + (1-t) ln(1-t), t^2 - t, (t^3 - t)/2}
///   q_stability       E[(T f)^q] <= Gamma_q(d~_i) for q in {1.5, 2, 3}, >= for q = 0.5, slack 1e-10
///   courtade_kumar    Stab_1^sym[f] <= h((1+rho)/2) + 1e-9
///   local_optimality  E[T f ln T f] <= h((1-rho)/2)/2 + 1e-9 whenever min_i d~_i <= eps_star(rho)
/// Throws cube::DimensionError for n > 5 and std::invalid_argument for n = 5 without a sample size.
BruteReport run_brute(const BruteConfig& config);

} // namespace noisestab::sweep
