#pragma once

#include <optional>
#include <string>
#include <vector>

namespace noisestab::cert {

inline constexpr const char* kToolVersion = "noisestab 1.0.0";

/// 2 t^2 ln(1/t), 0 at t = 0.
double phi_c(double t);
/// 2 t^2 (t^{-1/2} - 1) on [0, 1/4], t/2 on [1/4, 1/2].
double phi_lp(double t);
/// min(phi_c, phi_lp) at min(t, 1 - t).
double varphi(double t);

/// min{ beta^2 + varphi(1/2 - beta), (1 + sqrt(1 + 4(pi - sqrt(2 pi)) beta))^2 / (8 pi) } on [0, 1/2].
double omega(double beta);
/// Piecewise closed form of omega valid on [0, 1/2 - 0.195].
double omega_closed_form(double beta);
/// Crossing point of the two outer expressions of omega_closed_form, about 0.175661.
double beta_zero();

struct OmegaMax {
    double value;
    double argmax;
};

/// max of omega on [0, 1/2 - eps_star(rho)]: grid at step 1e-5, then golden section on the
/// neighbourhood of the best grid point.
OmegaMax omega_max(double rho);

/// phi(s) = (s ln s + (1-s) ln(1-s)) / s on (0,1).
double phi_ratio(double s);
/// phi'(s) = -ln(1-s) / s^2.
double phi_ratio_prime(double s);

/// Root t in (0,1) of -1/2 (1 + rho - 4 rho^2 w) phi'((1-t)/2) - phi((1-rho)/2) = 0, for a given w.
double t_rho(double rho, double w);
double t_rho(double rho);

/// Left side of the t_rho equation.
double t_rho_residual(double t, double rho, double w);

/// (1 + rho - 4 rho^2 w) phi((1-t)/2) - (1 + t - rho^2) phi((1-rho)/2), the concave objective maximised
/// at t_rho.
double theta_objective(double t, double rho, double w);

/// theta(rho) = theta_objective(t_rho, rho, omega_max(rho)).
double theta_rho(double rho);

struct UpsilonBar {
    double value;
    double argmax_t;
};

/// max over t in [0,1) of (1-rho)(1 + rho - 4 rho^2 w) / (2 (1 + t - rho^2)) phi((1-t)/2), w = omega_max.
UpsilonBar upsilon_bar(double rho);
UpsilonBar upsilon_bar(double rho, double w);

struct UpsilonPoint {
    double p1;
    double p2;
    double gamma;
    bool feasible;
};

/// p1, p2 and gamma(z1, z2, beta) with Phi = t ln t + (1-t) ln(1-t). Feasible iff z1 <= z2 inside the
/// open box |z| < 1/(2 rho), 0 <= p1 <= 1/4 + beta/2 and 0 <= p2 <= 1/4 - beta/2.
UpsilonPoint upsilon_gamma(double z1, double z2, double beta, double rho);

/// max of gamma over an n x n grid of the open box (n interior points per axis, spacing
/// 1/(rho (n+1))). Grids with n+1 doubling are nested. Throws std::runtime_error if no grid point
/// is feasible.
double upsilon_2d(double beta, double rho, int n);

/// Analytic theta'(rho) with omega_max and t_rho held fixed.
double theta_prime(double rho);
/// |theta'(rho)| by symmetric difference with step h.
double lipschitz_margin(double rho, double h = 1e-6);

struct CertificatePoint {
    double rho;
    double theta;
    double t_rho;
    double eps_star;
    double omega_max;
};

struct Certificate {
    double rho_lo = 0.0;
    double rho_hi = 0.0;
    double step = 0.0;
    double delta = 0.0;
    double lipschitz_m = 0.0;
    std::size_t n_points = 0;
    double worst_theta = 0.0;
    double worst_rho = 0.0;
    double max_abs_theta_prime = 0.0;
    bool pass = false;
    std::vector<CertificatePoint> per_point;
    std::vector<std::string> diagnostics;
    std::string tool_version = kToolVersion;
};

/// Evaluates theta on rho_lo + k step for k = 0.. and always at rho_hi. Passes iff every value is
/// below -delta, step <= delta / lipschitz_m, every |theta'| <= lipschitz_m and no evaluation
/// failed. Points are split across `threads` workers; the result does not depend on the split.
/// Throws std::invalid_argument on malformed inputs.
Certificate verify_interval(double rho_lo, double rho_hi, double delta, double lipschitz_m,
                            std::optional<double> step = std::nullopt, bool keep_points = true, int threads = 1);

/// Number of grid points verify_interval will evaluate.
std::size_t grid_size(double rho_lo, double rho_hi, double step);

/// JSON with 17 significant digits, keys as in Certificate, trailing newline.
std::string to_json(const Certificate& c);

} // namespace noisestab::cert
