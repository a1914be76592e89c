// semiclassical.hpp: dipole forces on the atomic pattern and its mechanical stability
//
// Forces use the adiabatic (linear-response) amplitudes:
//   F_n = -g'(x_n) 2 Re(conj(alpha) s_n),   hbar = 1.
// Stability means every eigenvalue of dF_n/dx_m has negative real part.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavityqed/analytic.hpp"

namespace cavityqed::semiclassical {

struct Configuration {
    ModelParams params;
    std::vector<Position> positions;
};

/// N atoms at x_n = offset + n lambda, y_n = 0.
Configuration pattern(const ModelParams& p, int n_atoms, double offset = 0.0);

/// Same configuration with every atom displaced by dx along the cavity axis.
Configuration shifted(const Configuration& c, double dx);

/// True when |Delta| >= 10 gamma (regime the adiabatic treatment targets).
bool far_off_resonance(const ModelParams& p);

analytic::LinearSteadyState adiabatic_state(const Configuration& c);

double force(const Configuration& c, std::size_t n);
std::vector<double> forces(const Configuration& c);

/// Default finite-difference step, in units of lambda.
inline constexpr double kJacobianStep = 1e-5;

/// Central differences dF_n/dx_m with step h = step * lambda.
Eigen::MatrixXd force_jacobian(const Configuration& c, double step = kJacobianStep);

/// dF_n/dx_n only.
double jacobian_diagonal(const Configuration& c, std::size_t n, double step = kJacobianStep);

struct StabilityReport {
    std::vector<double> forces;
    Eigen::MatrixXd jacobian;
    double max_eig_real{0.0};
    bool stable{false};
    /// 2 k^2 (Omega/g0)^2 delta_c / N; unset when the configuration is not near the
    /// pattern (some atom farther than lambda/8 from an antinode).
    std::optional<double> estimated_stiffness;
};

StabilityReport stability(const Configuration& c, double step = kJacobianStep);

/// 2 k^2 (Omega/g0)^2 delta_c / N.
double stiffness_estimate(const ModelParams& p, int n_atoms);

struct ScalingExponents {
    double n_exponent{0.0};      // slope of log|dF/dx| vs log N
    double omega_exponent{0.0};  // slope of log|dF/dx| vs log Omega
};

/// Log-log fits of the diagonal stiffness on the pattern; N varies at fixed
/// p.omega, Omega varies at N = p.n_atoms. Needs >= 3 points in each list.
ScalingExponents scaling_probe(const ModelParams& p, std::span<const int> n_list,
                               std::span<const double> omega_list);

/// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct ZeroGrid {
    int nx{64};
    int ny{64};
    double x_min{0.0};
    double x_max{1.0};  // half-open ranges, same length unit as lambda
    double y_min{0.0};
    double y_max{1.0};
};

struct ZeroMap {
    ZeroGrid grid;
    Eigen::MatrixXd intensity;     // (ny, nx): |E(x_j, y_i)|^2
    double peak{0.0};
    std::vector<Position> zeros;   // refined, reduced modulo lambda, sorted (x, y)
};

/// E(x, y) = g0 cos(kx) alpha + Omega exp(iky). alpha defaults to -Omega/g0.
analytic::Complex total_field(const ModelParams& p, analytic::Complex alpha, double x, double y);

/// Grid minima refined by Gauss-Newton; a zero is kept when |E|^2 < 1e-16 peak.
ZeroMap field_zero_map(const ModelParams& p, const ZeroGrid& grid,
                       std::optional<analytic::Complex> alpha = std::nullopt);

}  // namespace cavityqed::semiclassical
