// analytic.hpp: weak-excitation closed forms, derived scales, probe spectroscopy,
// and the coupled-oscillator linear-response solve they are checked against.
//
// Closed forms assume the atoms sit on a wavelength-periodic pattern with a common
// coupling g = g(site_x). The field amplitude is written with prefactor Omega/g, so
// the large-N limit is alpha0 = -Omega/g; for the default antinode site (x = 0)
// g = g0 and this is -Omega/g0. Off the antinode the two prefactors differ, and
// the Omega/g form is the one that agrees with the linear-response solve.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cavityqed/params.hpp"

namespace cavityqed::analytic {

using Complex = std::complex<double>;

struct WeakExcitationResult {
    Complex alpha;
    double pi_n{0.0};
    double i_cav{0.0};  // kappa |alpha|^2
    double i_at{0.0};   // N gamma pi_n
    double s{0.0};      // g^2 / (Delta^2 + gamma^2/4)
    /// False when |gamma/2 + i Delta| >> sqrt(N) g, sqrt(N) Omega does not hold
    /// (taken as a factor 10). The numbers are still returned.
    bool below_saturation{true};
};

/// Field amplitude and excited-state population of each atom for n_atoms atoms at
/// the pattern site site_x (n_atoms may be non-integer for plotting).
/// Throws ValidationError when N = 0 with kappa = delta_c = 0 (indeterminate).
WeakExcitationResult weak_excitation(const ModelParams& p, double n_atoms, double site_x = 0.0);
Complex alpha_weak(const ModelParams& p, double n_atoms, double site_x = 0.0);
double pi_weak(const ModelParams& p, double n_atoms, double site_x = 0.0);

struct DerivedScales {
    Complex alpha0;        // -Omega/g0
    double n_critical{0};  // |delta_c Delta| / g0^2
    double coop_c{0};      // N g0^2 / (gamma kappa)
    double coop_c1{0};     // g0^2 / (2 gamma kappa)
    double i_at_limit{0};  // kappa |alpha0|^2 / (8 C1)
    double i_cav_limit{0}; // kappa |alpha0|^2 (1 - 1/(8 C1))
};

/// Throws ValidationError for g0 = 0 or kappa <= 0.
DerivedScales derived_scales(const ModelParams& p, double n_atoms);

/// Weak-probe scattering rate for delta_c = 0, kappa = 0 (normalization 1):
///   w = gamma dp^2 / ( [dp (dp + Delta) - g(x)^2]^2 + dp^2 gamma^2 / 4 ).
double probe_rate(const ModelParams& p, double x, double delta_p);

struct ProbePeaks {
    double lower{0.0};
    double upper{0.0};
    bool degenerate{false};  // g(x) == 0 (to 1e-12 g0): roots are 0 and -Delta
};

/// Real roots of dp (dp + Delta) - g(x)^2 = 0, ascending.
ProbePeaks probe_peaks(const ModelParams& p, double x);

/// Stationary amplitudes of the linearized (low-excitation) equations
///   0 = -(gamma/2 - i Delta) s_n - i (g(x_n) alpha + Omega_n)
///   0 = -(kappa/2 - i delta_c) alpha - i sum_n g(x_n) s_n
/// with Omega_n = Omega exp(i k y_n).
struct LinearSteadyState {
    Complex alpha;
    std::vector<Complex> sigma_bar;
    std::vector<Position> positions;
    double residual{0.0};  // relative residual of the (N+1) system

    double i_cav(double kappa) const { return kappa * std::norm(alpha); }
    double i_at(double gamma) const;
};

/// Throws RuntimeFailure when the system is singular (a dark resonance with
/// kappa = delta_c = 0 and couplings summing to zero).
LinearSteadyState linear_response_oracle(const ModelParams& p, std::span<const Position> positions);

/// Weak-probe excitation spectrum from the resolvent of the single-excitation
/// non-Hermitian Hamiltonian: atom n at -(dp + Delta - delta_c) - i gamma/2,
/// cavity at -dp - i kappa/2, coupled by g(x_n); the probe drives every atom with
/// unit amplitude. Returns gamma sum_n |c_n|^2 at each grid point.
std::vector<double> probe_response_oracle(const ModelParams& p, std::span<const Position> atoms,
                                          std::span<const double> delta_p_grid);
std::vector<double> probe_response_oracle(const ModelParams& p, double x,
                                          std::span<const double> delta_p_grid);

}  // namespace cavityqed::analytic
