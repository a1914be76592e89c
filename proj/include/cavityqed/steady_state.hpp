// steady_state.hpp: steady states, time evolution and observables of the master equation

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cavityqed/quantum_model.hpp"

namespace cavityqed {

/// Thrown when the top Fock level is populated above the truncation tolerance.
class TruncationError : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

struct DensityMatrix {
    Eigen::MatrixXcd matrix;
    int n_atoms{0};
    int n_max{0};

    Eigen::Index dim() const { return matrix.rows(); }
};

/// Tolerances a valid DensityMatrix satisfies.
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;
/// Largest top-Fock-level population accepted as an adequate truncation.
inline constexpr double kTruncationTol = 1e-8;

/// Throws RuntimeFailure when rho is not Hermitian, unit-trace and positive
/// within the tolerances above.
void check_density_matrix(const DensityMatrix& rho);

/// |m> (x) |atoms> product states.
DensityMatrix fock_ground_state(int n_atoms, int n_max, int photons = 0);
/// Truncated coherent-state vector with amplitudes exp(-|b|^2/2) b^m / sqrt(m!).
Eigen::VectorXcd coherent_amplitudes(Complex beta, int n_max);

struct SolveOptions {
    bool check_truncation{true};
    double truncation_tol{kTruncationTol};
};

/// Unique steady state of L for kappa > 0. The last row of L is replaced by the
/// trace constraint and the resulting system is solved by sparse LU (dense LU for
/// Hilbert dimensions up to 8). Throws ValidationError for kappa == 0 and
/// RuntimeFailure on a singular/ill-conditioned solve (message carries the
/// residual, and the kernel dimension when small enough to compute).
/// TruncationError when the top Fock level holds more than truncation_tol.
DensityMatrix solve_steady(const Liouvillian& l, const SolveOptions& opts = {});

struct EvolveOptions {
    double abs_tol{1e-11};
    double rel_tol{1e-10};
    double initial_step{1e-3};
};

/// rho(t_final) by adaptive Dormand-Prince integration of d vec(rho)/dt = L vec(rho).
DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final,
                     const EvolveOptions& opts = {});

/// Partial trace over all atoms.
Eigen::MatrixXcd reduced_field_state(const DensityMatrix& rho);

struct Observables {
    double i_cav{0.0};            // kappa <a^+a>
    double i_at{0.0};             // gamma sum_n <s_n^+ s_n>
    double mean_photons{0.0};
    Complex field{0.0, 0.0};      // <a>
    std::optional<double> g2;     // unset when <a^+a> < 1e-12
    std::vector<double> pi_n;
    double coherent_fidelity{0.0};  // <b|rho_field|b>, b = <a>
    double top_population{0.0};     // <n_max|rho_field|n_max>
};

Observables observables(const DensityMatrix& rho, const ModelParams& p);

/// Steady state of the full model with the truncation managed: when p.n_max is
/// unset the cutoff starts at default_fock_cutoff and grows by 4 until the
/// truncation check passes (or the dimension cap is hit); an explicit n_max is
/// used as-is and a failing check throws.
struct QuantumSteadyState {
    DensityMatrix rho;
    Observables obs;
    int n_max{0};
};
QuantumSteadyState solve_model(const ModelParams& p, Eigen::Index max_dim = kDefaultMaxDim);

}  // namespace cavityqed
