// quantum_model.hpp: truncated Hilbert space, operators, Hamiltonian and Lindblad generator
//
// Basis ordering is field (x) atom_0 (x) ... (x) atom_{N-1}; the flat index of
// |m; b_0 ... b_{N-1}> is m * 2^N + (b_0 b_1 ... b_{N-1} read as a binary number),
// so the last atom is the least significant bit. Atomic state 0 is ground, 1 excited.
//
// Master equation:
//   d rho/dt = -i[H, rho] + gamma sum_n D[sigma_n] rho + kappa D[a] rho,
//   D[c] rho = c rho c^+ - {c^+ c, rho}/2.
// With this convention the atomic population decays at gamma, the cavity photon
// number at kappa, and field/coherence amplitudes at kappa/2 and gamma/2.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Sparse>

#include "cavityqed/params.hpp"

namespace cavityqed {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Largest Hilbert-space dimension build_operators accepts unless told otherwise.
inline constexpr Eigen::Index kDefaultMaxDim = 256;

struct OperatorSet {
    int n_atoms{0};
    int n_max{0};
    Eigen::Index dim{0};
    SpMat a;
    SpMat a_dag;
    std::vector<SpMat> sigma;      // lowering |g><e| of atom n
    std::vector<SpMat> sigma_dag;
};

/// Fock cutoff used when ModelParams::n_max is unset:
/// ceil(|a0|^2 + 6 max(1, |a0|) + 4) with |a0| = |Omega/g0|; 4 when g0 = 0.
int default_fock_cutoff(const ModelParams& p);

/// ModelParams::n_max if set, else default_fock_cutoff.
int fock_cutoff(const ModelParams& p);

Eigen::Index hilbert_dim(int n_atoms, int n_max);

/// Throws ValidationError when 2^N (n_max+1) exceeds max_dim.
OperatorSet build_operators(int n_atoms, int n_max, Eigen::Index max_dim = kDefaultMaxDim);
OperatorSet build_operators(const ModelParams& p, Eigen::Index max_dim = kDefaultMaxDim);

/// H = -delta_c a^+a + sum_n [ -Delta s_n^+ s_n + s_n^+ (g(x_n) a + Omega_n) + h.c. ],
/// Omega_n = Omega exp(i k y_n).
///
/// Written with -Delta s^+ s instead of +Delta s s^+; the two differ by a constant.
SpMat build_hamiltonian(const ModelParams& p, const OperatorSet& ops);
SpMat build_hamiltonian(const ModelParams& p);

struct Liouvillian {
    SpMat matrix;          // dim^2 x dim^2, column-stacked vec(rho)
    ModelParams params;    // n_max resolved
    Eigen::Index dim{0};
};

/// Row-major sparse generator acting on column-stacked vec(rho).
Liouvillian build_liouvillian(const ModelParams& p, Eigen::Index max_dim = kDefaultMaxDim);

/// Superoperators used by build_liouvillian, exposed for tests.
SpMat commutator_superop(const SpMat& h);   // rho -> -i[h, rho]
SpMat dissipator_superop(const SpMat& c);   // rho -> D[c] rho

/// Pump amplitude seen by an atom at p: Omega exp(i k y).
Complex pump_amplitude(const ModelParams& params, const Position& p);

}  // namespace cavityqed
