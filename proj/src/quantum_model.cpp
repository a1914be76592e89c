#include "cavityqed/quantum_model.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace cavityqed {

namespace {

SpMat identity(Eigen::Index n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat kron(const SpMat& lhs, const SpMat& rhs) {
    SpMat out;
    out = Eigen::kroneckerProduct(lhs, rhs);
    return out;
}

SpMat field_lowering(int n_max) {
    const Eigen::Index d = n_max + 1;
    std::vector<Eigen::Triplet<Complex>> t;
    for (Eigen::Index m = 1; m < d; ++m)
        t.emplace_back(m - 1, m, std::sqrt(static_cast<double>(m)));
    SpMat a(d, d);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SpMat atom_lowering() {
    SpMat s(2, 2);
    s.insert(0, 1) = 1.0;
    s.makeCompressed();
    return s;
}

SpMat adjoint(const SpMat& m) {
    SpMat out = m.adjoint();
    return out;
}

}  // namespace

int default_fock_cutoff(const ModelParams& p) {
    if (p.g0 == 0.0) return 4;
    const double a0 = std::abs(p.omega / p.g0);
    return static_cast<int>(std::ceil(a0 * a0 + 6.0 * std::max(1.0, a0) + 4.0));
}

int fock_cutoff(const ModelParams& p) { return p.n_max ? *p.n_max : default_fock_cutoff(p); }

Eigen::Index hilbert_dim(int n_atoms, int n_max) {
    return (Eigen::Index{1} << n_atoms) * (n_max + 1);
}

OperatorSet build_operators(int n_atoms, int n_max, Eigen::Index max_dim) {
    if (n_atoms < 0) throw ValidationError("n_atoms must be >= 0");
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    if (n_atoms > 30 || hilbert_dim(n_atoms, n_max) > max_dim)
        throw ValidationError("Hilbert-space dimension 2^" + std::to_string(n_atoms) + " * " +
                              std::to_string(n_max + 1) + " exceeds cap " +
                              std::to_string(max_dim));

    OperatorSet ops;
    ops.n_atoms = n_atoms;
    ops.n_max = n_max;
    ops.dim = hilbert_dim(n_atoms, n_max);

    const Eigen::Index atom_dim = Eigen::Index{1} << n_atoms;
    ops.a = kron(field_lowering(n_max), identity(atom_dim));
    ops.a_dag = adjoint(ops.a);

    const SpMat s = atom_lowering();
    for (int n = 0; n < n_atoms; ++n) {
        const Eigen::Index before = (Eigen::Index{n_max} + 1) << n;
        const Eigen::Index after = Eigen::Index{1} << (n_atoms - n - 1);
        SpMat op = kron(kron(identity(before), s), identity(after));
        ops.sigma_dag.push_back(adjoint(op));
        ops.sigma.push_back(std::move(op));
    }
    return ops;
}

OperatorSet build_operators(const ModelParams& p, Eigen::Index max_dim) {
    return build_operators(p.n_atoms, fock_cutoff(p), max_dim);
}

Complex pump_amplitude(const ModelParams& params, const Position& p) {
    if (p.y == 0.0) return {params.omega, 0.0};
    return params.omega * std::exp(Complex(0.0, params.wavenumber() * p.y));
}

SpMat build_hamiltonian(const ModelParams& p, const OperatorSet& ops) {
    p.validate();
    if (ops.n_atoms != p.n_atoms) throw ValidationError("operator set built for a different N");

    const SpMat n_op = ops.a_dag * ops.a;
    SpMat h = -p.delta_c * n_op;
    for (int n = 0; n < p.n_atoms; ++n) {
        const auto& s = ops.sigma[static_cast<std::size_t>(n)];
        const auto& sd = ops.sigma_dag[static_cast<std::size_t>(n)];
        const double g = coupling_at(p, p.positions[static_cast<std::size_t>(n)].x);
        const Complex pump = pump_amplitude(p, p.positions[static_cast<std::size_t>(n)]);
        const SpMat sd_a = sd * ops.a;
        const SpMat sd_s = sd * s;
        SpMat drive = g * sd_a + pump * sd;
        SpMat term = -p.delta_a * sd_s + drive + adjoint(drive);
        h += term;
    }
    h.prune(Complex(0.0, 0.0));
    h.makeCompressed();
    return h;
}

SpMat build_hamiltonian(const ModelParams& p) {
    return build_hamiltonian(p, build_operators(p));
}

// Column stacking: vec(A rho B) = (B^T (x) A) vec(rho).
SpMat commutator_superop(const SpMat& h) {
    const SpMat id = identity(h.rows());
    SpMat ht = h.transpose();
    SpMat out = Complex(0.0, -1.0) * (kron(id, h) - kron(ht, id));
    return out;
}

SpMat dissipator_superop(const SpMat& c) {
    const SpMat id = identity(c.rows());
    const SpMat cd = adjoint(c);
    const SpMat cdc = cd * c;
    SpMat cdct = cdc.transpose();
    SpMat cconj = c.conjugate();
    SpMat out = kron(cconj, c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdct, id);
    return out;
}

Liouvillian build_liouvillian(const ModelParams& p, Eigen::Index max_dim) {
    p.validate();
    ModelParams resolved = p;
    resolved.n_max = fock_cutoff(p);
    const OperatorSet ops = build_operators(resolved, max_dim);
    const SpMat h = build_hamiltonian(resolved, ops);

    SpMat l = commutator_superop(h);
    if (p.kappa > 0.0) l += p.kappa * dissipator_superop(ops.a);
    for (const auto& s : ops.sigma) l += p.gamma * dissipator_superop(s);
    l.prune(Complex(0.0, 0.0));
    l.makeCompressed();

    return Liouvillian{std::move(l), std::move(resolved), ops.dim};
}

}  // namespace cavityqed
