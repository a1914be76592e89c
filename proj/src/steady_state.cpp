#include "cavityqed/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

namespace cavityqed {

namespace {

using ColSpMat = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

Eigen::Index vec_index(Eigen::Index row, Eigen::Index col, Eigen::Index dim) {
    return row + col * dim;
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Eigen::Index dim) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

double frobenius(const SpMat& m) { return m.norm(); }

// Number of singular values of L below tol * largest, for small systems only.
std::optional<Eigen::Index> kernel_dimension(const SpMat& l) {
    if (l.rows() > 1024) return std::nullopt;
    const Eigen::MatrixXcd dense(l);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = 1e-10 * sv(0);
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < cutoff) ++count;
    return count;
}

[[noreturn]] void solve_failed(const Liouvillian& l, const std::string& what, double residual) {
    std::ostringstream msg;
    msg << "steady-state solve failed: " << what << " (residual " << residual << ")";
    if (auto k = kernel_dimension(l.matrix)) msg << "; Liouvillian kernel dimension " << *k;
    throw RuntimeFailure(msg.str());
}

double top_level_population(const Eigen::MatrixXcd& field) {
    return field(field.rows() - 1, field.cols() - 1).real();
}

}  // namespace

void check_density_matrix(const DensityMatrix& rho) {
    const auto& m = rho.matrix;
    if (m.rows() != m.cols() || m.rows() == 0) throw RuntimeFailure("density matrix not square");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermiticityTol)
        throw RuntimeFailure("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > kTraceTol)
        throw RuntimeFailure("density matrix trace " + std::to_string(tr.real()) + " != 1");
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPositivityTol)
        throw RuntimeFailure("density matrix not positive (min eigenvalue " +
                             std::to_string(min_eig) + ")");
}

DensityMatrix fock_ground_state(int n_atoms, int n_max, int photons) {
    if (photons < 0 || photons > n_max) throw ValidationError("photon number outside truncation");
    const Eigen::Index dim = hilbert_dim(n_atoms, n_max);
    DensityMatrix rho{Eigen::MatrixXcd::Zero(dim, dim), n_atoms, n_max};
    const Eigen::Index idx = static_cast<Eigen::Index>(photons) << n_atoms;
    rho.matrix(idx, idx) = 1.0;
    return rho;
}

Eigen::VectorXcd coherent_amplitudes(Complex beta, int n_max) {
    Eigen::VectorXcd c(n_max + 1);
    c(0) = std::exp(-0.5 * std::norm(beta));
    for (int m = 1; m <= n_max; ++m) c(m) = c(m - 1) * beta / std::sqrt(static_cast<double>(m));
    return c;
}

DensityMatrix solve_steady(const Liouvillian& l, const SolveOptions& opts) {
    if (!(l.params.kappa > 0.0))
        throw ValidationError("solve_steady requires kappa > 0; use evolve for kappa = 0");

    const Eigen::Index n = l.matrix.rows();
    const Eigen::Index dim = l.dim;

    // Replace the last row by the trace functional.
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(l.matrix.nonZeros() + dim));
    for (Eigen::Index r = 0; r < n - 1; ++r)
        for (SpMat::InnerIterator it(l.matrix, r); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index i = 0; i < dim; ++i) trip.emplace_back(n - 1, vec_index(i, i, dim), 1.0);
    ColSpMat system(n, n);
    system.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(n - 1) = 1.0;

    Eigen::VectorXcd x;
    if (dim <= 8) {
        const Eigen::MatrixXcd dense(system);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(dense);
        if (!lu.isInvertible()) solve_failed(l, "singular system", NAN);
        x = lu.solve(rhs);
    } else {
        Eigen::SparseLU<ColSpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(system);
        if (lu.info() != Eigen::Success) solve_failed(l, "sparse LU: " + lu.lastErrorMessage(), NAN);
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success) solve_failed(l, "sparse LU back-substitution", NAN);
    }

    const double residual = (l.matrix * x).norm();
    if (!std::isfinite(residual) || residual > 1e-10 * frobenius(l.matrix))
        solve_failed(l, "residual above 1e-10 * ||L||_F", residual);

    Eigen::MatrixXcd m = unvec(x, dim);
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace();

    DensityMatrix rho{std::move(m), l.params.n_atoms, fock_cutoff(l.params)};
    check_density_matrix(rho);

    if (opts.check_truncation) {
        const double top = top_level_population(reduced_field_state(rho));
        if (top > opts.truncation_tol) {
            std::ostringstream msg;
            msg << "Fock truncation n_max=" << rho.n_max << " inadequate: top-level population "
                << top << " > " << opts.truncation_tol;
            throw TruncationError(msg.str());
        }
    }
    return rho;
}

DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final,
                     const EvolveOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    if (rho0.dim() != l.dim) throw ValidationError("rho0 dimension does not match the Liouvillian");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final must be >= 0");
    check_density_matrix(rho0);

    const Eigen::VectorXcd v0 = vec(rho0.matrix);
    std::vector<Complex> state(v0.data(), v0.data() + v0.size());
    if (t_final > 0.0) {
        const SpMat& gen = l.matrix;
        auto rhs = [&gen](const std::vector<Complex>& x, std::vector<Complex>& dxdt, double) {
            dxdt.resize(x.size());
            Eigen::Map<Eigen::VectorXcd>(dxdt.data(), static_cast<Eigen::Index>(dxdt.size())) =
                gen * Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(x.size()));
        };
        using Stepper = odeint::runge_kutta_dopri5<std::vector<Complex>>;
        try {
            odeint::integrate_adaptive(odeint::make_controlled<Stepper>(opts.abs_tol, opts.rel_tol),
                                       rhs, state, 0.0, t_final,
                                       std::min(opts.initial_step, t_final));
        } catch (const std::exception& e) {
            throw RuntimeFailure(std::string("evolve: step-size control failed: ") + e.what());
        }
    }

    Eigen::MatrixXcd m = unvec(Eigen::Map<const Eigen::VectorXcd>(
                                   state.data(), static_cast<Eigen::Index>(state.size())),
                               l.dim);
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > 1e-8)
        throw RuntimeFailure("evolve: trace drift " + std::to_string(std::abs(tr - 1.0)));
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace();
    return DensityMatrix{std::move(m), rho0.n_atoms, rho0.n_max};
}

Eigen::MatrixXcd reduced_field_state(const DensityMatrix& rho) {
    const Eigen::Index atom_dim = Eigen::Index{1} << rho.n_atoms;
    const Eigen::Index fd = rho.n_max + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fd, fd);
    for (Eigen::Index m = 0; m < fd; ++m)
        for (Eigen::Index k = 0; k < fd; ++k)
            for (Eigen::Index b = 0; b < atom_dim; ++b)
                out(m, k) += rho.matrix(m * atom_dim + b, k * atom_dim + b);
    return out;
}

Observables observables(const DensityMatrix& rho, const ModelParams& p) {
    Observables o;
    const Eigen::MatrixXcd field = reduced_field_state(rho);
    double n1 = 0.0;
    double n2 = 0.0;
    Complex a{0.0, 0.0};
    for (Eigen::Index m = 0; m < field.rows(); ++m) {
        const double md = static_cast<double>(m);
        const double pm = field(m, m).real();
        n1 += md * pm;
        n2 += md * (md - 1.0) * pm;
        if (m > 0) a += std::sqrt(md) * field(m, m - 1);
    }
    o.mean_photons = std::max(0.0, n1);
    o.field = a;
    o.i_cav = p.kappa * o.mean_photons;
    if (o.mean_photons >= 1e-12) o.g2 = std::max(0.0, n2) / (o.mean_photons * o.mean_photons);

    const Eigen::Index dim = rho.dim();
    o.pi_n.assign(static_cast<std::size_t>(rho.n_atoms), 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double pop = rho.matrix(i, i).real();
        for (int n = 0; n < rho.n_atoms; ++n)
            if ((i >> (rho.n_atoms - 1 - n)) & 1) o.pi_n[static_cast<std::size_t>(n)] += pop;
    }
    for (auto& v : o.pi_n) v = std::clamp(v, 0.0, 1.0);
    double sum_pi = 0.0;
    for (double v : o.pi_n) sum_pi += v;
    o.i_at = p.gamma * sum_pi;

    const Eigen::VectorXcd c = coherent_amplitudes(a, rho.n_max);
    o.coherent_fidelity = std::clamp((c.adjoint() * field * c)(0, 0).real(), 0.0, 1.0);
    o.top_population = top_level_population(field);
    return o;
}

QuantumSteadyState solve_model(const ModelParams& p, Eigen::Index max_dim) {
    p.validate();
    ModelParams trial = p;
    const bool automatic = !p.n_max.has_value();
    trial.n_max = fock_cutoff(p);
    for (;;) {
        const Liouvillian l = build_liouvillian(trial, max_dim);
        try {
            DensityMatrix rho = solve_steady(l);
            Observables obs = observables(rho, trial);
            return QuantumSteadyState{std::move(rho), std::move(obs), *trial.n_max};
        } catch (const TruncationError&) {
            if (!automatic || hilbert_dim(trial.n_atoms, *trial.n_max + 4) > max_dim) throw;
            *trial.n_max += 4;
        }
    }
}

}  // namespace cavityqed
