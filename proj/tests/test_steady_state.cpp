#include <doctest.h>

#include <cmath>

#include "cavityqed/steady_state.hpp"

using namespace cavityqed;

namespace {

ModelParams single_atom(double g, double omega, double kappa) {
    ModelParams p = with_pattern(ModelParams{}, 1);
    p.g0 = g;
    p.omega = omega;
    p.kappa = kappa;
    return p;
}

// Coherent field (x) atoms in the ground state.
DensityMatrix coherent_product(Complex beta, int n_atoms, int n_max) {
    const Eigen::VectorXcd c = coherent_amplitudes(beta, n_max);
    const Eigen::Index atoms = Eigen::Index{1} << n_atoms;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(c.size() * atoms);
    for (Eigen::Index m = 0; m < c.size(); ++m) psi(m * atoms) = c(m);
    psi.normalize();
    return DensityMatrix{psi * psi.adjoint(), n_atoms, n_max};
}

}  // namespace

TEST_CASE("optical Bloch steady state of a free atom") {
    // g0 = 0, Omega = gamma, Delta = 0: Pi = Omega^2 / (2 Omega^2 + gamma^2/4 + Delta^2)
    for (double delta : {0.0, 1.5}) {
        ModelParams p = single_atom(0.0, 1.0, 1.0);
        p.delta_a = delta;
        const auto ss = solve_model(p);
        const double expected = 1.0 / (2.0 + 0.25 + delta * delta);
        CHECK(ss.obs.pi_n[0] == doctest::Approx(expected).epsilon(1e-10));
        CHECK(ss.obs.mean_photons < 1e-20);
        CHECK_FALSE(ss.obs.g2.has_value());
    }
}

TEST_CASE("steady state satisfies the density-matrix invariants and the residual bound") {
    for (double g : {1.0, 10.0})
        for (double kappa : {0.1, 1.0, 10.0}) {
            ModelParams p = single_atom(g, 1.0, kappa);
            p.n_max = solve_model(p).n_max;
            const auto l = build_liouvillian(p);
            const auto rho = solve_steady(l);
            CHECK_NOTHROW(check_density_matrix(rho));
            const Eigen::Index d = rho.dim();
            const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.matrix.data(), d * d);
            CHECK((l.matrix * v).norm() < 1e-10 * l.matrix.norm());

            const auto o = observables(rho, p);
            CHECK(o.i_cav >= 0.0);
            CHECK(o.i_at >= 0.0);
            REQUIRE(o.g2.has_value());
            CHECK(*o.g2 >= 0.0);
            CHECK(o.coherent_fidelity >= 0.0);
            CHECK(o.coherent_fidelity <= 1.0 + 1e-12);
            CHECK(o.i_cav == doctest::Approx(kappa * o.mean_photons));
        }
}

TEST_CASE("two- and three-atom steady states") {
    ModelParams p = with_pattern(ModelParams{}, 2);
    p.g0 = 2.0;
    p.omega = 0.5;
    p.kappa = 2.0;
    p.positions[1].x = 0.13;
    const auto ss = solve_model(p);
    CHECK_NOTHROW(check_density_matrix(ss.rho));
    CHECK(ss.obs.pi_n.size() == 2);

    ModelParams q = with_pattern(p, 3);
    q.omega = 0.2;
    const auto s3 = solve_model(q);
    CHECK_NOTHROW(check_density_matrix(s3.rho));
    // identical pattern sites see identical populations
    CHECK(s3.obs.pi_n[0] == doctest::Approx(s3.obs.pi_n[2]).epsilon(1e-8));
}

TEST_CASE("kappa = 0 is rejected by the steady-state solver") {
    const ModelParams p = single_atom(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(solve_steady(build_liouvillian(p)), ValidationError);
}

TEST_CASE("observables of reference field states") {
    SUBCASE("coherent state has g2 = 1") {
        ModelParams p = with_pattern(ModelParams{}, 1);
        p.n_max = 30;
        const auto rho = coherent_product(Complex(1.2, -0.4), 1, 30);
        const auto o = observables(rho, p);
        REQUIRE(o.g2.has_value());
        CHECK(*o.g2 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(o.coherent_fidelity == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(o.field - Complex(1.2, -0.4)) < 1e-9);
    }
    SUBCASE("one-photon Fock state has g2 = 0") {
        ModelParams p = with_pattern(ModelParams{}, 1);
        p.n_max = 4;
        const auto rho = fock_ground_state(1, 4, 1);
        const auto o = observables(rho, p);
        REQUIRE(o.g2.has_value());
        CHECK(*o.g2 == doctest::Approx(0.0));
        CHECK(o.mean_photons == doctest::Approx(1.0));
    }
}

TEST_CASE("partial trace over the atoms") {
    SUBCASE("product state") {
        const int n_max = 3;
        Eigen::MatrixXcd rf = Eigen::MatrixXcd::Random(n_max + 1, n_max + 1);
        rf = rf * rf.adjoint();
        rf /= rf.trace();
        Eigen::MatrixXcd ra = Eigen::MatrixXcd::Random(4, 4);
        ra = ra * ra.adjoint();
        ra /= ra.trace();
        Eigen::MatrixXcd full(rf.rows() * 4, rf.cols() * 4);
        for (Eigen::Index i = 0; i < rf.rows(); ++i)
            for (Eigen::Index j = 0; j < rf.cols(); ++j) full.block(i * 4, j * 4, 4, 4) = rf(i, j) * ra;
        const DensityMatrix rho{full, 2, n_max};
        CHECK((reduced_field_state(rho) - rf).norm() < 1e-14);
    }
    SUBCASE("maximally mixed") {
        const Eigen::Index d = 3 * 8;
        const DensityMatrix rho{Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d), 3, 2};
        const Eigen::MatrixXcd rf = reduced_field_state(rho);
        CHECK((rf - Eigen::MatrixXcd::Identity(3, 3) / 3.0).norm() < 1e-15);
    }
}

TEST_CASE("strong coupling gives a nearly pure field") {
    const auto ss = solve_model(single_atom(10.0, 1.0, 0.1));
    const Eigen::MatrixXcd rf = reduced_field_state(ss.rho);
    CHECK((rf * rf).trace().real() > 0.99);
}

TEST_CASE("density matrix checks reject invalid states") {
    DensityMatrix rho = fock_ground_state(1, 2);
    CHECK_NOTHROW(check_density_matrix(rho));
    rho.matrix(0, 0) = 2.0;
    CHECK_THROWS_AS(check_density_matrix(rho), RuntimeFailure);
    rho = fock_ground_state(1, 2);
    rho.matrix(0, 1) = 0.3;
    CHECK_THROWS_AS(check_density_matrix(rho), RuntimeFailure);
    rho = fock_ground_state(1, 2);
    rho.matrix(0, 0) = 1.5;
    rho.matrix(1, 1) = -0.5;
    CHECK_THROWS_AS(check_density_matrix(rho), RuntimeFailure);
}

TEST_CASE("photon decay from a seeded Fock state") {
    ModelParams p = single_atom(0.0, 0.0, 0.7);
    p.n_max = 3;
    const auto l = build_liouvillian(p);
    const auto rho0 = fock_ground_state(1, 3, 1);
    for (double t : {0.5, 1.0, 3.0}) {
        const auto rho = evolve(l, rho0, t);
        const auto o = observables(rho, p);
        CHECK(o.mean_photons == doctest::Approx(std::exp(-0.7 * t)).epsilon(1e-8));
    }
}

TEST_CASE("steady state is a fixed point of the time evolution") {
    const ModelParams p = single_atom(1.0, 1.0, 2.0);
    const auto l = build_liouvillian(p);
    const auto ss = solve_steady(l);
    const auto out = evolve(l, ss, 10.0 / p.kappa);
    CHECK((out.matrix - ss.matrix).norm() < 1e-7);
}

TEST_CASE("evolution keeps the state positive") {
    ModelParams p = single_atom(1.5, 0.8, 0.5);
    p.delta_a = 0.3;
    p.n_max = 4;
    const auto l = build_liouvillian(p);
    auto rho = fock_ground_state(1, 4, 2);
    for (double t : {0.2, 1.0, 4.0}) {
        const auto r = evolve(l, rho, t);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.matrix);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
        CHECK(std::abs(r.matrix.trace() - 1.0) < 1e-8);
    }
}

TEST_CASE("lossless cavity relaxes into the pure coherent state") {
    // kappa = 0, Omega = g0: the field settles at -Omega/g0 = -1 with the atom in |g>
    ModelParams p = single_atom(1.0, 1.0, 0.0);
    p.n_max = 12;
    const auto l = build_liouvillian(p);
    const auto rho = evolve(l, fock_ground_state(1, 12), 60.0);
    const auto target = coherent_product(Complex(-1.0, 0.0), 1, 12);
    const double fidelity = (target.matrix * rho.matrix).trace().real();
    CHECK(fidelity > 0.999);
}

TEST_CASE("truncation control") {
    SUBCASE("a small explicit cutoff is reported") {
        ModelParams p = single_atom(1.0, 3.0, 0.2);
        p.n_max = 2;
        CHECK_THROWS_AS(solve_model(p), TruncationError);
    }
    SUBCASE("automatic cutoff grows until the top level is empty") {
        const auto ss = solve_model(single_atom(1.0, 1.0, 0.05));
        CHECK(ss.obs.top_population <= kTruncationTol);
        CHECK(ss.n_max >= 11);
    }
    SUBCASE("observables converge as the cutoff grows") {
        ModelParams p = single_atom(1.0, 1.0, 1.0);
        double last_err = 1.0;
        p.n_max = 16;
        const double reference = solve_model(p).obs.mean_photons;
        for (int n : {3, 5, 8}) {
            p.n_max = n;
            SolveOptions opts;
            opts.check_truncation = false;
            const auto rho = solve_steady(build_liouvillian(p), opts);
            const double err = std::abs(observables(rho, p).mean_photons - reference);
            CHECK(err < last_err);
            last_err = err;
        }
    }
}
