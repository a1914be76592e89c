#include <doctest.h>

#include <algorithm>
#include <random>

#include "cavityqed/analytic.hpp"

using namespace cavityqed;
using analytic::Complex;

namespace {

// Closed forms written exactly as printed, with s = g^2 / (Delta^2 + gamma^2/4).
Complex alpha_printed(const ModelParams& p, double n, double g) {
    const double s = g * g / (p.delta_a * p.delta_a + p.gamma * p.gamma / 4.0);
    const Complex a(p.gamma / 2.0, p.delta_a);
    const Complex num = n * s * a;
    return -(p.omega / g) * num / (num + Complex(p.kappa / 2.0, -p.delta_c));
}

double pi_printed(const ModelParams& p, double n, double g) {
    const double s = g * g / (p.delta_a * p.delta_a + p.gamma * p.gamma / 4.0);
    const double pre = p.omega * p.omega / (p.gamma * p.gamma / 4.0 + p.delta_a * p.delta_a);
    const double num = p.kappa * p.kappa / 4.0 + p.delta_c * p.delta_c;
    const double a = n * s * p.gamma + p.kappa;
    const double b = n * s * p.delta_a - p.delta_c;
    return pre * num / (a * a / 4.0 + b * b);
}

ModelParams fig2(double delta_c) {
    ModelParams p;
    p.g0 = 10.0;
    p.omega = 10.0;
    p.kappa = 10.0;
    p.delta_a = -1000.0;
    p.delta_c = delta_c;
    return with_pattern(p, 1);
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("closed forms agree with the printed expressions") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        ModelParams p = with_pattern(ModelParams{}, 1);
        p.g0 = std::abs(u(rng)) / 5.0 + 0.1;
        p.omega = u(rng) / 10.0;
        p.delta_a = u(rng) * 10.0;
        p.delta_c = u(rng) / 5.0;
        p.kappa = std::abs(u(rng)) / 5.0 + 0.01;
        const double n = std::round(std::exp(std::abs(u(rng)) / 5.0));
        const double x = (i % 4 == 0) ? 0.1 : 0.0;
        const double g = coupling_at(p, x);
        const auto w = analytic::weak_excitation(p, n, x);
        CHECK(rel(w.alpha, alpha_printed(p, n, g)) < 1e-12);
        CHECK(rel(w.pi_n, pi_printed(p, n, g)) < 1e-12);
        CHECK(w.i_cav == doctest::Approx(p.kappa * std::norm(w.alpha)));
        CHECK(w.i_at == doctest::Approx(n * p.gamma * w.pi_n));
        CHECK(w.pi_n >= 0.0);
    }
}

TEST_CASE("closed forms agree with the linear-response solve on the pattern") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ModelParams p;
        p.g0 = 5.0 + 5.0 * u(rng);
        p.omega = 3.0 * u(rng);
        p.delta_a = 200.0 * u(rng);
        p.delta_c = 10.0 * u(rng);
        p.kappa = 5.0 * (1.0 + u(rng)) + 0.01;
        const int n = 1 + i % 40;
        const double offset = (i % 3 == 0) ? 0.05 : 0.0;
        p = with_pattern(p, n, offset);
        const auto lin = analytic::linear_response_oracle(p, p.positions);
        CHECK(lin.residual < 1e-12);
        CHECK(rel(analytic::alpha_weak(p, n, offset), lin.alpha) < 1e-10);
        for (const auto& s : lin.sigma_bar)
            CHECK(rel(analytic::pi_weak(p, n, offset), std::norm(s)) < 1e-10);
    }
}

TEST_CASE("interference limit without cavity loss") {
    for (double n : {1.0, 10.0, 1e6}) {
        ModelParams p = fig2(0.0);
        p.kappa = 0.0;
        const auto w = analytic::weak_excitation(p, n);
        CHECK(std::abs(w.alpha - Complex(-p.omega / p.g0, 0.0)) < 1e-14);
        CHECK(w.pi_n == 0.0);
    }
}

TEST_CASE("undriven and uncoupled limits") {
    ModelParams p = fig2(-5.0);
    p.omega = 0.0;
    p = with_pattern(p, 3);
    const auto lin = analytic::linear_response_oracle(p, p.positions);
    CHECK(std::abs(lin.alpha) == 0.0);
    for (auto s : lin.sigma_bar) CHECK(std::abs(s) == 0.0);

    ModelParams q = fig2(-5.0);
    q.g0 = 0.0;
    CHECK(std::abs(analytic::alpha_weak(q, 10.0)) == 0.0);
    CHECK_THROWS_AS(analytic::derived_scales(q, 10.0), ValidationError);
}

TEST_CASE("opposite couplings cancel in the field") {
    ModelParams p;
    p.g0 = 5.0;
    p.omega = 1.0;
    p.delta_a = 50.0;
    p.kappa = 1.0;
    p.n_atoms = 2;
    p.positions = {Position{0.0, 0.0}, Position{0.5, 0.0}};
    const auto split = analytic::linear_response_oracle(p, p.positions);
    p.positions[1].x = 1.0;
    const auto together = analytic::linear_response_oracle(p, p.positions);
    CHECK(std::abs(split.alpha) < 1e-12 * std::abs(together.alpha));
    CHECK(std::abs(together.alpha) > 0.1);
}

TEST_CASE("field saturates and atomic emission is suppressed as 1/N^2") {
    const ModelParams p = fig2(0.0);
    const Complex a0(-p.omega / p.g0, 0.0);
    double last = 1e300;
    for (double n = 1.0; n <= 1e4; n *= 2.0) {
        const double dev = std::abs(analytic::alpha_weak(p, n) - a0);
        CHECK(dev < last);
        last = dev;
    }
    // threshold kappa / (s gamma) = 1000 here; take N well beyond it
    double prev = 0.0;
    for (double n = 1e5; n <= 1.6e6; n *= 2.0) {
        const double scaled = analytic::pi_weak(p, n) * n * n;
        if (prev > 0.0) CHECK(rel(scaled, prev) < 0.01);
        prev = scaled;
    }
}

TEST_CASE("Bragg regime scales as N^2") {
    const ModelParams p = fig2(0.0);
    const double ref = analytic::weak_excitation(p, 1.0).i_cav;
    for (double n : {2.0, 3.0, 5.0}) {
        const double i = analytic::weak_excitation(p, n).i_cav;
        CHECK(rel(i / (n * n), ref) < 0.01);
    }
}

TEST_CASE("derived scales") {
    ModelParams p = fig2(-5.0);
    const auto d = analytic::derived_scales(p, 100.0);
    CHECK(d.n_critical == doctest::Approx(50.0));
    CHECK(d.coop_c == doctest::Approx(100.0 * 100.0 / 10.0));
    CHECK(d.coop_c1 == doctest::Approx(100.0 / 20.0));
    CHECK(std::abs(d.alpha0 - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(d.i_at_limit + d.i_cav_limit == p.kappa * std::norm(d.alpha0));
    CHECK(d.i_at_limit >= 0.0);
    CHECK(d.i_cav_limit >= 0.0);
    p.kappa = 0.0;
    CHECK_THROWS_AS(analytic::derived_scales(p, 1.0), ValidationError);
}

TEST_CASE("saturation flag") {
    ModelParams p = fig2(0.0);
    CHECK(analytic::weak_excitation(p, 10.0).below_saturation);
    CHECK_FALSE(analytic::weak_excitation(p, 1e4).below_saturation);
    p.delta_a = 0.0;
    CHECK_FALSE(analytic::weak_excitation(p, 1.0).below_saturation);
}

TEST_CASE("probe spectrum") {
    ModelParams p;
    p.g0 = 3.0;
    p.delta_a = 4.0;
    p.kappa = 0.0;
    p = with_pattern(p, 1);

    SUBCASE("Fano zero at the cavity frequency") { CHECK(analytic::probe_rate(p, 0.0, 0.0) == 0.0); }

    SUBCASE("printed expression") {
        for (double dp : {-7.0, -0.3, 0.2, 5.5}) {
            const double g = p.g0;
            const double q = dp * (dp + p.delta_a) - g * g;
            const double expected = p.gamma * dp * dp / (q * q + dp * dp * p.gamma * p.gamma / 4.0);
            CHECK(rel(analytic::probe_rate(p, 0.0, dp), expected) < 1e-14);
        }
    }

    SUBCASE("peaks are the dressed-state energies") {
        const auto pk = analytic::probe_peaks(p, 0.0);
        const double disc = std::sqrt(p.delta_a * p.delta_a + 4.0 * p.g0 * p.g0);
        CHECK(pk.lower == doctest::Approx((-p.delta_a - disc) / 2.0));
        CHECK(pk.upper == doctest::Approx((-p.delta_a + disc) / 2.0));
        CHECK_FALSE(pk.degenerate);

        // grid maxima sit on the roots within the grid spacing
        const double h = 1e-3;
        std::vector<double> grid;
        for (double dp = -12.0; dp <= 4.0; dp += h) grid.push_back(dp);
        std::vector<double> w(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] = analytic::probe_rate(p, 0.0, grid[i]);
        std::vector<double> maxima;
        for (std::size_t i = 1; i + 1 < w.size(); ++i)
            if (w[i] > w[i - 1] && w[i] >= w[i + 1]) maxima.push_back(grid[i]);
        REQUIRE(maxima.size() == 2);
        CHECK(std::abs(maxima[0] - pk.lower) < 2.0 * h);
        CHECK(std::abs(maxima[1] - pk.upper) < 2.0 * h);
    }

    SUBCASE("resonant and degenerate roots") {
        ModelParams q = p;
        q.delta_a = 0.0;
        const auto pk = analytic::probe_peaks(q, 0.0);
        CHECK(pk.lower == doctest::Approx(-3.0));
        CHECK(pk.upper == doctest::Approx(3.0));
        const auto node = analytic::probe_peaks(p, 0.25);
        CHECK(node.degenerate);
        CHECK(node.lower == doctest::Approx(-4.0));
        CHECK(node.upper == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("far-detuned roots from the stable quadratic") {
        ModelParams q = p;
        q.g0 = 10.0;
        q.delta_a = -1000.0;
        const auto pk = analytic::probe_peaks(q, 0.0);
        const double disc = std::sqrt(1000.0 * 1000.0 + 400.0);
        CHECK(pk.lower == doctest::Approx(-200.0 / (1000.0 + disc)).epsilon(1e-12));
        CHECK(pk.upper == doctest::Approx((1000.0 + disc) / 2.0).epsilon(1e-12));
        CHECK(pk.lower == doctest::Approx(-0.09999).epsilon(1e-4));
        CHECK(pk.upper == doctest::Approx(1000.1).epsilon(1e-5));
    }
}

TEST_CASE("resolvent spectrum reproduces the closed form shape") {
    ModelParams p;
    p.g0 = 2.0;
    p.delta_a = -3.0;
    p.kappa = 0.0;
    p = with_pattern(p, 1);
    std::vector<double> grid;
    for (int i = 0; i <= 800; ++i) grid.push_back(-10.0 + 0.025 * i);
    for (double x : {0.0, 0.1}) {
        const auto r = analytic::probe_response_oracle(p, x, grid);
        std::vector<double> w(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] = analytic::probe_rate(p, x, grid[i]);
        const double rmax = *std::max_element(r.begin(), r.end());
        const double wmax = *std::max_element(w.begin(), w.end());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (w[i] / wmax < 1e-12) {
                CHECK(r[i] / rmax < 1e-12);
            } else {
                CHECK(rel(r[i] / rmax, w[i] / wmax) < 1e-8);
            }
        }
    }
    const std::vector<double> zero{0.0};
    CHECK(analytic::probe_response_oracle(p, 0.0, zero)[0] == doctest::Approx(0.0).epsilon(1e-30));

    SUBCASE("cavity loss lifts the zero") {
        ModelParams q = p;
        q.kappa = 1.0;
        CHECK(analytic::probe_response_oracle(q, 0.0, zero)[0] > 1e-6);
    }
    SUBCASE("empty grid") {
        CHECK_THROWS_AS(analytic::probe_response_oracle(p, 0.0, std::vector<double>{}), ValidationError);
    }
}

TEST_CASE("collective dipole splits as sqrt(N) g") {
    ModelParams p;
    p.g0 = 1.5;
    p.delta_a = 0.0;
    p.kappa = 0.0;
    p = with_pattern(p, 3);
    std::vector<double> grid;
    const double h = 1e-3;
    for (double dp = -4.0; dp <= 4.0; dp += h) grid.push_back(dp);
    const auto r = analytic::probe_response_oracle(p, p.positions, grid);
    std::vector<double> maxima;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        if (r[i] > r[i - 1] && r[i] >= r[i + 1]) maxima.push_back(grid[i]);
    REQUIRE(maxima.size() == 2);
    const double expected = std::sqrt(3.0) * p.g0;
    CHECK(std::abs(maxima[0] + expected) < 2.0 * h);
    CHECK(std::abs(maxima[1] - expected) < 2.0 * h);
}
