#include "cavityqed/semiclassical.hpp"

#include <algorithm>
#include <cmath>

namespace cavityqed::semiclassical {

namespace {

using analytic::Complex;

double coupling_slope(const ModelParams& p, double x) {
    const double k = p.wavenumber();
    return -p.g0 * k * std::sin(k * x);
}

std::vector<double> forces_at(const ModelParams& p, std::span<const Position> positions) {
    const auto st = analytic::linear_response_oracle(p, positions);
    std::vector<double> f(positions.size());
    for (std::size_t n = 0; n < positions.size(); ++n)
        f[n] = -coupling_slope(p, positions[n].x) * 2.0 * std::real(std::conj(st.alpha) * st.sigma_bar[n]);
    return f;
}

bool near_antinode(double x, double lambda) {
    const double half = lambda / 2.0;
    const double r = x - half * std::round(x / half);
    return std::abs(r) <= lambda / 8.0;
}

}  // namespace

Configuration pattern(const ModelParams& p, int n_atoms, double offset) {
    Configuration c{with_pattern(p, n_atoms, offset), {}};
    c.positions = c.params.positions;
    return c;
}

Configuration shifted(const Configuration& c, double dx) {
    Configuration out = c;
    for (auto& pos : out.positions) pos.x += dx;
    out.params.positions = out.positions;
    return out;
}

bool far_off_resonance(const ModelParams& p) { return std::abs(p.delta_a) >= 10.0 * p.gamma; }

analytic::LinearSteadyState adiabatic_state(const Configuration& c) {
    return analytic::linear_response_oracle(c.params, c.positions);
}

double force(const Configuration& c, std::size_t n) {
    if (n >= c.positions.size()) throw ValidationError("force: atom index out of range");
    return forces_at(c.params, c.positions)[n];
}

std::vector<double> forces(const Configuration& c) { return forces_at(c.params, c.positions); }

Eigen::MatrixXd force_jacobian(const Configuration& c, double step) {
    const std::size_t n = c.positions.size();
    const double h = step * c.params.lambda;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<Position> work = c.positions;
    for (std::size_t m = 0; m < n; ++m) {
        const double x0 = work[m].x;
        work[m].x = x0 + h;
        const auto plus = forces_at(c.params, work);
        work[m].x = x0 - h;
        const auto minus = forces_at(c.params, work);
        work[m].x = x0;
        for (std::size_t r = 0; r < n; ++r)
            jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = (plus[r] - minus[r]) / (2.0 * h);
    }
    if (!jac.allFinite()) throw RuntimeFailure("force_jacobian: non-finite entries");
    return jac;
}

double jacobian_diagonal(const Configuration& c, std::size_t n, double step) {
    if (n >= c.positions.size()) throw ValidationError("jacobian_diagonal: atom index out of range");
    const double h = step * c.params.lambda;
    std::vector<Position> work = c.positions;
    work[n].x += h;
    const double plus = forces_at(c.params, work)[n];
    work[n].x -= 2.0 * h;
    const double minus = forces_at(c.params, work)[n];
    return (plus - minus) / (2.0 * h);
}

double stiffness_estimate(const ModelParams& p, int n_atoms) {
    const double k = p.wavenumber();
    const double ratio = p.omega / p.g0;
    return 2.0 * k * k * ratio * ratio * p.delta_c / n_atoms;
}

StabilityReport stability(const Configuration& c, double step) {
    if (c.positions.empty()) throw ValidationError("stability: no atoms");
    StabilityReport r;
    r.forces = forces(c);
    r.jacobian = force_jacobian(c, step);
    Eigen::EigenSolver<Eigen::MatrixXd> es(r.jacobian, false);
    if (es.info() != Eigen::Success) throw RuntimeFailure("stability: eigenvalue solver failed");
    r.max_eig_real = es.eigenvalues().real().maxCoeff();
    r.stable = r.max_eig_real < 0.0;
    const bool near = std::all_of(c.positions.begin(), c.positions.end(),
                                  [&](const Position& p) { return near_antinode(p.x, c.params.lambda); });
    if (near && c.params.g0 != 0.0)
        r.estimated_stiffness = stiffness_estimate(c.params, static_cast<int>(c.positions.size()));
    return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(std::abs(x[i]));
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingExponents scaling_probe(const ModelParams& p, std::span<const int> n_list,
                               std::span<const double> omega_list) {
    if (n_list.size() < 3 || omega_list.size() < 3)
        throw ValidationError("scaling_probe: need at least 3 points per list");
    ScalingExponents out;

    std::vector<double> xs, ys;
    for (int n : n_list) {
        if (n < 1) throw ValidationError("scaling_probe: N must be >= 1");
        xs.push_back(n);
        ys.push_back(jacobian_diagonal(pattern(p, n), 0));
    }
    out.n_exponent = loglog_slope(xs, ys);

    xs.clear();
    ys.clear();
    for (double om : omega_list) {
        ModelParams q = p;
        q.omega = om;
        xs.push_back(om);
        ys.push_back(jacobian_diagonal(pattern(q, std::max(1, p.n_atoms)), 0));
    }
    out.omega_exponent = loglog_slope(xs, ys);
    return out;
}

Complex total_field(const ModelParams& p, Complex alpha, double x, double y) {
    const double k = p.wavenumber();
    return p.g0 * std::cos(k * x) * alpha + p.omega * std::exp(Complex(0.0, k * y));
}

ZeroMap field_zero_map(const ModelParams& p, const ZeroGrid& grid, std::optional<Complex> alpha) {
    if (grid.nx < 1 || grid.ny < 1 || !(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min))
        throw ValidationError("field_zero_map: empty grid");
    if (!alpha && p.g0 == 0.0) throw ValidationError("field_zero_map: alpha0 undefined for g0 = 0");
    const Complex a = alpha ? *alpha : Complex(-p.omega / p.g0, 0.0);
    const double k = p.wavenumber();
    const double lambda = p.lambda;

    ZeroMap out;
    out.grid = grid;
    out.intensity.resize(grid.ny, grid.nx);
    const double dx = (grid.x_max - grid.x_min) / grid.nx;
    const double dy = (grid.y_max - grid.y_min) / grid.ny;
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j)
            out.intensity(i, j) = std::norm(total_field(p, a, grid.x_min + j * dx, grid.y_min + i * dy));
    out.peak = out.intensity.maxCoeff();
    if (out.peak == 0.0) return out;  // field vanishes everywhere

    const double accept = 1e-16 * out.peak;
    const double same = 1e-4 * lambda;
    auto refine = [&](double x, double y) {
        for (int it = 0; it < 60; ++it) {
            const Complex e = total_field(p, a, x, y);
            if (std::norm(e) < 1e-6 * accept) break;
            const Complex ex = -p.g0 * k * std::sin(k * x) * a;
            const Complex ey = Complex(0.0, k) * p.omega * std::exp(Complex(0.0, k * y));
            Eigen::Matrix2d jac;
            jac << ex.real(), ey.real(), ex.imag(), ey.imag();
            const Eigen::Vector2d f(e.real(), e.imag());
            const Eigen::Vector2d step =
                jac.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(f);
            x -= step(0);
            y -= step(1);
        }
        return Position{x, y};
    };
    auto reduce = [&](double v) {
        double r = v - lambda * std::floor(v / lambda);
        if (r > lambda - same || r < same) r = 0.0;
        return r;
    };

    for (int i = 0; i < grid.ny; ++i) {
        for (int j = 0; j < grid.nx; ++j) {
            const double v = out.intensity(i, j);
            if (v > 1e-2 * out.peak) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= grid.ny || jj >= grid.nx) continue;
                    if (out.intensity(ii, jj) < v) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min) continue;
            Position z = refine(grid.x_min + j * dx, grid.y_min + i * dy);
            if (!(std::norm(total_field(p, a, z.x, z.y)) < accept)) continue;
            z.x = reduce(z.x);
            z.y = reduce(z.y);
            const bool dup = std::any_of(out.zeros.begin(), out.zeros.end(), [&](const Position& q) {
                return std::abs(q.x - z.x) < same && std::abs(q.y - z.y) < same;
            });
            if (!dup) out.zeros.push_back(z);
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Position& l, const Position& r) {
        return l.x != r.x ? l.x < r.x : l.y < r.y;
    });
    return out;
}

}  // namespace cavityqed::semiclassical
