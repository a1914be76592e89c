#include "cavityqed/analytic.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace cavityqed::analytic {

namespace {

constexpr Complex I{0.0, 1.0};

// |gamma/2 + i Delta| >> sqrt(N) g, sqrt(N) Omega, with ">>" read as a factor 10.
bool weak_drive_regime(const ModelParams& p, double n_atoms, double g) {
    const double atomic = std::abs(Complex(p.gamma / 2.0, p.delta_a));
    const double collective = std::sqrt(n_atoms) * std::max(std::abs(g), std::abs(p.omega));
    return atomic >= 10.0 * collective;
}

}  // namespace

WeakExcitationResult weak_excitation(const ModelParams& p, double n_atoms, double site_x) {
    if (!(n_atoms >= 0.0) || !std::isfinite(n_atoms)) throw ValidationError("n_atoms must be >= 0");
    const double g = coupling_at(p, site_x);
    const double gamma = p.gamma;
    const double delta = p.delta_a;
    const double dc = p.delta_c;
    const double kappa = p.kappa;

    WeakExcitationResult r;
    r.s = g * g / (delta * delta + gamma * gamma / 4.0);
    const double ns = n_atoms * r.s;

    const Complex collective = ns * Complex(gamma / 2.0, delta);
    const Complex cavity{kappa / 2.0, -dc};
    const Complex denom = collective + cavity;
    if (std::abs(denom) == 0.0)
        throw ValidationError("weak_excitation: indeterminate (no atomic coupling with kappa = delta_c = 0)");

    r.alpha = (g == 0.0) ? Complex{} : -(p.omega / g) * collective / denom;

    const double free_space = p.omega * p.omega / (gamma * gamma / 4.0 + delta * delta);
    const double num = kappa * kappa / 4.0 + dc * dc;
    const double den = std::pow(ns * gamma + kappa, 2) / 4.0 + std::pow(ns * delta - dc, 2);
    r.pi_n = free_space * num / den;

    r.i_cav = kappa * std::norm(r.alpha);
    r.i_at = n_atoms * gamma * r.pi_n;
    r.below_saturation = weak_drive_regime(p, n_atoms, g);
    return r;
}

Complex alpha_weak(const ModelParams& p, double n_atoms, double site_x) {
    return weak_excitation(p, n_atoms, site_x).alpha;
}

double pi_weak(const ModelParams& p, double n_atoms, double site_x) {
    return weak_excitation(p, n_atoms, site_x).pi_n;
}

DerivedScales derived_scales(const ModelParams& p, double n_atoms) {
    if (p.g0 == 0.0) throw ValidationError("derived_scales: g0 must be nonzero");
    if (!(p.kappa > 0.0)) throw ValidationError("derived_scales: kappa must be > 0");
    DerivedScales d;
    const double g2 = p.g0 * p.g0;
    d.alpha0 = -p.omega / p.g0;
    d.n_critical = std::abs(p.delta_c * p.delta_a) / g2;
    d.coop_c = n_atoms * g2 / (p.gamma * p.kappa);
    d.coop_c1 = g2 / (2.0 * p.gamma * p.kappa);
    const double scale = p.kappa * std::norm(d.alpha0);
    d.i_at_limit = scale / (8.0 * d.coop_c1);
    d.i_cav_limit = scale - d.i_at_limit;
    return d;
}

double probe_rate(const ModelParams& p, double x, double delta_p) {
    const double g = coupling_at(p, x);
    const double dp = delta_p;
    const double detuned = dp * (dp + p.delta_a) - g * g;
    const double den = detuned * detuned + dp * dp * p.gamma * p.gamma / 4.0;
    if (den == 0.0)  // g = 0 and dp = 0: free-atom Lorentzian limit
        return p.gamma / (p.delta_a * p.delta_a + p.gamma * p.gamma / 4.0);
    return p.gamma * dp * dp / den;
}

ProbePeaks probe_peaks(const ModelParams& p, double x) {
    const double g = coupling_at(p, x);
    const double delta = p.delta_a;
    ProbePeaks out;
    if (std::abs(g) <= 1e-12 * std::abs(p.g0)) {
        out.lower = std::min(0.0, -delta);
        out.upper = std::max(0.0, -delta);
        out.degenerate = true;
        return out;
    }
    // dp^2 + Delta dp - g^2 = 0; product of roots is -g^2.
    const double root = std::sqrt(delta * delta + 4.0 * g * g);
    const double q = -0.5 * (delta + std::copysign(root, delta == 0.0 ? 1.0 : delta));
    const double r1 = q;
    const double r2 = -g * g / q;
    out.lower = std::min(r1, r2);
    out.upper = std::max(r1, r2);
    return out;
}

double LinearSteadyState::i_at(double gamma) const {
    double sum = 0.0;
    for (const auto& s : sigma_bar) sum += std::norm(s);
    return gamma * sum;
}

LinearSteadyState linear_response_oracle(const ModelParams& p, std::span<const Position> positions) {
    const Complex atomic{p.gamma / 2.0, -p.delta_a};  // gamma/2 - i Delta
    const Complex cavity{p.kappa / 2.0, -p.delta_c};  // kappa/2 - i delta_c
    const std::size_t n = positions.size();

    std::vector<double> g(n);
    std::vector<Complex> pump(n);
    const double k = p.wavenumber();
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = coupling_at(p, positions[i].x);
        pump[i] = positions[i].y == 0.0 ? Complex(p.omega, 0.0)
                                        : p.omega * std::exp(I * (k * positions[i].y));
    }

    // Arrow system: atom rows  atomic s_n + i g_n alpha = -i Omega_n,
    //               field row  cavity alpha + i sum_n g_n s_n = 0.
    // Eliminating the atoms leaves one equation for alpha.
    Complex schur = cavity;
    Complex rhs{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        schur += g[i] * g[i] / atomic;
        rhs -= g[i] * pump[i] / atomic;
    }
    if (std::abs(schur) == 0.0)
        throw RuntimeFailure("linear_response_oracle: singular system (dark resonance)");

    LinearSteadyState out;
    out.positions.assign(positions.begin(), positions.end());
    out.alpha = rhs / schur;
    out.sigma_bar.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.sigma_bar[i] = -I * (g[i] * out.alpha + pump[i]) / atomic;

    // Relative residual of the full system.
    double res2 = 0.0;
    double x2 = std::norm(out.alpha);
    double b2 = 0.0;
    double m2 = std::norm(cavity);
    Complex field_row = cavity * out.alpha;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex r = atomic * out.sigma_bar[i] + I * g[i] * out.alpha + I * pump[i];
        res2 += std::norm(r);
        field_row += I * g[i] * out.sigma_bar[i];
        x2 += std::norm(out.sigma_bar[i]);
        b2 += std::norm(pump[i]);
        m2 += std::norm(atomic) + 2.0 * g[i] * g[i];
    }
    res2 += std::norm(field_row);
    const double scale = std::sqrt(m2) * std::sqrt(x2) + std::sqrt(b2);
    out.residual = scale > 0.0 ? std::sqrt(res2) / scale : 0.0;
    if (!(out.residual < 1e-12))
        throw RuntimeFailure("linear_response_oracle: residual " + std::to_string(out.residual));
    return out;
}

std::vector<double> probe_response_oracle(const ModelParams& p, std::span<const Position> atoms,
                                          std::span<const double> delta_p_grid) {
    if (delta_p_grid.empty()) throw ValidationError("probe_response_oracle: empty grid");
    const auto n = static_cast<Eigen::Index>(atoms.size());
    const double k = p.wavenumber();

    Eigen::VectorXcd drive = Eigen::VectorXcd::Zero(n + 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& a = atoms[static_cast<std::size_t>(i)];
        drive(i) = std::exp(I * (k * a.y));
        const double g = coupling_at(p, a.x);
        m(i, n) = g;
        m(n, i) = g;
    }

    std::vector<double> out;
    out.reserve(delta_p_grid.size());
    for (double dp : delta_p_grid) {
        const Complex atom_energy{-(dp + p.delta_a - p.delta_c), -p.gamma / 2.0};
        const Complex cavity_energy{-dp, -p.kappa / 2.0};
        for (Eigen::Index i = 0; i < n; ++i) m(i, i) = atom_energy;
        m(n, n) = cavity_energy;
        const Eigen::VectorXcd c = -m.fullPivLu().solve(drive);
        out.push_back(p.gamma * c.head(n).squaredNorm());
    }
    return out;
}

std::vector<double> probe_response_oracle(const ModelParams& p, double x,
                                          std::span<const double> delta_p_grid) {
    const Position atom{x, 0.0};
    return probe_response_oracle(p, std::span<const Position>(&atom, 1), delta_p_grid);
}

}  // namespace cavityqed::analytic
