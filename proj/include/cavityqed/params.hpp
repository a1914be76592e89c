// params.hpp: physical parameters of N driven two-level atoms in a lossy cavity mode
//
// Units: hbar = 1, frequencies and rates in units of the atomic decay rate gamma,
// lengths in units of the mode wavelength (lambda = 1 by default, k = 2*pi/lambda).

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavityqed {

/// Input that fails validation (bad parameter, bad config value).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure at run time (singular system, truncation too small, ...).
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Atom coordinate: x along the cavity axis, y along the pump axis.
struct Position {
    double x{0.0};
    double y{0.0};
};

struct ModelParams {
    int n_atoms{1};
    double g0{1.0};        // peak coupling
    double omega{1.0};     // pump Rabi frequency
    double delta_a{0.0};   // Delta = omega_L - omega_0
    double delta_c{0.0};   // delta_c = omega_L - omega_c
    double gamma{1.0};     // atomic population decay rate
    double kappa{1.0};     // cavity linewidth (photon decay rate)
    double lambda{1.0};    // mode wavelength
    std::vector<Position> positions;  // one entry per atom
    std::optional<int> n_max;         // Fock cutoff; unset means automatic

    double wavenumber() const { return 2.0 * std::numbers::pi / lambda; }

    /// Throws ValidationError naming the offending field.
    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (n_atoms < 0) throw ValidationError("n_atoms must be >= 0");
        if (!finite(g0)) throw ValidationError("g0 must be finite");
        if (!finite(omega)) throw ValidationError("omega must be finite");
        if (!finite(delta_a)) throw ValidationError("delta_a must be finite");
        if (!finite(delta_c)) throw ValidationError("delta_c must be finite");
        if (!(gamma > 0.0) || !finite(gamma)) throw ValidationError("gamma must be > 0");
        if (!(kappa >= 0.0) || !finite(kappa)) throw ValidationError("kappa must be >= 0");
        if (!(lambda > 0.0) || !finite(lambda)) throw ValidationError("lambda must be > 0");
        if (n_max && *n_max < 1) throw ValidationError("n_max must be >= 1");
        if (static_cast<int>(positions.size()) != n_atoms)
            throw ValidationError("positions: expected " + std::to_string(n_atoms) +
                                  " entries, got " + std::to_string(positions.size()));
        for (const auto& p : positions)
            if (!finite(p.x) || !finite(p.y)) throw ValidationError("positions must be finite");
    }
};

/// Atoms on the wavelength-periodic pattern x_n = offset + n*lambda, y_n = 0.
inline std::vector<Position> pattern_positions(int n_atoms, double lambda, double offset = 0.0) {
    std::vector<Position> out(static_cast<std::size_t>(n_atoms));
    for (int n = 0; n < n_atoms; ++n) out[static_cast<std::size_t>(n)].x = offset + n * lambda;
    return out;
}

/// Convenience: parameters with atoms placed on the antinode pattern.
inline ModelParams with_pattern(ModelParams p, int n_atoms, double offset = 0.0) {
    p.n_atoms = n_atoms;
    p.positions = pattern_positions(n_atoms, p.lambda, offset);
    return p;
}

/// Mode function coupling g(x) = g0 cos(2 pi x / lambda).
inline double coupling_at(const ModelParams& p, double x) {
    return p.g0 * std::cos(p.wavenumber() * x);
}

}  // namespace cavityqed
