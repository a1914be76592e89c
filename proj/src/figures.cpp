#include "cavityqed/figures.hpp"

#include <algorithm>

namespace cavityqed::figures {

namespace {

using sweep::Axis;
using sweep::Engine;
using sweep::SweepSpec;

// Omega = g = 10, kappa = 10, Delta = -1000, delta_c given; N from 1 to 1e4.
SweepSpec intensity_vs_n(const std::string& name, double delta_c) {
    SweepSpec s;
    s.name = name;
    s.engine = Engine::analytic;
    s.base.g0 = 10.0;
    s.base.omega = 10.0;
    s.base.kappa = 10.0;
    s.base.delta_a = -1000.0;
    s.base.delta_c = delta_c;
    s.base = with_pattern(s.base, 1);
    s.axis.axis = Axis::n_atoms;
    for (double v : sweep::sample_axis(1.0, 1e4, 240, sweep::Spacing::log)) {
        const double n = std::round(v);
        if (std::find(s.axis.values.begin(), s.axis.values.end(), n) == s.axis.values.end())
            s.axis.values.push_back(n);
    }
    s.outputs = std::vector<std::string>{"i_cav", "i_at"};
    s.plot.log_x = true;
    s.plot.log_y = true;
    return s;
}

// Single atom, Omega = gamma, Delta = delta_c = 0, kappa from 0.05 to 20 (log).
SweepSpec single_atom_vs_kappa(const std::string& name, double g, std::vector<std::string> outputs) {
    SweepSpec s;
    s.name = name;
    s.engine = Engine::quantum;
    s.base.g0 = g;
    s.base.omega = 1.0;
    s.base = with_pattern(s.base, 1);
    s.axis.axis = Axis::kappa;
    s.axis.values = sweep::sample_axis(0.05, 20.0, 40, sweep::Spacing::log);
    s.outputs = std::move(outputs);
    s.plot.log_x = true;
    s.plot.log_y = true;
    return s;
}

// Two atoms, g0 = 10, Delta = 100, delta_c = 0, Omega = 1.
SweepSpec two_atoms(const std::string& name, double kappa) {
    SweepSpec s;
    s.name = name;
    s.engine = Engine::quantum;
    s.base.g0 = 10.0;
    s.base.omega = 1.0;
    s.base.delta_a = 100.0;
    s.base.kappa = kappa;
    s.base.n_atoms = 2;
    s.base.positions = {Position{0.0, 0.0}, Position{0.0, 0.0}};
    s.outputs = std::vector<std::string>{"ratio"};
    return s;
}

}  // namespace

std::vector<std::string> figure_names() { return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5a", "fig5b"}; }

std::vector<SweepSpec> figure_specs(const std::string& name, int threads) {
    std::vector<SweepSpec> specs;
    const std::vector<std::string> fig3_cols{"inv_kappa", "i_cav", "i_at", "free_space_rate"};
    const std::vector<std::string> fig4_cols{"inv_kappa", "mean_photons", "g2"};
    if (name == "fig2a") {
        specs.push_back(intensity_vs_n(name, 0.0));
    } else if (name == "fig2b") {
        specs.push_back(intensity_vs_n(name, -5.0));
    } else if (name == "fig3a") {
        specs.push_back(single_atom_vs_kappa(name, 1.0, fig3_cols));
    } else if (name == "fig3b") {
        specs.push_back(single_atom_vs_kappa(name, 10.0, fig3_cols));
    } else if (name == "fig4") {
        specs.push_back(single_atom_vs_kappa(name, 1.0, fig4_cols));
        specs.push_back(single_atom_vs_kappa(name, 10.0, fig4_cols));
    } else if (name == "fig5a") {
        SweepSpec s = two_atoms(name, 0.2);
        s.axis.axis = Axis::x1;
        s.axis.values = sweep::sample_axis(0.0, 0.975, 40, sweep::Spacing::linear);
        s.axis2 = sweep::AxisSpec{Axis::x2, s.axis.values};
        s.plot.log_color = true;
        specs.push_back(std::move(s));
    } else if (name == "fig5b") {
        for (double kappa : {0.2, 1.0}) {
            SweepSpec s = two_atoms(name, kappa);
            s.axis.axis = Axis::x2;
            s.axis.values = sweep::sample_axis(0.005, 1.0, 200, sweep::Spacing::linear);
            s.plot.log_y = true;
            specs.push_back(std::move(s));
        }
    } else {
        throw ValidationError("unknown figure '" + name + "' (fig2a fig2b fig3a fig3b fig4 fig5a fig5b)");
    }
    for (auto& s : specs) s.threads = threads;
    return specs;
}

sweep::SweepResult run_figure(const std::string& name, int threads) {
    const auto specs = figure_specs(name, threads);
    sweep::SweepResult r = sweep::run_sweep(specs.front());
    if (specs.size() == 1) return r;

    sweep::SweepResult second = sweep::run_sweep(specs[1]);
    if (name == "fig4") {
        // inv_kappa is shared; keep one copy.
        r = sweep::merge_columns(r, "_g1", second, "_g10");
        const auto drop = r.column_index("inv_kappa_g10");
        if (drop) {
            r.columns.erase(r.columns.begin() + static_cast<long>(*drop));
            for (auto& row : r.rows) row.cells.erase(row.cells.begin() + static_cast<long>(*drop));
        }
        const auto keep = r.column_index("inv_kappa_g1");
        if (keep) r.columns[*keep] = "inv_kappa";
        return r;
    }
    return sweep::merge_columns(r, "_kappa0.2", second, "_kappa1");
}

}  // namespace cavityqed::figures
