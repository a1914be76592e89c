// simulate: command-line front end: sweeps, built-in figures, probe spectra,
// pattern stability and field-zero maps.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cavityqed/analytic.hpp"
#include "cavityqed/config.hpp"
#include "cavityqed/emit.hpp"
#include "cavityqed/figures.hpp"
#include "cavityqed/semiclassical.hpp"

namespace fs = std::filesystem;
using namespace cavityqed;

namespace {

struct Overrides {
    std::string engine;
    std::string format;
    int threads{-1};
};

void apply(sweep::SweepSpec& spec, const Overrides& o) {
    if (!o.engine.empty()) spec.engine = sweep::parse_engine(o.engine);
    if (o.format == "csv") spec.format = sweep::OutputFormat::csv;
    else if (o.format == "csv+plot") spec.format = sweep::OutputFormat::csv_plot;
    else if (!o.format.empty()) throw ValidationError("--format: expected csv or csv+plot");
    if (o.threads >= 0) spec.threads = o.threads;
    spec.validate();
}

void write_outputs(const sweep::SweepResult& r, const std::string& dir, sweep::OutputFormat fmt) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw RuntimeFailure("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path csv = fs::path(dir) / (r.name + ".csv");
    emit::emit_csv(r, csv.string());
    std::cout << "wrote " << csv.string() << " (" << r.rows.size() << " rows)\n";
    if (fmt == sweep::OutputFormat::csv_plot) {
        const fs::path svg = fs::path(dir) / (r.name + ".svg");
        emit::emit_plot(r, svg.string());
        std::cout << "wrote " << svg.string() << '\n';
    }
    std::size_t failed = 0;
    for (const auto& row : r.rows)
        if (row.flag.rfind("error:", 0) == 0) ++failed;
    if (failed) std::cerr << failed << " point(s) failed; see the flag column\n";
}

int run_sweep_cmd(const std::string& config_path, const std::string& out, const Overrides& o) {
    auto spec = config::parse_config(config::read_file(config_path));
    apply(spec, o);
    write_outputs(sweep::run_sweep(spec), out, spec.format);
    return 0;
}

int run_fig_cmd(const std::string& name, const std::string& out, const Overrides& o) {
    if (!o.engine.empty()) throw ValidationError("--engine is not accepted by fig");
    const auto fmt = o.format == "csv" ? sweep::OutputFormat::csv : sweep::OutputFormat::csv_plot;
    if (!o.format.empty() && o.format != "csv" && o.format != "csv+plot")
        throw ValidationError("--format: expected csv or csv+plot");
    write_outputs(figures::run_figure(name, o.threads < 0 ? 0 : o.threads), out, fmt);
    return 0;
}

int run_probe_cmd(const std::string& config_path, const std::string& out) {
    const auto doc = config::parse_document(config::read_file(config_path));
    const ModelParams p = config::model_params(doc);
    p.validate();
    const auto s = config::probe_settings(doc);
    const auto grid = sweep::sample_axis(s.min, s.max, s.count, sweep::Spacing::linear);

    const auto peaks = analytic::probe_peaks(p, s.x);
    const Position site{s.x, 0.0};
    const auto single = analytic::probe_response_oracle(p, std::span<const Position>(&site, 1), grid);
    const auto collective = analytic::probe_response_oracle(p, pattern_positions(p.n_atoms, p.lambda, s.x), grid);

    sweep::SweepResult r;
    r.name = "probe";
    r.axis_names = {"delta_p"};
    r.columns = {"w_formula", "w_resolvent", "w_resolvent_collective"};
    r.metadata = {{"tool", "cavityqed simulate " + sweep::tool_version()},
                  {"probe_x", std::to_string(s.x)},
                  {"peaks", std::to_string(peaks.lower) + "," + std::to_string(peaks.upper) +
                                (peaks.degenerate ? " (degenerate: g(x) = 0)" : "")}};
    if (p.kappa != 0.0 || p.delta_c != 0.0)
        r.metadata.emplace_back("note", "w_formula assumes kappa = delta_c = 0");
    for (std::size_t i = 0; i < grid.size(); ++i)
        r.rows.push_back({grid[i], std::nullopt,
                          {analytic::probe_rate(p, s.x, grid[i]), single[i], collective[i]}, "", 0.0});

    std::cout << "dressed-state peaks: " << peaks.lower << ' ' << peaks.upper
              << (peaks.degenerate ? " (degenerate)" : "") << '\n';
    if (out.empty()) {
        std::cout << emit::format_csv(r);
    } else {
        write_outputs(r, out, sweep::OutputFormat::csv);
    }
    return 0;
}

int run_stability_cmd(const std::string& config_path) {
    const auto doc = config::parse_document(config::read_file(config_path));
    const ModelParams p = config::model_params(doc);
    p.validate();
    const auto settings = config::stability_settings(doc);
    const semiclassical::Configuration c{p, p.positions};
    if (!semiclassical::far_off_resonance(p))
        std::cerr << "warning: |Delta| < 10 gamma, outside the far-detuned regime\n";
    const auto r = semiclassical::stability(c, settings.step);

    double fmax = 0.0;
    for (double f : r.forces) fmax = std::max(fmax, std::abs(f));
    std::cout.precision(10);
    std::cout << "atoms: " << p.n_atoms << '\n'
              << "max |force|: " << fmax << '\n'
              << "jacobian diagonal (mean): " << r.jacobian.diagonal().mean() << '\n'
              << "max eigenvalue real part: " << r.max_eig_real << '\n'
              << "stable: " << (r.stable ? "yes" : "no") << '\n';
    if (r.estimated_stiffness)
        std::cout << "estimate 2 k^2 (Omega/g0)^2 delta_c / N: " << *r.estimated_stiffness << '\n';
    else
        std::cout << "estimate: not applicable (configuration off the antinode pattern)\n";
    return 0;
}

int run_zeros_cmd(const std::string& config_path, const std::string& out) {
    const auto doc = config::parse_document(config::read_file(config_path));
    const ModelParams p = config::model_params(doc);
    p.validate();
    const auto s = config::zero_settings(doc);
    const auto map = semiclassical::field_zero_map(p, s.grid, s.alpha);

    std::cout.precision(10);
    std::cout << "peak |E|^2: " << map.peak << '\n' << "zeros (x, y):\n";
    for (const auto& z : map.zeros) std::cout << "  " << z.x << ' ' << z.y << '\n';

    if (!out.empty()) {
        sweep::SweepResult r;
        r.name = "zeros";
        r.axis_names = {"x", "y"};
        r.columns = {"intensity"};
        r.plot.log_color = false;
        r.metadata = {{"tool", "cavityqed simulate " + sweep::tool_version()}};
        const double dx = (s.grid.x_max - s.grid.x_min) / s.grid.nx;
        const double dy = (s.grid.y_max - s.grid.y_min) / s.grid.ny;
        for (int j = 0; j < s.grid.nx; ++j)
            for (int i = 0; i < s.grid.ny; ++i)
                r.rows.push_back({s.grid.x_min + j * dx, s.grid.y_min + i * dy, {map.intensity(i, j)}, "", 0.0});
        write_outputs(r, out, sweep::OutputFormat::csv_plot);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven atoms in a lossy cavity: steady states, closed forms, probe spectra and stability"};
    app.require_subcommand(1);

    std::string config_path, out_dir, fig_name;
    Overrides o;

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
    sweep_cmd->add_option("--config", config_path, "Config file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto* fig_cmd = app.add_subcommand("fig", "Reproduce a built-in figure");
    fig_cmd->add_option("name", fig_name, "fig2a fig2b fig3a fig3b fig4 fig5a fig5b")->required();
    fig_cmd->add_option("--out", out_dir, "Output directory")->required();

    for (auto* cmd : {sweep_cmd, fig_cmd}) {
        cmd->add_option("--engine", o.engine, "Engine override");
        cmd->add_option("--format", o.format, "csv or csv+plot");
        cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    }

    auto* probe_cmd = app.add_subcommand("probe", "Weak-probe scattering spectrum");
    probe_cmd->add_option("--config", config_path, "Config file")->required();
    probe_cmd->add_option("--out", out_dir, "Output directory (default: CSV to stdout)");

    auto* stab_cmd = app.add_subcommand("stability", "Mechanical stability of the atomic configuration");
    stab_cmd->add_option("--config", config_path, "Config file")->required();

    auto* zeros_cmd = app.add_subcommand("zeros", "Zeros of the total field in the cavity-pump plane");
    zeros_cmd->add_option("--config", config_path, "Config file")->required();
    zeros_cmd->add_option("--out", out_dir, "Output directory for the intensity map");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sweep_cmd) return run_sweep_cmd(config_path, out_dir, o);
        if (*fig_cmd) return run_fig_cmd(fig_name, out_dir, o);
        if (*probe_cmd) return run_probe_cmd(config_path, out_dir);
        if (*stab_cmd) return run_stability_cmd(config_path);
        if (*zeros_cmd) return run_zeros_cmd(config_path, out_dir);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
