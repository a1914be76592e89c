// sweep.hpp: parameter sweeps over the analytic, quantum, oracle and semiclassical engines

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavityqed/quantum_model.hpp"

namespace cavityqed::sweep {

enum class Engine { analytic, quantum, oracle, semiclassical };
enum class Axis { n_atoms, kappa, omega, delta_c, delta_a, x1, x2, delta_p };
enum class Spacing { linear, log, inverse };
enum class OutputFormat { csv, csv_plot };

/// Atom-number cap for the quantum engine.
inline constexpr int kQuantumMaxAtoms = 4;

std::string to_string(Engine e);
std::string to_string(Axis a);
std::string to_string(Spacing s);
Engine parse_engine(const std::string& s);
Axis parse_axis(const std::string& s);
Spacing parse_spacing(const std::string& s);

/// min..max with count points. linear and log are evenly spaced in v and log v;
/// inverse is evenly spaced in 1/v.
std::vector<double> sample_axis(double min, double max, int count, Spacing spacing);

struct AxisSpec {
    Axis axis{Axis::n_atoms};
    std::vector<double> values;
};

struct PlotOptions {
    bool log_x{false};
    bool log_y{false};
    bool log_color{false};
};

struct SweepSpec {
    std::string name{"sweep"};
    ModelParams base;
    Engine engine{Engine::analytic};
    AxisSpec axis;
    std::optional<AxisSpec> axis2;
    /// Unset means the engine's defaults; an empty list gives metadata-only rows.
    std::optional<std::vector<std::string>> outputs;
    bool cross_check{false};
    double probe_x{0.0};
    int threads{0};  // 0: hardware concurrency
    Eigen::Index max_dim{kDefaultMaxDim};
    OutputFormat format{OutputFormat::csv};
    PlotOptions plot;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    std::vector<std::string> resolved_outputs() const;
};

/// Observable names an engine can produce for the given axis.
std::vector<std::string> available_outputs(Engine e, Axis axis, int n_atoms);
std::vector<std::string> default_outputs(Engine e, Axis axis);

struct SweepRow {
    double value{0.0};
    std::optional<double> value2;
    std::vector<std::optional<double>> cells;  // aligned with SweepResult::columns
    std::string flag;                          // validity flags / failure reason
    double wall_seconds{0.0};
};

struct SweepResult {
    std::string name;
    std::vector<std::string> axis_names;  // one or two
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    PlotOptions plot;
    double wall_seconds{0.0};

    std::optional<std::size_t> column_index(const std::string& name) const;
    /// Cell value of a named column, unset when absent or empty.
    std::optional<double> cell(std::size_t row, const std::string& column) const;
};

/// Evaluates every axis point (concurrently when threads != 1). Rows follow the
/// input order; a failing point is recorded in its row and never aborts the sweep.
SweepResult run_sweep(const SweepSpec& spec);

/// Parameters at one axis point.
ModelParams apply_axis(const ModelParams& base, Axis axis, double value);

/// Joins two results sampled on the same axis values, renaming columns with suffixes.
SweepResult merge_columns(const SweepResult& a, const std::string& suffix_a, const SweepResult& b,
                          const std::string& suffix_b);

std::string tool_version();

}  // namespace cavityqed::sweep
