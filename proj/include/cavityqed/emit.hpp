// emit.hpp: CSV and SVG output of sweep results

#pragma once

#include <string>

#include "cavityqed/sweep.hpp"

namespace cavityqed::emit {

/// '#' metadata lines, a header, then one row per point. Numbers use 17
/// significant digits in scientific notation; empty cells mark missing values
/// and the trailing `flag` column carries validity flags or failure reasons.
/// The only run-dependent line is the `# run:` comment.
std::string format_csv(const sweep::SweepResult& result);
void emit_csv(const sweep::SweepResult& result, const std::string& path);

/// Self-contained SVG: line plot (one polyline per column) for 1D results,
/// heatmap of the first column with a colorbar for 2D results.
/// Throws ValidationError for an empty result; no file is written then.
std::string format_svg(const sweep::SweepResult& result);
void emit_plot(const sweep::SweepResult& result, const std::string& path);

/// Writes text to path, throwing RuntimeFailure naming the path on I/O errors.
void write_text(const std::string& path, const std::string& text);

}  // namespace cavityqed::emit
