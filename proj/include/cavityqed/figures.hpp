// figures.hpp: built-in sweeps reproducing the intensity, photon-statistics and
// two-atom position figures

#pragma once

#include <string>
#include <vector>

#include "cavityqed/sweep.hpp"

namespace cavityqed::figures {

/// fig2a fig2b fig3a fig3b fig4 fig5a fig5b
std::vector<std::string> figure_names();

/// Built-in spec(s) of a figure; figures with two curves (fig4, fig5b) have two.
/// Throws ValidationError for an unknown name.
std::vector<sweep::SweepSpec> figure_specs(const std::string& name, int threads = 0);

/// Runs the figure's spec(s); two-curve figures are merged into one result.
sweep::SweepResult run_figure(const std::string& name, int threads = 0);

}  // namespace cavityqed::figures
