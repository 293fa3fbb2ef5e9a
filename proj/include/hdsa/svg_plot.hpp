#pragma once

#include <string>
#include <vector>

#include "hdsa/sweep.hpp"

namespace hdsa {

/// Render the four metric figures (w, v, c-index, R_IBS against the eta
/// path, one curve set per zeta: theory as a line, simulation as markers
/// with +- std error bars) as static SVG files under out_dir. Returns the
/// written paths.
std::vector<std::string> write_sweep_plots(const std::vector<SweepRow>& rows,
                                           const std::string& out_dir);

}  // namespace hdsa
