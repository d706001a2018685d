#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdqp/experiment.hpp"

namespace hdqp::figures {

/// Figure presets. Parameters are hard-coded to the simulation setup
/// (Toeplitz alpha = 0.4, eigen ranks 90/15 scaled with dimension,
/// u1 = 1, mu_P on [0.1, 5], 1000 replicates); any deviation requires an
/// explicit config through the `run` subcommand instead.
///   returns_small  - realized vs target returns, n = 250,  p = 100
///   returns_large  - realized vs target returns, n = 2500, p = 1000
///   frontiers      - naive / corrected / population frontiers, both sizes
/// Each preset runs the Gaussian and the heavy-tailed t6 model.
struct FigureResult {
  std::vector<experiment::ExperimentResult> scenarios;
  std::vector<std::string> svg_paths;
};

std::vector<std::string> figure_ids();

/// Runs a preset and writes plot-data CSVs plus static SVGs under out_dir.
/// replicates_override > 0 shrinks the run (smoke mode); base_seed_override
/// != 0 replaces the preset seed. Throws UnknownFigureError for bad ids.
FigureResult reproduce_figure(const std::string& fig_id,
                              const std::string& out_dir,
                              int replicates_override = 0,
                              int threads = 1,
                              std::uint64_t base_seed_override = 0);

}  // namespace hdqp::figures
