#pragma once

#include "cswv/experiments.hpp"

#include <string>

namespace cswv::cli {

/// Parses an experiment description:
///
///   {
///     "master_seed": 1,
///     "learning": [{"n": 2048, "k": 82, "iterations": 400, "trials": 1, "seed": 1,
///                   "algorithms": ["eamp", "amp", "iht", "ist"]}],
///     "bits": [{"source": {"scene": "blobs", "width": 64, "height": 64, "frames": 8},
///               "bits": [8, 10, 12], "threshold": 1.0}],
///     "rate": [{"source": {...}, "thresholds": [0.5, 1.0], "bits": 12}]
///   }
///
/// Every key is optional. Unknown keys are rejected.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

} // namespace cswv::cli
