#pragma once

#include <string>
#include <string_view>

#include "exdyn/harness.hpp"

namespace exdyn::cli {

// "henon" or "henon:a=1.4,b=0.3".
SystemSpec parse_system(std::string_view text);

// "<family>[:key=value,...]". Keys: alpha, a, b, c, d, theta, x0, y0, z0,
// x_M, y_M, z_M, center=generic, t (radial perturbation), sign=one_minus|negative.
// Writes the observable, generic_center and radial_t into cfg.
void apply_observable(std::string_view text, ExperimentConfig& cfg);

}  // namespace exdyn::cli
