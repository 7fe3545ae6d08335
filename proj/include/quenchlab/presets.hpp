#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quenchlab/config.hpp"

namespace quenchlab {

/// Names of the built-in presets, in listing order.
std::vector<std::string> preset_names();

/// Config text of a preset; throws LookupError listing the valid names.
const std::string& preset_text(std::string_view name);

/// Parsed and validated preset.
ExperimentConfig preset(std::string_view name);

}  // namespace quenchlab
