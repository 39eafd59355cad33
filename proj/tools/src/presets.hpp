#pragma once

#include "config.hpp"

#include <optional>
#include <string>

namespace molspin::cli {

// Built-in configuration for a preset subcommand, with "experiment" set.
std::optional<json> preset_default(const std::string& experiment);

}  // namespace molspin::cli
