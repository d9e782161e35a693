#pragma once

#include <filesystem>
#include <string>

#include "lobsim/experiments.h"

namespace lobsim {

/// Parses an experiment description (YAML). Omitted keys keep their defaults;
/// unknown keys and out-of-range values raise ConfigError.
AbDesign parse_design(const std::string& yaml_text);
AbDesign load_design(const std::filesystem::path& path);

}  // namespace lobsim
