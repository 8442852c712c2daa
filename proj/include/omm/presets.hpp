#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "omm/sweep.hpp"

namespace omm {

/// Preset directory of the source tree this library was built from.
std::filesystem::path default_presets_dir();

/// Ids of the figure presets in `dir` (files named fig*.cfg), sorted.
std::vector<std::string> preset_ids(const std::filesystem::path& dir = default_presets_dir());

/// Parses `<dir>/<id>.cfg`. Throws ConfigError when the preset does not exist.
SweepSpec load_preset(std::string_view id, const std::filesystem::path& dir = default_presets_dir());

SweepResult reproduce_figure(std::string_view id, const std::filesystem::path& dir = default_presets_dir(),
                             const RunOptions& options = {});

}  // namespace omm
