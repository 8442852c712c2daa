#include "omm/presets.hpp"

#include <algorithm>

#include "omm/config.hpp"
#include "omm/errors.hpp"

namespace omm {

std::filesystem::path default_presets_dir() { return OMM_DEFAULT_PRESETS_DIR; }

std::vector<std::string> preset_ids(const std::filesystem::path& dir) {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (p.extension() == ".cfg" && p.stem().string().starts_with("fig")) ids.push_back(p.stem().string());
  }
  if (ec) throw IoError("cannot list presets in '" + dir.string() + "': " + ec.message());
  std::sort(ids.begin(), ids.end());
  return ids;
}

SweepSpec load_preset(std::string_view id, const std::filesystem::path& dir) {
  const auto path = dir / (std::string(id) + ".cfg");
  if (!std::filesystem::exists(path)) throw ConfigError("no preset named '" + std::string(id) + "'");
  return load_sweep_file(path);
}

SweepResult reproduce_figure(std::string_view id, const std::filesystem::path& dir,
                             const RunOptions& options) {
  return run_sweep(load_preset(id, dir), options);
}

}  // namespace omm
