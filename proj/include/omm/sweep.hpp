#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omm/model.hpp"
#include "omm/modes.hpp"

namespace omm {

std::string_view version();

enum class AxisScale { Linear, Log };

/// One grid axis. `linked` parameters are set to the same value as
/// `parameter` at every point (e.g. Delta_A1 = Delta_A2 = Delta_m1 = Delta_m2).
struct SweepAxis {
  std::string parameter;
  std::vector<std::string> linked;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 2;
  AxisScale scale = AxisScale::Linear;

  std::vector<double> values() const;
  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepSpec {
  SystemConfig base;
  std::vector<SweepAxis> axes;
  std::vector<ModePair> pairs;
  std::vector<Mode> amplitudes;  ///< optional |<O>| columns

  /// Throws SpecError for unknown or duplicated parameters, degenerate axes,
  /// or axis endpoints that produce an invalid config.
  void validate() const;
  std::size_t size() const;
  /// Base config with the grid point `flat_index` (row-major, axis 0 slowest) applied.
  SystemConfig config_at(std::size_t flat_index) const;
  std::vector<double> coordinates_at(std::size_t flat_index) const;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

enum class PointStatus { Stable, Unstable, Failed };

std::string_view status_name(PointStatus s);

struct PointResult {
  std::vector<double> coordinates;
  PointStatus status = PointStatus::Failed;
  std::vector<double> e_n;         ///< one per requested pair; empty unless Stable
  std::vector<double> amplitudes;  ///< |<O>| per requested mode; empty when Failed
  double lyapunov_residual = std::numeric_limits<double>::quiet_NaN();
  double min_symplectic = std::numeric_limits<double>::quiet_NaN();
  std::string error;

  bool stable() const { return status == PointStatus::Stable; }
};

/// Full pipeline at one configuration: steady state, drift and diffusion,
/// stability, Lyapunov covariance, E_N per pair. Numerical failures are
/// recorded in the result instead of thrown.
PointResult run_point(const SystemConfig& config, std::span<const ModePair> pairs,
                      std::span<const Mode> amplitudes = {}, bool stability_only = false);

struct RunOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
  bool stability_only = false;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::size_t> shape;
  std::vector<PointResult> points;  ///< row-major
  std::string default_fingerprint;
  std::string base_fingerprint;
  std::string version;

  const PointResult& at(std::size_t i, std::size_t j = 0) const {
    return points[shape.size() == 2 ? i * shape[1] + j : i];
  }
};

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

/// Width, in parameter units, of the longest contiguous run of unstable cells
/// along `axis` on the grid line whose other coordinate is closest to
/// `fixed_coordinate`. Only cells with axis coordinate in [lo, hi] count.
/// Returns 0 when no cell is unstable. Throws std::invalid_argument for 1-D results.
double unstable_strip_width(const SweepResult& result, std::size_t axis, double fixed_coordinate,
                            double lo = -std::numeric_limits<double>::infinity(),
                            double hi = std::numeric_limits<double>::infinity());

}  // namespace omm
