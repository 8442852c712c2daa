#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "omm/sweep.hpp"

namespace omm {

// Figure-level features read off preset sweeps. The pairs are fixed:
// E_N(m1, m2) everywhere except the Rabi-split curve, which uses E_N(A1, m1).

/// eff_detuning_a maximizing E_N(m1, m2), in units of omega_b.
std::optional<double> sideband_optimum(const SweepResult& detuning_sweep);

/// For each row of a (g_ab, temperature) sweep, the first temperature in K at
/// which E_N(m1, m2) reaches zero.
std::vector<std::optional<double>> thermal_cutoffs(const SweepResult& temperature_sweep);

/// detuning_m1 of every local maximum of E_N(A1, m1), in units of g_1.
std::vector<double> rabi_peaks(const SweepResult& magnon_detuning_sweep);

/// g_1 / 2pi in Hz maximizing E_N(m1, m2).
std::optional<double> coupling_optimum(const SweepResult& coupling_sweep);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FigureFeatures {
  double sideband_optimum = kNaN;  ///< omega_b
  double thermal_cutoff = kNaN;    ///< K, at g_ab = 1.2 kappa_b
  double rabi_peak = kNaN;         ///< mean |peak| in g_1; NaN unless exactly two peaks
  double coupling_optimum = kNaN;  ///< Hz
  double sideband_entanglement = kNaN;  ///< E_N(m1, m2) at eff_detuning_a = omega_b
};

/// Evaluates the four features with g_A1b = g_A2b = `coupling` on the
/// presets fig4, fig3 (g_ab = 1.2 kappa_b row only), fig7c and fig9b.
FigureFeatures evaluate_features(double coupling, const std::filesystem::path& presets_dir,
                                 const RunOptions& options = {});

/// A target with an acceptance window; deviation is 0 at the target and 1 at the window edge.
struct CalibrationAnchor {
  std::string_view name;
  double FigureFeatures::*feature;
  double target;
  double lo;
  double hi;

  double deviation(const FigureFeatures& f) const;
};

std::span<const CalibrationAnchor> calibration_anchors();

struct CalibrationOptions {
  double min = 0.01;  ///< rad/s
  double max = 1.0;
  std::size_t count = 401;  ///< log-spaced candidates
  RunOptions run;
};

struct CalibrationPoint {
  double coupling = 0.0;
  FigureFeatures features;
  double worst_deviation = 0.0;
};

struct CalibrationResult {
  std::vector<CalibrationPoint> scan;
  std::size_t best = 0;

  double value() const { return scan.at(best).coupling; }
};

/// Log scan of g_A1b = g_A2b minimizing the largest anchor deviation.
CalibrationResult calibrate_cavity_mechanical_coupling(const std::filesystem::path& presets_dir,
                                                       const CalibrationOptions& options = {});

/// Rounds to three significant digits, the precision the shipped default keeps.
double freeze_value(double x);

}  // namespace omm
