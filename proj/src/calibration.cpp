#include "omm/calibration.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "omm/analysis.hpp"
#include "omm/presets.hpp"

namespace omm {
namespace {

constexpr ModePair kMagnons{Mode::m1, Mode::m2};
constexpr ModePair kLocal{Mode::A1, Mode::m1};

std::size_t axis_index(const SweepSpec& spec, std::string_view parameter) {
  for (std::size_t a = 0; a < spec.axes.size(); ++a)
    if (spec.axes[a].parameter == parameter) return a;
  throw std::invalid_argument("sweep has no '" + std::string(parameter) + "' axis");
}

std::optional<double> argmax_coordinate(const SweepResult& r, ModePair pair) {
  if (r.spec.axes.size() != 1) throw std::invalid_argument("expected a 1-D sweep");
  const auto series = entanglement_series(r, pair);
  const auto k = argmax(series);
  if (!k) return std::nullopt;
  return r.points[*k].coordinates[0];
}

void set_cavity_mechanical(SystemConfig& c, double g) {
  c.couplings.cavity_mechanical[0] = g;
  c.couplings.cavity_mechanical[1] = g;
}

}  // namespace

std::optional<double> sideband_optimum(const SweepResult& r) {
  axis_index(r.spec, "eff_detuning_a");
  const auto x = argmax_coordinate(r, kMagnons);
  if (!x) return std::nullopt;
  return *x / r.spec.base.mode(Mode::b).frequency;
}

std::vector<std::optional<double>> thermal_cutoffs(const SweepResult& r) {
  const std::size_t t_axis = axis_index(r.spec, "temperature");
  const auto series = entanglement_series(r, kMagnons);
  const auto temps = r.spec.axes[t_axis].values();
  std::vector<std::optional<double>> out;
  if (r.spec.axes.size() == 1) {
    if (const auto k = first_vanishing(series)) out.emplace_back(temps[*k]);
    else out.emplace_back();
    return out;
  }
  if (t_axis != 1) throw std::invalid_argument("temperature must be the fast axis");
  const std::size_t rows = r.shape[0], cols = r.shape[1];
  for (std::size_t i = 0; i < rows; ++i) {
    const std::span<const double> line(series.data() + i * cols, cols);
    if (const auto k = first_vanishing(line)) out.emplace_back(temps[*k]);
    else out.emplace_back();
  }
  return out;
}

std::vector<double> rabi_peaks(const SweepResult& r) {
  axis_index(r.spec, "detuning_m1");
  if (r.spec.axes.size() != 1) throw std::invalid_argument("expected a 1-D sweep");
  const auto series = entanglement_series(r, kLocal);
  const double g1 = r.spec.base.couplings.magnon_cavity[0];
  std::vector<double> out;
  for (std::size_t k : local_maxima(series)) out.push_back(r.points[k].coordinates[0] / g1);
  return out;
}

std::optional<double> coupling_optimum(const SweepResult& r) {
  axis_index(r.spec, "g_1");
  const auto x = argmax_coordinate(r, kMagnons);
  if (!x) return std::nullopt;
  return *x / constants::two_pi;
}

FigureFeatures evaluate_features(double coupling, const std::filesystem::path& dir,
                                 const RunOptions& options) {
  FigureFeatures f;

  SweepSpec fig4 = load_preset("fig4", dir);
  set_cavity_mechanical(fig4.base, coupling);
  const SweepResult r4 = run_sweep(fig4, options);
  if (const auto v = sideband_optimum(r4)) f.sideband_optimum = *v;
  {
    SystemConfig c = fig4.base;
    c.optical.detuning = c.mode(Mode::b).frequency;
    const auto p = run_point(c, std::array{kMagnons});
    if (p.stable()) f.sideband_entanglement = p.e_n[0];
  }

  // Only the g_ab = 1.2 kappa_b row of the temperature figure is an anchor.
  SweepSpec fig3 = load_preset("fig3", dir);
  const std::size_t g_axis = axis_index(fig3, "g_ab");
  fig3.base.couplings.optomechanical = 1.2 * fig3.base.mode(Mode::b).decay;
  fig3.axes.erase(fig3.axes.begin() + static_cast<std::ptrdiff_t>(g_axis));
  set_cavity_mechanical(fig3.base, coupling);
  const auto cut = thermal_cutoffs(run_sweep(fig3, options));
  if (!cut.empty() && cut[0]) f.thermal_cutoff = *cut[0];

  SweepSpec fig7c = load_preset("fig7c", dir);
  set_cavity_mechanical(fig7c.base, coupling);
  const auto peaks = rabi_peaks(run_sweep(fig7c, options));
  if (peaks.size() == 2) f.rabi_peak = 0.5 * (std::abs(peaks[0]) + std::abs(peaks[1]));

  SweepSpec fig9b = load_preset("fig9b", dir);
  set_cavity_mechanical(fig9b.base, coupling);
  if (const auto v = coupling_optimum(run_sweep(fig9b, options))) f.coupling_optimum = *v;
  return f;
}

double CalibrationAnchor::deviation(const FigureFeatures& f) const {
  const double v = f.*feature;
  if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return v >= target ? (v - target) / (hi - target) : (target - v) / (target - lo);
}

std::span<const CalibrationAnchor> calibration_anchors() {
  static const std::array<CalibrationAnchor, 4> anchors{{
      {"red-sideband optimum [omega_b]", &FigureFeatures::sideband_optimum, 1.0, 0.9, 1.1},
      {"thermal cutoff at g_ab = 1.2 kappa_b [K]", &FigureFeatures::thermal_cutoff, 0.120, 0.090, 0.150},
      {"Rabi-split peak [g_1]", &FigureFeatures::rabi_peak, 1.24, 1.09, 1.39},
      {"coupling optimum g_1/2pi [Hz]", &FigureFeatures::coupling_optimum, 1.7e6, 1.0e6, 3.0e6},
  }};
  return anchors;
}

CalibrationResult calibrate_cavity_mechanical_coupling(const std::filesystem::path& dir,
                                                       const CalibrationOptions& options) {
  if (!(options.min > 0.0 && options.max > options.min) || options.count < 2)
    throw std::invalid_argument("calibration scan needs 0 < min < max and count >= 2");
  SweepAxis grid{"g_A1b", {}, options.min, options.max, options.count, AxisScale::Log};
  CalibrationResult result;
  double best = std::numeric_limits<double>::infinity();
  for (double g : grid.values()) {
    CalibrationPoint p;
    p.coupling = g;
    p.features = evaluate_features(g, dir, options.run);
    for (const auto& a : calibration_anchors()) p.worst_deviation = std::max(p.worst_deviation, a.deviation(p.features));
    if (p.worst_deviation < best) {
      best = p.worst_deviation;
      result.best = result.scan.size();
    }
    result.scan.push_back(p);
  }
  return result;
}

double freeze_value(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(x))) - 2.0);
  return std::round(x / scale) * scale;
}

}  // namespace omm
