#pragma once

#include <array>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "omm/modes.hpp"

namespace omm {

using Matrix12d = Eigen::Matrix<double, 12, 12>;
using cplx = std::complex<double>;

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K
/// Electron gyromagnetic ratio used for YIG, gamma/2pi = 28 GHz/T, as rad/(s T).
inline constexpr double gyromagnetic_ratio = two_pi * 28e9;
}  // namespace constants

/// Eigenfrequency and amplitude decay rate of one mode, both in rad/s.
struct ModeParams {
  double frequency = 0.0;
  double decay = 0.0;
  friend bool operator==(const ModeParams&, const ModeParams&) = default;
};

/// Whether the stored cavity detunings are the effective ones (shifted by the
/// static mechanical displacement) or the bare drive detunings.
enum class DetuningMode { Effective, Bare };

struct OpticalDrive {
  double rabi = 0.0;      ///< Omega_0, rad/s
  double detuning = 0.0;  ///< effective or bare optical detuning, rad/s
  friend bool operator==(const OpticalDrive&, const OpticalDrive&) = default;
};

/// Microwave drive i acts on magnon m_i; its frequency fixes both the cavity
/// detuning of A_i and the magnon detuning of m_i, carried independently.
struct MicrowaveDrive {
  double rabi = 0.0;              ///< Omega_i, rad/s
  double cavity_detuning = 0.0;   ///< effective or bare detuning of A_i, rad/s
  double magnon_detuning = 0.0;   ///< Delta_{m_i}; magnons do not couple to b, never shifted
  friend bool operator==(const MicrowaveDrive&, const MicrowaveDrive&) = default;
};

/// All couplings are angular rates (rad/s).
struct CouplingParams {
  double optomechanical = 0.0;                  ///< g_ab
  std::array<double, 2> cavity_mechanical{};   ///< g_{A1 b}, g_{A2 b}
  std::array<double, 2> magnon_cavity{};       ///< g_1, g_2
  friend bool operator==(const CouplingParams&, const CouplingParams&) = default;
};

struct SystemConfig {
  std::array<ModeParams, kModeCount> modes{};
  DetuningMode detuning_mode = DetuningMode::Effective;
  OpticalDrive optical{};
  std::array<MicrowaveDrive, 2> microwave{};
  CouplingParams couplings{};
  double temperature = 0.0;  ///< kelvin

  ModeParams& mode(Mode m) { return modes[index(m)]; }
  const ModeParams& mode(Mode m) const { return modes[index(m)]; }

  /// Throws ConfigError when a physical invariant is violated.
  void validate() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Cavity-mechanics coupling g_{A_i b} (rad/s) frozen by `ommsim calibrate-gab`.
/// Not given by the source parameter list; see docs/calibration.md.
inline constexpr double kCalibratedCavityMechanicalCoupling = 0.133;

/// The experimentally motivated parameter set: optical drive on the red
/// sideband, every other detuning zero, T = 10 mK.
SystemConfig default_config();

/// Semiclassical mean fields and the detunings they imply.
struct SteadyState {
  std::array<cplx, kModeCount> amplitude{};
  double effective_detuning_a = 0.0;
  std::array<double, 2> effective_detuning_A{};
  double bare_detuning_a = 0.0;
  std::array<double, 2> bare_detuning_A{};
  int iterations = 0;  ///< fixed-point iterations used (0 in Effective mode)

  cplx operator[](Mode m) const { return amplitude[index(m)]; }
};

struct SteadyStateOptions {
  double damping = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Linearization couplings G^R = g Re<X>, G^I = g Im<X> for X in {a, A1, A2}.
struct EffectiveCouplings {
  double GR_ab = 0.0;
  double GI_ab = 0.0;
  std::array<double, 2> GR_Ab{};
  std::array<double, 2> GI_Ab{};
};

struct LinearizedSystem {
  Matrix12d drift;
  Matrix12d diffusion;
};

/// Thermal occupation [exp(hbar omega / k_B T) - 1]^-1. Zero at T = 0.
double bose_einstein(double omega, double temperature);

/// omega_m = gamma B.
double magnon_frequency_from_field(double field_tesla);
double field_for_magnon_frequency(double omega);

/// g_0 = omega_cav x_zpf / L.
double vacuum_optomech_coupling(double omega_cav, double x_zpf, double length);

/// Closed form in Effective mode; damped Picard fixed point in Bare mode.
SteadyState solve_steady_state(const SystemConfig& config, const SteadyStateOptions& options = {});

/// Largest relative violation of the six mean-field equations and of the
/// detuning-shift relation by `ss`.
double steady_state_residual(const SystemConfig& config, const SteadyState& ss);

/// Copy of an Effective-mode config with the bare detunings implied by `ss`.
SystemConfig with_bare_detunings(const SystemConfig& config, const SteadyState& ss);

EffectiveCouplings effective_couplings(const SystemConfig& config, const SteadyState& ss);

Matrix12d build_drift(const SystemConfig& config, const SteadyState& ss);
Matrix12d build_diffusion(const SystemConfig& config);

inline LinearizedSystem linearize(const SystemConfig& config, const SteadyState& ss) {
  return {build_drift(config, ss), build_diffusion(config)};
}

/// Hybridized cavity-magnon eigenfrequencies (omega + g, omega - g) of a
/// resonant pair.
std::pair<double, double> supermode_frequencies(double omega, double g);

}  // namespace omm
