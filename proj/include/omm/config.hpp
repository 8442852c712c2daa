#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "omm/model.hpp"
#include "omm/sweep.hpp"

namespace omm {

// Config documents are sectioned key-value text; see docs/config-format.md.
//
//   [modes]        omega_<m>, kappa_<m> (or *_over_2pi), bias_field_m1/m2
//   [couplings]    g_ab, g_A1b, g_A2b, g_1, g_2
//   [drives]       rabi_*, eff_detuning_* | bare_detuning_*, detuning_m1/m2
//   [environment]  temperature
//   [sweep]        base, pairs, amplitudes
//   [axis1] [axis2] parameter, linked, start, stop, count, scale
//
// Every rate carries a unit (Hz .. THz, rad/s) or is relative to another rate
// ("0.4 omega_b"). `default` takes the built-in parameter value.

/// Parses a system configuration document. `base_dir` resolves no paths here
/// but is accepted for symmetry with parse_sweep.
SystemConfig parse_config(std::string_view text);

/// Parses a sweep document. A `base = <file>` entry is resolved relative to
/// `base_dir`; config sections in the sweep document override base entries.
SweepSpec parse_sweep(std::string_view text, const std::filesystem::path& base_dir = {});

/// Dispatches on the presence of a [sweep] section.
std::variant<SystemConfig, SweepSpec> parse_document(std::string_view text,
                                                     const std::filesystem::path& base_dir = {});

SystemConfig load_config_file(const std::filesystem::path& path);
SweepSpec load_sweep_file(const std::filesystem::path& path);

/// Canonical text with absolute values in rad/s and K; parses back to an equal value.
std::string serialize_config(const SystemConfig& config);
std::string serialize_sweep(const SweepSpec& spec);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace omm
