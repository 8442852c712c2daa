#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "omm/model.hpp"

namespace omm {

enum class Quantity { Rate, Temperature };

/// A scalar field of SystemConfig addressable by name from config files and
/// sweep axes. Rates are stored in rad/s, temperatures in kelvin.
struct ParameterInfo {
  std::string_view name;
  Quantity quantity;
  /// Set for detuning parameters that only exist in one detuning mode.
  std::optional<DetuningMode> requires_mode;
  double& (*ref)(SystemConfig&);

  double get(const SystemConfig& c) const { return ref(const_cast<SystemConfig&>(c)); }
  void set(SystemConfig& c, double v) const { ref(c) = v; }
};

std::span<const ParameterInfo> parameters();

/// nullptr when unknown.
const ParameterInfo* find_parameter(std::string_view name);

/// FNV-1a over the bit patterns of every parameter plus the detuning mode,
/// rendered as 16 hex digits.
std::string fingerprint(const SystemConfig& config);

}  // namespace omm
