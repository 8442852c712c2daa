#include "omm/parameters.hpp"

#include <array>
#include <bit>
#include <cstdio>

namespace omm {
namespace {


#define OMM_MODE_PARAM(NAME, MODE, FIELD) \
  ParameterInfo{NAME, Quantity::Rate, std::nullopt, [](SystemConfig& c) -> double& { return c.mode(Mode::MODE).FIELD; }}

const std::array kParameters{
    OMM_MODE_PARAM("omega_a", a, frequency),
    OMM_MODE_PARAM("omega_b", b, frequency),
    OMM_MODE_PARAM("omega_A1", A1, frequency),
    OMM_MODE_PARAM("omega_m1", m1, frequency),
    OMM_MODE_PARAM("omega_A2", A2, frequency),
    OMM_MODE_PARAM("omega_m2", m2, frequency),
    OMM_MODE_PARAM("kappa_a", a, decay),
    OMM_MODE_PARAM("kappa_b", b, decay),
    OMM_MODE_PARAM("kappa_A1", A1, decay),
    OMM_MODE_PARAM("kappa_m1", m1, decay),
    OMM_MODE_PARAM("kappa_A2", A2, decay),
    OMM_MODE_PARAM("kappa_m2", m2, decay),
    ParameterInfo{"g_ab", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.couplings.optomechanical; }},
    ParameterInfo{"g_A1b", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.couplings.cavity_mechanical[0]; }},
    ParameterInfo{"g_A2b", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.couplings.cavity_mechanical[1]; }},
    ParameterInfo{"g_1", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.couplings.magnon_cavity[0]; }},
    ParameterInfo{"g_2", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.couplings.magnon_cavity[1]; }},
    ParameterInfo{"rabi_a", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.optical.rabi; }},
    ParameterInfo{"rabi_m1", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.microwave[0].rabi; }},
    ParameterInfo{"rabi_m2", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.microwave[1].rabi; }},
    ParameterInfo{"eff_detuning_a", Quantity::Rate, DetuningMode::Effective,
                  [](SystemConfig& c) -> double& { return c.optical.detuning; }},
    ParameterInfo{"eff_detuning_A1", Quantity::Rate, DetuningMode::Effective,
                  [](SystemConfig& c) -> double& { return c.microwave[0].cavity_detuning; }},
    ParameterInfo{"eff_detuning_A2", Quantity::Rate, DetuningMode::Effective,
                  [](SystemConfig& c) -> double& { return c.microwave[1].cavity_detuning; }},
    ParameterInfo{"bare_detuning_a", Quantity::Rate, DetuningMode::Bare,
                  [](SystemConfig& c) -> double& { return c.optical.detuning; }},
    ParameterInfo{"bare_detuning_A1", Quantity::Rate, DetuningMode::Bare,
                  [](SystemConfig& c) -> double& { return c.microwave[0].cavity_detuning; }},
    ParameterInfo{"bare_detuning_A2", Quantity::Rate, DetuningMode::Bare,
                  [](SystemConfig& c) -> double& { return c.microwave[1].cavity_detuning; }},
    ParameterInfo{"detuning_m1", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.microwave[0].magnon_detuning; }},
    ParameterInfo{"detuning_m2", Quantity::Rate, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.microwave[1].magnon_detuning; }},
    ParameterInfo{"temperature", Quantity::Temperature, std::nullopt,
                  [](SystemConfig& c) -> double& { return c.temperature; }},
};

#undef OMM_MODE_PARAM

}  // namespace

std::span<const ParameterInfo> parameters() { return kParameters; }

const ParameterInfo* find_parameter(std::string_view name) {
  for (const auto& p : kParameters)
    if (p.name == name) return &p;
  return nullptr;
}

std::string fingerprint(const SystemConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(config.detuning_mode == DetuningMode::Effective ? 0 : 1);
  for (const auto& p : kParameters) {
    if (p.requires_mode && *p.requires_mode != config.detuning_mode) continue;
    mix(std::bit_cast<std::uint64_t>(p.get(config)));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace omm
