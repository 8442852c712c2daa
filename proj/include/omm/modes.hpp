#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace omm {

/// The six bosonic modes, in the order their quadratures appear in the
/// fluctuation vector (X_a, Y_a, X_b, Y_b, X_A1, Y_A1, X_m1, ...).
enum class Mode : int { a = 0, b = 1, A1 = 2, m1 = 3, A2 = 4, m2 = 5 };

inline constexpr std::size_t kModeCount = 6;
inline constexpr std::size_t kQuadratureCount = 2 * kModeCount;

inline constexpr std::array<Mode, kModeCount> kAllModes{Mode::a,  Mode::b,  Mode::A1,
                                                        Mode::m1, Mode::A2, Mode::m2};

constexpr std::size_t index(Mode m) { return static_cast<std::size_t>(m); }

/// First quadrature row/column of a mode (X); Y follows at +1.
constexpr std::size_t quadrature_offset(Mode m) { return 2 * index(m); }

constexpr std::string_view mode_name(Mode m) {
  constexpr std::array<std::string_view, kModeCount> names{"a", "b", "A1", "m1", "A2", "m2"};
  return names[index(m)];
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : kAllModes)
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

struct ModePair {
  Mode first;
  Mode second;
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// Column label used in result tables, e.g. "EN_m1_m2".
inline std::string pair_label(const ModePair& p) {
  return "EN_" + std::string(mode_name(p.first)) + "_" + std::string(mode_name(p.second));
}

}  // namespace omm
