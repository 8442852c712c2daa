#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "omm/modes.hpp"
#include "omm/sweep.hpp"

namespace omm {

/// Column index of `pair` in the result's spec, or nullopt.
std::optional<std::size_t> pair_column(const SweepSpec& spec, ModePair pair);

/// E_N of `pair` at every point, NaN where the point is not stable.
std::vector<double> entanglement_series(const SweepResult& result, ModePair pair);

/// Index of the largest finite value; nullopt if none is finite.
std::optional<std::size_t> argmax(std::span<const double> values);

/// Interior indices k with finite neighbours and v[k-1] < v[k] >= v[k+1].
/// Plateaus report their first index once.
std::vector<std::size_t> local_maxima(std::span<const double> values);

/// First index at or after `from` where the value is exactly zero, having been
/// positive before it.
std::optional<std::size_t> first_vanishing(std::span<const double> values, std::size_t from = 0);

}  // namespace omm
