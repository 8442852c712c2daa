#include "omm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace omm {

std::optional<std::size_t> pair_column(const SweepSpec& spec, ModePair pair) {
  for (std::size_t k = 0; k < spec.pairs.size(); ++k)
    if (spec.pairs[k] == pair || (spec.pairs[k].first == pair.second && spec.pairs[k].second == pair.first))
      return k;
  return std::nullopt;
}

std::vector<double> entanglement_series(const SweepResult& result, ModePair pair) {
  const auto col = pair_column(result.spec, pair);
  if (!col) throw std::invalid_argument("pair " + pair_label(pair) + " was not computed");
  std::vector<double> out(result.points.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& p = result.points[i];
    if (p.stable() && *col < p.e_n.size()) out[i] = p.e_n[*col];
  }
  return out;
}

std::optional<std::size_t> argmax(std::span<const double> values) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (std::isfinite(values[k]) && (!best || values[k] > values[*best])) best = k;
  return best;
}

std::vector<std::size_t> local_maxima(std::span<const double> v) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!std::isfinite(v[k]) || !std::isfinite(v[k - 1])) continue;
    if (!(v[k - 1] < v[k])) continue;
    // walk across a flat top
    std::size_t j = k;
    while (j + 1 < n && v[j + 1] == v[k]) ++j;
    if (j + 1 < n && std::isfinite(v[j + 1]) && v[j + 1] < v[k]) out.push_back(k);
  }
  return out;
}

std::optional<std::size_t> first_vanishing(std::span<const double> v, std::size_t from) {
  bool positive = false;
  for (std::size_t k = from; k < v.size(); ++k) {
    if (v[k] > 0.0) positive = true;
    else if (v[k] == 0.0 && positive) return k;
  }
  return std::nullopt;
}

}  // namespace omm
