#include "omm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "omm/errors.hpp"
#include "omm/gaussian.hpp"
#include "omm/parameters.hpp"

namespace omm {

std::string_view version() { return OMM_VERSION; }

std::string_view status_name(PointStatus s) {
  switch (s) {
    case PointStatus::Stable: return "stable";
    case PointStatus::Unstable: return "unstable";
    case PointStatus::Failed: return "failed";
  }
  return "failed";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  if (count == 0) return v;
  const double last = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / last;
    v[k] = scale == AxisScale::Linear ? start + (stop - start) * t
                                      : start * std::exp(t * std::log(stop / start));
  }
  v.front() = start;
  v.back() = stop;
  return v;
}

namespace {

void apply_axis(SystemConfig& c, const SweepAxis& axis, double value) {
  find_parameter(axis.parameter)->set(c, value);
  for (const auto& l : axis.linked) find_parameter(l)->set(c, value);
}

std::vector<std::size_t> unravel(const SweepSpec& spec, std::size_t flat) {
  std::vector<std::size_t> idx(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    idx[a] = flat % spec.axes[a].count;
    flat /= spec.axes[a].count;
  }
  return idx;
}

}  // namespace

void SweepSpec::validate() const {
  try {
    base.validate();
  } catch (const ConfigError& e) {
    throw SpecError(std::string("base configuration invalid: ") + e.what());
  }
  if (axes.empty() || axes.size() > 2) throw SpecError("a sweep needs one or two axes");
  if (pairs.empty()) throw SpecError("a sweep needs at least one mode pair");
  for (const auto& p : pairs)
    if (p.first == p.second) throw SpecError("mode pair must name two different modes");

  std::set<std::string> seen;
  for (const auto& axis : axes) {
    std::vector<std::string> names{axis.parameter};
    names.insert(names.end(), axis.linked.begin(), axis.linked.end());
    for (const auto& n : names) {
      const auto* info = find_parameter(n);
      if (!info) throw SpecError("unknown sweep parameter '" + n + "'");
      if (info->requires_mode && *info->requires_mode != base.detuning_mode)
        throw SpecError("parameter '" + n + "' does not match the base config's detuning mode");
      if (!seen.insert(n).second) throw SpecError("parameter '" + n + "' swept twice");
    }
    if (axis.count < 2) throw SpecError("axis '" + axis.parameter + "' needs count >= 2");
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop) || axis.start == axis.stop)
      throw SpecError("axis '" + axis.parameter + "' needs distinct finite endpoints");
    if (axis.scale == AxisScale::Log && !(axis.start > 0.0 && axis.stop > 0.0))
      throw SpecError("log axis '" + axis.parameter + "' needs positive endpoints");
    for (double v : {axis.start, axis.stop}) {
      SystemConfig c = base;
      apply_axis(c, axis, v);
      try {
        c.validate();
      } catch (const ConfigError& e) {
        throw SpecError("axis '" + axis.parameter + "' leaves the valid range: " + e.what());
      }
    }
  }
}

std::size_t SweepSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

SystemConfig SweepSpec::config_at(std::size_t flat_index) const {
  SystemConfig c = base;
  const auto idx = unravel(*this, flat_index);
  for (std::size_t a = 0; a < axes.size(); ++a) apply_axis(c, axes[a], axes[a].values()[idx[a]]);
  return c;
}

std::vector<double> SweepSpec::coordinates_at(std::size_t flat_index) const {
  const auto idx = unravel(*this, flat_index);
  std::vector<double> out(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) out[a] = axes[a].values()[idx[a]];
  return out;
}

PointResult run_point(const SystemConfig& config, std::span<const ModePair> pairs,
                      std::span<const Mode> amplitudes, bool stability_only) {
  PointResult r;
  try {
    config.validate();
    const SteadyState ss = solve_steady_state(config);
    for (Mode m : amplitudes) r.amplitudes.push_back(std::abs(ss[m]));

    const Matrix12d A = build_drift(config, ss);
    if (!is_stable(A)) {
      r.status = PointStatus::Unstable;
      return r;
    }
    if (!stability_only) {
      const Matrix12d D = build_diffusion(config);
      const MatrixXd V = solve_lyapunov(A, D);
      r.lyapunov_residual = lyapunov_residual(A, V, D);
      r.min_symplectic = symplectic_eigenvalues(V).minCoeff();
      r.e_n.reserve(pairs.size());
      for (const auto& p : pairs) r.e_n.push_back(log_negativity(bipartite_cm(V, p.first, p.second)).e_n);
    }
    r.status = PointStatus::Stable;
  } catch (const NumericalError& e) {
    r = PointResult{};
    r.error = e.what();
  } catch (const ConfigError& e) {
    r = PointResult{};
    r.error = e.what();
  }
  return r;
}

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();

  SweepResult result;
  result.spec = spec;
  for (const auto& a : spec.axes) result.shape.push_back(a.count);
  result.default_fingerprint = fingerprint(default_config());
  result.base_fingerprint = fingerprint(spec.base);
  result.version = std::string(version());

  const std::size_t n = spec.size();
  result.points.resize(n);

  std::vector<std::vector<double>> axis_values;
  for (const auto& a : spec.axes) axis_values.push_back(a.values());

  auto evaluate = [&](std::size_t i) {
    SystemConfig c = spec.base;
    const auto idx = unravel(spec, i);
    std::vector<double> coords(spec.axes.size());
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      coords[a] = axis_values[a][idx[a]];
      apply_axis(c, spec.axes[a], coords[a]);
    }
    PointResult r = run_point(c, spec.pairs, spec.amplitudes, options.stability_only);
    r.coordinates = std::move(coords);
    result.points[i] = std::move(r);
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) evaluate(i);
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) evaluate(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

double unstable_strip_width(const SweepResult& result, std::size_t axis, double fixed_coordinate,
                            double lo, double hi) {
  if (result.shape.size() != 2) throw std::invalid_argument("strip width needs a 2-D sweep");
  if (axis > 1) throw std::invalid_argument("axis index must be 0 or 1");
  const std::size_t other = 1 - axis;

  const auto other_values = result.spec.axes[other].values();
  std::size_t fixed = 0;
  for (std::size_t k = 1; k < other_values.size(); ++k)
    if (std::abs(other_values[k] - fixed_coordinate) < std::abs(other_values[fixed] - fixed_coordinate))
      fixed = k;

  const auto& ax = result.spec.axes[axis];
  const auto x = ax.values();
  const std::size_t n = x.size();
  // Linear cells are all |stop - start| / (n - 1); log cells use the local spacing.
  auto cell = [&](std::size_t k) {
    if (ax.scale == AxisScale::Linear) return std::abs(ax.stop - ax.start) / static_cast<double>(n - 1);
    const std::size_t l = k > 0 ? k - 1 : k;
    const std::size_t r = k + 1 < n ? k + 1 : k;
    return std::abs(x[r] - x[l]) / static_cast<double>(r - l);
  };

  double best = 0.0;
  std::size_t run_start = 0;
  std::size_t run_len = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const PointResult& p = axis == 0 ? result.at(k, fixed) : result.at(fixed, k);
    if (x[k] >= lo && x[k] <= hi && p.status == PointStatus::Unstable) {
      if (run_len++ == 0) run_start = k;
      double width = 0.0;
      if (ax.scale == AxisScale::Linear) {
        width = static_cast<double>(run_len) * cell(k);
      } else {
        for (std::size_t j = run_start; j <= k; ++j) width += cell(j);
      }
      best = std::max(best, width);
    } else {
      run_len = 0;
    }
  }
  return best;
}

}  // namespace omm
