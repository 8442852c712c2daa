#include <cmath>
#include <cstring>

#include "doctest.h"

#include "omm/errors.hpp"
#include "omm/sweep.hpp"

using namespace omm;

namespace {

const double wb = default_config().mode(Mode::b).frequency;

SweepSpec detuning_grid(std::size_t n) {
  SweepSpec s;
  s.base = default_config();
  s.axes = {{"eff_detuning_a", {}, -2 * wb, 2 * wb, n},
            {"eff_detuning_A1", {"eff_detuning_A2", "detuning_m1", "detuning_m2"}, -2 * wb, 2 * wb, n}};
  s.pairs = {{Mode::m1, Mode::m2}, {Mode::a, Mode::b}};
  s.amplitudes = {Mode::A1};
  return s;
}

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

bool identical(const SweepResult& a, const SweepResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (p.status != q.status || p.e_n.size() != q.e_n.size() || p.error != q.error) return false;
    for (std::size_t k = 0; k < p.e_n.size(); ++k)
      if (!same_bits(p.e_n[k], q.e_n[k])) return false;
    for (std::size_t k = 0; k < p.amplitudes.size(); ++k)
      if (!same_bits(p.amplitudes[k], q.amplitudes[k])) return false;
    if (!same_bits(p.lyapunov_residual, q.lyapunov_residual) || !same_bits(p.min_symplectic, q.min_symplectic))
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("axis values") {
  SweepAxis lin{"g_ab", {}, 1.0, 2.0, 5};
  CHECK(lin.values() == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  SweepAxis lg{"g_ab", {}, 1.0, 100.0, 3, AxisScale::Log};
  const auto v = lg.values();
  CHECK(v[0] == 1.0);
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v[2] == 100.0);
}

TEST_CASE("grid points are row-major with the first axis slowest") {
  const SweepSpec s = detuning_grid(2);
  const auto r = run_sweep(s, {.threads = 1});
  REQUIRE(r.points.size() == 4);
  CHECK(r.shape == std::vector<std::size_t>{2, 2});
  CHECK(r.points[0].coordinates == std::vector<double>{-2 * wb, -2 * wb});
  CHECK(r.points[1].coordinates == std::vector<double>{-2 * wb, 2 * wb});
  CHECK(r.points[2].coordinates == std::vector<double>{2 * wb, -2 * wb});
  CHECK(&r.at(1, 0) == &r.points[2]);
  const SystemConfig c = s.config_at(1);
  CHECK(c.microwave[1].cavity_detuning == 2 * wb);
  CHECK(c.microwave[0].magnon_detuning == 2 * wb);
  CHECK(c.optical.detuning == -2 * wb);
}

TEST_CASE("results do not depend on thread count or repetition") {
  const SweepSpec s = detuning_grid(12);
  const auto serial = run_sweep(s, {.threads = 1});
  const auto threaded = run_sweep(s, {.threads = 4});
  const auto again = run_sweep(s, {.threads = 3});
  CHECK(identical(serial, threaded));
  CHECK(identical(threaded, again));
}

TEST_CASE("unstable points never carry entanglement values") {
  const auto r = run_sweep(detuning_grid(15), {.threads = 2});
  std::size_t unstable = 0;
  for (const auto& p : r.points) {
    if (p.status == PointStatus::Unstable) {
      ++unstable;
      CHECK(p.e_n.empty());
      CHECK(std::isnan(p.lyapunov_residual));
    }
    if (p.stable()) CHECK(p.e_n.size() == 2);
  }
  CHECK(unstable > 0);
}

TEST_CASE("point pipeline") {
  const std::vector<ModePair> pairs{{Mode::m1, Mode::m2}};

  SUBCASE("no drives: stable and unentangled") {
    SystemConfig c = default_config();
    c.optical.rabi = 0.0;
    c.microwave[0].rabi = c.microwave[1].rabi = 0.0;
    const std::vector<ModePair> all{{Mode::a, Mode::b}, {Mode::A1, Mode::A2}, {Mode::m1, Mode::m2}, {Mode::A1, Mode::m1}};
    const auto p = run_point(c, all);
    REQUIRE(p.stable());
    for (double e : p.e_n) CHECK(e == 0.0);
  }
  SUBCASE("default operating point: stable and entangled") {
    const auto p = run_point(default_config(), pairs);
    REQUIRE(p.stable());
    CHECK(p.e_n[0] > 0.0);
    CHECK(p.lyapunov_residual <= 1e-10);
    CHECK(p.min_symplectic >= 0.5 - 1e-9);
  }
  SUBCASE("inside the red-detuned strip at strong optomechanical coupling") {
    SystemConfig c = default_config();
    c.couplings.optomechanical = 1.4 * c.mode(Mode::b).decay;
    c.optical.detuning = 0.3 * wb;
    const auto p = run_point(c, pairs);
    CHECK(p.status == PointStatus::Unstable);
  }
  SUBCASE("an invalid point is failed, not unstable") {
    SystemConfig c = default_config();
    c.temperature = -1.0;
    const auto p = run_point(c, pairs);
    CHECK(p.status == PointStatus::Failed);
    CHECK(!p.error.empty());
    CHECK(p.e_n.empty());
  }
  SUBCASE("stability only skips the covariance") {
    const auto p = run_point(default_config(), pairs, {}, true);
    CHECK(p.stable());
    CHECK(p.e_n.empty());
  }
}

TEST_CASE("sweeping subsystem 1 mirrors sweeping subsystem 2") {
  SweepSpec s1;
  s1.base = default_config();
  s1.axes = {{"detuning_m1", {}, -2 * wb, 2 * wb, 21}};
  s1.pairs = {{Mode::A1, Mode::m1}, {Mode::m1, Mode::m2}, {Mode::A1, Mode::b}};
  SweepSpec s2 = s1;
  s2.axes[0].parameter = "detuning_m2";
  s2.pairs = {{Mode::A2, Mode::m2}, {Mode::m2, Mode::m1}, {Mode::A2, Mode::b}};
  const auto r1 = run_sweep(s1, {.threads = 1});
  const auto r2 = run_sweep(s2, {.threads = 1});
  for (std::size_t i = 0; i < r1.points.size(); ++i) {
    REQUIRE(r1.points[i].status == r2.points[i].status);
    for (std::size_t k = 0; k < r1.points[i].e_n.size(); ++k)
      CHECK(std::abs(r1.points[i].e_n[k] - r2.points[i].e_n[k]) <= 1e-10);
  }
}

TEST_CASE("malformed sweeps are rejected before evaluation") {
  SweepSpec s = detuning_grid(3);
  auto rejects = [](SweepSpec t) { CHECK_THROWS_AS(t.validate(), SpecError); };
  { auto t = s; t.axes[0].parameter = "omega_z"; rejects(t); }
  { auto t = s; t.axes[1].linked.push_back("eff_detuning_a"); rejects(t); }
  { auto t = s; t.axes[0].count = 1; rejects(t); }
  { auto t = s; t.axes[0].stop = t.axes[0].start; rejects(t); }
  { auto t = s; t.axes[0].scale = AxisScale::Log; rejects(t); }
  { auto t = s; t.pairs.clear(); rejects(t); }
  { auto t = s; t.axes[0].parameter = "bare_detuning_a"; rejects(t); }
  { auto t = s; t.axes.push_back(t.axes[0]); rejects(t); }
  { auto t = s; t.axes[0] = {"kappa_A1", {}, -1.0, 1.0, 3}; rejects(t); }
  CHECK_THROWS_AS(run_sweep([&] { auto t = s; t.axes.clear(); return t; }()), SpecError);
}

TEST_CASE("unstable strip width") {
  SUBCASE("stable grid has no strip") {
    SweepSpec s = detuning_grid(4);
    s.axes[0].start = 0.9 * wb;
    s.axes[0].stop = 1.1 * wb;
    s.axes[1].start = -0.05 * wb;
    s.axes[1].stop = 0.05 * wb;
    const auto r = run_sweep(s, {.threads = 1});
    for (const auto& p : r.points) REQUIRE(p.stable());
    CHECK(unstable_strip_width(r, 0, 0.0) == 0.0);
  }
  SUBCASE("counts the longest unstable run times the cell size") {
    SweepResult r;
    r.spec = detuning_grid(5);
    r.spec.axes[0] = {"eff_detuning_a", {}, 0.0, 4.0, 5};
    r.spec.axes[1] = {"eff_detuning_A1", {}, -1.0, 1.0, 3};
    r.shape = {5, 3};
    r.points.resize(15);
    const PointStatus U = PointStatus::Unstable, S = PointStatus::Stable;
    const PointStatus column[5] = {U, S, U, U, S};
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) r.points[i * 3 + j].status = j == 1 ? column[i] : S;
    CHECK(unstable_strip_width(r, 0, 0.1) == 2.0);
    CHECK(unstable_strip_width(r, 0, 0.1, 0.5) == 2.0);
    CHECK(unstable_strip_width(r, 0, 0.1, -1.0, 0.5) == 1.0);
    CHECK(unstable_strip_width(r, 0, 0.9) == 0.0);
    CHECK(unstable_strip_width(r, 1, 0.0) == 1.0);
  }
  SUBCASE("one-dimensional results are rejected") {
    SweepSpec s = detuning_grid(3);
    s.axes.pop_back();
    const auto r = run_sweep(s, {.threads = 1});
    CHECK_THROWS_AS(unstable_strip_width(r, 0, 0.0), std::invalid_argument);
  }
}

}  // TEST_SUITE
