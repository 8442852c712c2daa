#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"

#include "omm/config.hpp"
#include "omm/errors.hpp"
#include "omm/parameters.hpp"
#include "omm/presets.hpp"
#include "omm/table.hpp"

using namespace omm;

namespace {

const std::string kMinimal = R"(# a complete config
[modes]
omega_a_over_2pi = 370 THz
omega_b_over_2pi = 10 MHz
omega_A1_over_2pi = 10 GHz
omega_m1_over_2pi = 10 GHz
omega_A2_over_2pi = 10 GHz
omega_m2_over_2pi = 10 GHz
kappa_a = 0.4 omega_b
kappa_b_over_2pi = 100 Hz
kappa_A1 = 0.1 omega_b
kappa_m1 = 0.1 omega_b
kappa_A2 = 0.1 omega_b
kappa_m2 = 0.1 omega_b

[couplings]
g_ab = 1.2 kappa_b
g_A1b = 0.5 rad/s
g_A2b = 0.5 rad/s
g_1_over_2pi = 1.7 MHz
g_2_over_2pi = 1.7 MHz

[drives]

[environment]
temperature = 10 mK
)";

std::string with_line(const std::string& base, const std::string& section, const std::string& line) {
  std::string s = base;
  const auto pos = s.find("[" + section + "]");
  REQUIRE(pos != std::string::npos);
  s.insert(s.find('\n', pos) + 1, line + "\n");
  return s;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::size_t line_of(const std::string& text, const std::string& needle) {
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("units and relative values resolve to rad/s and kelvin") {
  const SystemConfig c = parse_config(kMinimal);
  CHECK(c.mode(Mode::b).frequency == doctest::Approx(constants::two_pi * 1e7).epsilon(1e-15));
  CHECK(c.mode(Mode::a).decay == doctest::Approx(0.4 * constants::two_pi * 1e7).epsilon(1e-15));
  CHECK(c.couplings.optomechanical == doctest::Approx(1.2 * constants::two_pi * 100).epsilon(1e-15));
  CHECK(c.couplings.cavity_mechanical[1] == 0.5);
  CHECK(c.temperature == doctest::Approx(0.01));
  CHECK(c.detuning_mode == DetuningMode::Effective);
}

TEST_CASE("empty drives section means no drives") {
  const SystemConfig c = parse_config(kMinimal);
  CHECK(c.optical.rabi == 0.0);
  CHECK(c.microwave[0].rabi == 0.0);
  CHECK(c.microwave[1].rabi == 0.0);
  CHECK(c.optical.detuning == 0.0);
}

TEST_CASE("the default keyword and the shipped default file give the built-in values") {
  std::string text = kMinimal;
  text = replace(text, "g_A1b = 0.5 rad/s", "g_A1b = default");
  text = replace(text, "g_A2b = 0.5 rad/s", "g_A2b = default");
  text = with_line(text, "drives", "rabi_a = default\nrabi_m1 = default\nrabi_m2 = default\neff_detuning_a = default");
  CHECK(parse_config(text) == default_config());
  CHECK(load_config_file(default_presets_dir() / "default.cfg") == default_config());
}

TEST_CASE("prefixed and scaled units") {
  auto value = [](const std::string& line) {
    return find_parameter("detuning_m1")->get(parse_config(with_line(kMinimal, "drives", line)));
  };
  CHECK(value("detuning_m1 = 1 kHz") == 1e3);
  CHECK(value("detuning_m1 = 2.5e3 rad/s") == 2.5e3);
  CHECK(value("detuning_m1 = -3 GHz") == -3e9);
  CHECK(value("detuning_m1_over_2pi = 1 Hz") == doctest::Approx(constants::two_pi));
  CHECK(value("detuning_m1 = -1 g_1") == doctest::Approx(-constants::two_pi * 1.7e6));
  CHECK(value("detuning_m1 = omega_b") == doctest::Approx(constants::two_pi * 1e7));
}

TEST_CASE("bias field sets the magnon frequency") {
  std::string text = replace(kMinimal, "omega_m1_over_2pi = 10 GHz", "bias_field_m1 = 250 mT");
  const SystemConfig c = parse_config(text);
  CHECK(c.mode(Mode::m1).frequency == doctest::Approx(constants::two_pi * 7e9));
}

TEST_CASE("bare detunings select the bare mode") {
  const SystemConfig c = parse_config(with_line(kMinimal, "drives", "bare_detuning_a = 1 omega_b"));
  CHECK(c.detuning_mode == DetuningMode::Bare);
  CHECK(c.optical.detuning == doctest::Approx(constants::two_pi * 1e7));
}

TEST_CASE("parse errors carry the offending line") {
  SUBCASE("unknown key") {
    const auto t = with_line(kMinimal, "couplings", "g_abb = 1 Hz");
    CHECK(error_line(t) == line_of(t, "g_abb"));
  }
  SUBCASE("missing unit") {
    const auto t = replace(kMinimal, "kappa_A1 = 0.1 omega_b", "kappa_A1 = 0.1");
    CHECK(error_line(t) == line_of(t, "kappa_A1"));
  }
  SUBCASE("bad value in an incomplete document") {
    // the value error wins over the absent keys
    CHECK(error_line("[modes]\nomega_b = 10\n") == 2);
  }
  SUBCASE("wrong kind of unit") {
    const auto t = replace(kMinimal, "temperature = 10 mK", "temperature = 10 MHz");
    CHECK(error_line(t) == line_of(t, "temperature"));
  }
  SUBCASE("mixed effective and bare detunings") {
    const auto t = with_line(kMinimal, "drives", "eff_detuning_a = 1 omega_b\nbare_detuning_A1 = 0 Hz");
    CHECK(error_line(t) == line_of(t, "bare_detuning_A1"));
  }
  SUBCASE("relative cycle") {
    std::string t = replace(kMinimal, "omega_b_over_2pi = 10 MHz", "omega_b = 2 kappa_a");
    CHECK(error_line(t) > 0);
    CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("cyclic"), ConfigError);
  }
  SUBCASE("duplicate key") {
    const auto t = with_line(kMinimal, "couplings", "g_ab = 1 kappa_b");
    CHECK(error_line(t) == line_of(t, "g_ab = 1.2") );
  }
  SUBCASE("same parameter twice through an alias") {
    const auto t = with_line(kMinimal, "modes", "omega_b = 1 MHz");
    CHECK(error_line(t) > 0);
  }
  SUBCASE("key in the wrong section") {
    const auto t = with_line(kMinimal, "modes", "g_1 = 1 MHz");
    CHECK(error_line(t) == line_of(t, "g_1 = 1 MHz"));
  }
  SUBCASE("unknown section") {
    const auto t = kMinimal + "[noise]\n";
    CHECK(error_line(t) == line_of(t, "[noise]"));
  }
  SUBCASE("not a key-value line") {
    const auto t = kMinimal + "bogus line\n";
    CHECK(error_line(t) == line_of(t, "bogus line"));
  }
  SUBCASE("missing required key") {
    const auto t = replace(kMinimal, "temperature = 10 mK", "");
    CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("temperature"), ConfigError);
  }
  SUBCASE("bad number") {
    const auto t = replace(kMinimal, "g_A1b = 0.5 rad/s", "g_A1b = 0.5.1 rad/s");
    CHECK(error_line(t) == line_of(t, "g_A1b"));
  }
}

TEST_CASE("config round trip") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    SystemConfig c = default_config();
    for (const auto& p : parameters()) {
      if (p.requires_mode && *p.requires_mode != c.detuning_mode) continue;
      const double v = p.get(c);
      p.set(c, v == 0.0 ? u(rng) * 1e6 : v * (1.0 + 0.5 * u(rng)));
    }
    if (n % 2) c.detuning_mode = DetuningMode::Bare;
    const SystemConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(serialize_config(back) == serialize_config(c));
  }
}

TEST_CASE("every preset parses and round-trips") {
  const auto ids = preset_ids();
  CHECK(ids.size() >= 20);
  for (const auto& id : ids) {
    CAPTURE(id);
    const SweepSpec s = load_preset(id);
    const SweepSpec back = parse_sweep(serialize_sweep(s));
    CHECK(back == s);
  }
}

TEST_CASE("sweep documents") {
  const std::string text = kMinimal + R"(
[sweep]
pairs = m1:m2, A1:b
amplitudes = A1

[axis1]
parameter = g_1_over_2pi
linked = g_2
start = 0.1 MHz
stop = 20 MHz
count = 11
scale = log
)";
  const auto doc = parse_document(text);
  REQUIRE(std::holds_alternative<SweepSpec>(doc));
  const SweepSpec& s = std::get<SweepSpec>(doc);
  CHECK(s.axes.size() == 1);
  CHECK(s.axes[0].parameter == "g_1");
  CHECK(s.axes[0].linked == std::vector<std::string>{"g_2"});
  CHECK(s.axes[0].start == doctest::Approx(constants::two_pi * 1e5));
  CHECK(s.axes[0].scale == AxisScale::Log);
  CHECK(s.pairs.size() == 2);
  CHECK(s.amplitudes == std::vector<Mode>{Mode::A1});
  CHECK(std::holds_alternative<SystemConfig>(parse_document(kMinimal)));

  CHECK_THROWS_AS(parse_sweep(replace(text, "parameter = g_1_over_2pi", "parameter = g_3")), SpecError);
  CHECK_THROWS_AS(parse_sweep(replace(text, "count = 11", "count = 1")), SpecError);
  CHECK_THROWS_AS(parse_sweep(replace(text, "pairs = m1:m2, A1:b", "pairs = m1:m1")), ConfigError);
  CHECK_THROWS_AS(parse_sweep(replace(text, "scale = log", "scale = cubic")), ConfigError);
}

TEST_CASE("sweep overrides replace base entries") {
  const SweepSpec s = load_preset("fig8a");
  CHECK(s.base.mode(Mode::A2).decay == doctest::Approx(0.2 * s.base.mode(Mode::b).frequency));
  CHECK(s.base.mode(Mode::A1).decay == doctest::Approx(0.1 * s.base.mode(Mode::b).frequency));
  const SweepSpec d = load_preset("fig2d");
  CHECK(d.base.couplings.optomechanical == doctest::Approx(1.4 * d.base.mode(Mode::b).decay));
  CHECK_THROWS_AS(load_preset("fig99"), ConfigError);
}

TEST_CASE("table headers of the presets are stable") {
  std::ifstream in(std::filesystem::path(OMM_TEST_DATA_DIR) / "golden_headers.txt");
  REQUIRE(in);
  std::map<std::string, std::string> golden;
  for (std::string line; std::getline(in, line);) {
    const auto sep = line.find(' ');
    if (sep != std::string::npos) golden[line.substr(0, sep)] = line.substr(sep + 1);
  }
  const auto ids = preset_ids();
  CHECK(golden.size() == ids.size());
  for (const auto& id : ids) {
    CAPTURE(id);
    const auto h = table_header(load_preset(id));
    std::string joined;
    for (std::size_t k = 0; k < h.size(); ++k) joined += (k ? "," : "") + h[k];
    CHECK(golden[id] == joined);
  }
}

}  // TEST_SUITE
