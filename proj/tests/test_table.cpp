#include <charconv>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "omm/errors.hpp"
#include "omm/table.hpp"

using namespace omm;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = line.find(',', pos);
    out.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) return out;
    pos = c + 1;
  }
}

std::string csv(const SweepResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

SweepResult mixed_result() {
  const double wb = default_config().mode(Mode::b).frequency;
  SweepSpec s;
  s.base = default_config();
  s.base.couplings.optomechanical = 1.4 * s.base.mode(Mode::b).decay;
  s.axes = {{"eff_detuning_a", {}, 0.3 * wb, 1.0 * wb, 2}};
  s.pairs = {{Mode::m1, Mode::m2}, {Mode::A1, Mode::b}};
  s.amplitudes = {Mode::a};
  auto r = run_sweep(s, {.threads = 1});
  REQUIRE(r.points[0].status == PointStatus::Unstable);
  REQUIRE(r.points[1].stable());
  return r;
}

}  // namespace

TEST_SUITE("table") {

TEST_CASE("single point gives a header and one row") {
  const auto r = single_point_result(default_config(), {{Mode::m1, Mode::m2}});
  const auto l = lines(csv(r));
  REQUIRE(l.size() >= 3);
  CHECK(l[0] == "stable,status,EN_m1_m2,lyapunov_residual,min_symplectic_eig");
  CHECK(l[1].starts_with("1,stable,"));
  for (std::size_t k = 2; k < l.size(); ++k) CHECK(l[k].starts_with("# "));
  CHECK(l[2] == "# generator: ommsim " + std::string(version()));
}

TEST_CASE("unstable rows are masked") {
  const auto r = mixed_result();
  const auto l = lines(csv(r));
  CHECK(l[0] == "eff_detuning_a,stable,status,EN_m1_m2,EN_A1_b,abs_a,lyapunov_residual,min_symplectic_eig");
  const auto u = cells(l[1]);
  const auto s = cells(l[2]);
  REQUIRE(u.size() == 8);
  REQUIRE(s.size() == 8);
  CHECK(u[1] == "0");
  CHECK(u[2] == "unstable");
  CHECK(u[3].empty());
  CHECK(u[4].empty());
  CHECK_FALSE(u[5].empty());  // the mean field exists even when fluctuations blow up
  CHECK(u[6].empty());
  CHECK(s[1] == "1");
  CHECK_FALSE(s[3].empty());
}

TEST_CASE("numbers survive the text round trip exactly") {
  const auto r = mixed_result();
  const auto s = cells(lines(csv(r))[2]);
  double x = 0.0;
  std::from_chars(s[3].data(), s[3].data() + s[3].size(), x);
  CHECK(x == r.points[1].e_n[0]);
  std::from_chars(s[0].data(), s[0].data() + s[0].size(), x);
  CHECK(x == r.points[1].coordinates[0]);
}

TEST_CASE("footer records provenance and failures") {
  auto r = mixed_result();
  r.points[0].status = PointStatus::Failed;
  r.points[0].error = "did not converge\nat all";
  const auto f = table_footer(r);
  CHECK(f[1] == "# default_fingerprint: " + r.default_fingerprint);
  CHECK(f[2] == "# base_fingerprint: " + r.base_fingerprint);
  CHECK(r.default_fingerprint != r.base_fingerprint);
  CHECK(f[3] == "# points: 2 stable: 1 unstable: 0 failed: 1");
  REQUIRE(f.size() == 5);
  CHECK(f[4].find("did not converge at all") != std::string::npos);
  CHECK(f[4].find("eff_detuning_a=") != std::string::npos);
  CHECK(cells(lines(csv(r))[1])[2] == "failed");
}

TEST_CASE("column count is constant") {
  const auto r = mixed_result();
  const auto rows = table_rows(r);
  const auto h = table_header(r.spec);
  for (const auto& row : rows) CHECK(row.size() == h.size());
  CHECK(rows.size() == r.points.size());
}

TEST_CASE("json output") {
  const auto r = mixed_result();
  std::ostringstream out;
  write_json(r, out);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["EN_m1_m2"].is_null());
  CHECK(doc["rows"][0]["stable"] == false);
  CHECK(doc["rows"][1]["EN_m1_m2"].get<double>() == r.points[1].e_n[0]);
  CHECK(doc["provenance"]["base_fingerprint"] == r.base_fingerprint);
  CHECK(doc["columns"].size() == table_header(r.spec).size());
}

TEST_CASE("unwritable destination") {
  const auto r = single_point_result(default_config(), {{Mode::m1, Mode::m2}});
  const std::filesystem::path bad = "/nonexistent-dir/out.csv";
  CHECK_THROWS_AS(write_table_file(r, bad, TableFormat::Csv), IoError);
  CHECK_FALSE(std::filesystem::exists(bad));
  CHECK_THROWS_AS(parse_table_format("xml"), ConfigError);
}

}  // TEST_SUITE
