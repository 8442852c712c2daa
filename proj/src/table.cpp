#include "omm/table.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "omm/config.hpp"
#include "omm/errors.hpp"
#include "omm/parameters.hpp"

namespace omm {
namespace {

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

struct Counts {
  std::size_t stable = 0, unstable = 0, failed = 0;
};

Counts count(const SweepResult& r) {
  Counts c;
  for (const auto& p : r.points) {
    switch (p.status) {
      case PointStatus::Stable: ++c.stable; break;
      case PointStatus::Unstable: ++c.unstable; break;
      case PointStatus::Failed: ++c.failed; break;
    }
  }
  return c;
}

// Error messages end up in a single comment line.
std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

std::vector<std::string> table_header(const SweepSpec& spec) {
  std::vector<std::string> h;
  for (const auto& a : spec.axes) h.push_back(a.parameter);
  h.emplace_back("stable");
  h.emplace_back("status");
  for (const auto& p : spec.pairs) h.push_back(pair_label(p));
  for (Mode m : spec.amplitudes) h.push_back("abs_" + std::string(mode_name(m)));
  h.emplace_back("lyapunov_residual");
  h.emplace_back("min_symplectic_eig");
  return h;
}

std::vector<std::vector<std::string>> table_rows(const SweepResult& result) {
  const auto& spec = result.spec;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.points.size());
  for (const auto& p : result.points) {
    std::vector<std::string> row;
    for (double c : p.coordinates) row.push_back(format_double(c));
    row.emplace_back(p.stable() ? "1" : "0");
    row.emplace_back(status_name(p.status));
    for (std::size_t k = 0; k < spec.pairs.size(); ++k)
      row.push_back(p.stable() && k < p.e_n.size() ? format_double(p.e_n[k]) : "");
    for (std::size_t k = 0; k < spec.amplitudes.size(); ++k)
      row.push_back(k < p.amplitudes.size() ? format_double(p.amplitudes[k]) : "");
    row.push_back(cell(p.lyapunov_residual));
    row.push_back(cell(p.min_symplectic));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> table_footer(const SweepResult& result) {
  const Counts c = count(result);
  std::vector<std::string> f;
  f.push_back("# generator: ommsim " + result.version);
  f.push_back("# default_fingerprint: " + result.default_fingerprint);
  f.push_back("# base_fingerprint: " + result.base_fingerprint);
  f.push_back("# points: " + std::to_string(result.points.size()) + " stable: " +
              std::to_string(c.stable) + " unstable: " + std::to_string(c.unstable) +
              " failed: " + std::to_string(c.failed));
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    if (p.status != PointStatus::Failed) continue;
    std::string where;
    for (std::size_t a = 0; a < p.coordinates.size(); ++a)
      where += (a ? "," : "") + result.spec.axes[a].parameter + "=" + format_double(p.coordinates[a]);
    f.push_back("# failed " + std::to_string(i) + (where.empty() ? "" : " " + where) + ": " +
                one_line(p.error));
  }
  return f;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  auto join = [&](const std::vector<std::string>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
    out << '\n';
  };
  join(table_header(result.spec));
  for (const auto& row : table_rows(result)) join(row);
  for (const auto& line : table_footer(result)) out << line << '\n';
}

void write_json(const SweepResult& result, std::ostream& out) {
  using nlohmann::json;
  const auto header = table_header(result.spec);
  json rows = json::array();
  for (const auto& p : result.points) {
    json row = json::object();
    for (std::size_t a = 0; a < p.coordinates.size(); ++a) row[header[a]] = p.coordinates[a];
    row["stable"] = p.stable();
    row["status"] = std::string(status_name(p.status));
    for (std::size_t k = 0; k < result.spec.pairs.size(); ++k)
      row[pair_label(result.spec.pairs[k])] =
          p.stable() && k < p.e_n.size() ? json(p.e_n[k]) : json(nullptr);
    for (std::size_t k = 0; k < result.spec.amplitudes.size(); ++k)
      row["abs_" + std::string(mode_name(result.spec.amplitudes[k]))] =
          k < p.amplitudes.size() ? json(p.amplitudes[k]) : json(nullptr);
    row["lyapunov_residual"] = std::isfinite(p.lyapunov_residual) ? json(p.lyapunov_residual) : json(nullptr);
    row["min_symplectic_eig"] = std::isfinite(p.min_symplectic) ? json(p.min_symplectic) : json(nullptr);
    if (!p.error.empty()) row["error"] = p.error;
    rows.push_back(std::move(row));
  }
  const Counts c = count(result);
  json doc{
      {"columns", header},
      {"rows", std::move(rows)},
      {"provenance",
       {{"generator", "ommsim " + result.version},
        {"default_fingerprint", result.default_fingerprint},
        {"base_fingerprint", result.base_fingerprint},
        {"points", result.points.size()},
        {"stable", c.stable},
        {"unstable", c.unstable},
        {"failed", c.failed}}},
  };
  out << doc.dump(1) << '\n';
}

void write_table(const SweepResult& result, std::ostream& out, TableFormat format) {
  if (format == TableFormat::Json) write_json(result, out);
  else write_csv(result, out);
}

void write_table_file(const SweepResult& result, const std::filesystem::path& path,
                      TableFormat format) {
  std::ostringstream buf;
  write_table(result, buf, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << buf.str();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

SweepResult single_point_result(const SystemConfig& config, std::vector<ModePair> pairs,
                                std::vector<Mode> amplitudes) {
  SweepResult r;
  r.spec.base = config;
  r.spec.pairs = std::move(pairs);
  r.spec.amplitudes = std::move(amplitudes);
  r.default_fingerprint = fingerprint(default_config());
  r.base_fingerprint = fingerprint(config);
  r.version = std::string(version());
  r.points.push_back(run_point(config, r.spec.pairs, r.spec.amplitudes));
  return r;
}

}  // namespace omm
