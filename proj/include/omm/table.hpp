#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "omm/sweep.hpp"

namespace omm {

enum class TableFormat { Csv, Json };

/// Parses "csv" or "json"; throws ConfigError otherwise.
TableFormat parse_table_format(std::string_view name);

/// Column names: one per axis, stable, status, EN_<x>_<y> per pair,
/// abs_<m> per amplitude, lyapunov_residual, min_symplectic_eig.
std::vector<std::string> table_header(const SweepSpec& spec);

/// Rows in grid order. Cells that do not apply to a point are empty strings.
std::vector<std::vector<std::string>> table_rows(const SweepResult& result);

/// Trailing "# key: value" lines: generator version, fingerprints, point
/// counts, and one line per failed point.
std::vector<std::string> table_footer(const SweepResult& result);

void write_csv(const SweepResult& result, std::ostream& out);
void write_json(const SweepResult& result, std::ostream& out);
void write_table(const SweepResult& result, std::ostream& out, TableFormat format);

/// Renders the whole table first, then writes it, so a failure leaves no file.
void write_table_file(const SweepResult& result, const std::filesystem::path& path,
                      TableFormat format);

/// A result holding a single evaluated configuration with no axes.
SweepResult single_point_result(const SystemConfig& config, std::vector<ModePair> pairs,
                                std::vector<Mode> amplitudes = {});

}  // namespace omm
