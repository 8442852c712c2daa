// ommsim: steady-state entanglement of the opto-magno-mechanical system.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "omm/calibration.hpp"
#include "omm/config.hpp"
#include "omm/errors.hpp"
#include "omm/presets.hpp"
#include "omm/table.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

struct Output {
  std::string path;
  std::string format = "csv";
  unsigned threads = 0;

  void emit(const omm::SweepResult& r) const {
    const auto fmt = omm::parse_table_format(format);
    if (path.empty() || path == "-") omm::write_table(r, std::cout, fmt);
    else omm::write_table_file(r, path, fmt);
  }
};

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("--out,-o", out.path, "output file (default: stdout)");
  cmd->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads,-j", out.threads, "worker threads (0: all cores)");
}

std::vector<omm::ModePair> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<omm::ModePair> pairs;
  for (const auto& s : specs) {
    const auto sep = s.find_first_of(",:");
    const auto a = sep == std::string::npos ? std::nullopt : omm::parse_mode(s.substr(0, sep));
    const auto b = sep == std::string::npos ? std::nullopt : omm::parse_mode(s.substr(sep + 1));
    if (!a || !b || *a == *b) throw omm::ConfigError("bad mode pair '" + s + "' (expected e.g. m1,m2)");
    pairs.push_back({*a, *b});
  }
  if (pairs.empty()) pairs.push_back({omm::Mode::m1, omm::Mode::m2});
  return pairs;
}

std::vector<omm::Mode> parse_modes(const std::vector<std::string>& names) {
  std::vector<omm::Mode> out;
  for (const auto& n : names) {
    const auto m = omm::parse_mode(n);
    if (!m) throw omm::ConfigError("unknown mode '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

int print_strip(const omm::SweepResult& r, double fixed, double lo) {
  if (r.shape.size() != 2) return kOk;
  const double w = omm::unstable_strip_width(r, 0, fixed, lo);
  std::cerr << "unstable strip width along " << r.spec.axes[0].parameter << " at "
            << r.spec.axes[1].parameter << " ~ " << omm::format_double(fixed) << ": "
            << omm::format_double(w) << " rad/s\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state entanglement in a hybrid opto-magno-mechanical system"};
  app.set_version_flag("--version", std::string(omm::version()));
  app.require_subcommand(1);

  Output out;
  std::string config_path;
  std::string presets_dir = omm::default_presets_dir().string();

  auto* point = app.add_subcommand("point", "evaluate one configuration");
  std::vector<std::string> pair_specs, amplitude_names;
  point->add_option("--config,-c", config_path, "system config file")->required();
  point->add_option("--pair,-p", pair_specs, "mode pair such as m1,m2 (repeatable)");
  point->add_option("--amplitude", amplitude_names, "also report |<O>| for these modes");
  add_output_options(point, out);

  auto* sweep = app.add_subcommand("sweep", "run a 1-D or 2-D sweep file");
  sweep->add_option("--config,-c", config_path, "sweep file")->required();
  add_output_options(sweep, out);

  auto* stability = app.add_subcommand("stability-map", "stability only, no covariance");
  double strip_at = 0.0, strip_from = 0.0;
  stability->add_option("--config,-c", config_path, "sweep file")->required();
  stability->add_option("--strip-at", strip_at, "second-axis coordinate of the strip cut (rad/s)");
  stability->add_option("--strip-from", strip_from, "lower bound on the first axis for the strip (rad/s)");
  add_output_options(stability, out);

  auto* reproduce = app.add_subcommand("reproduce-fig", "run a committed figure preset");
  std::string fig_id;
  bool list = false;
  reproduce->add_option("id", fig_id, "preset id, e.g. fig3");
  reproduce->add_flag("--list", list, "list preset ids");
  reproduce->add_option("--presets-dir", presets_dir, "preset directory");
  add_output_options(reproduce, out);

  auto* calibrate = app.add_subcommand("calibrate-gab", "calibrate g_A1b = g_A2b against figure anchors");
  omm::CalibrationOptions cal;
  std::string scan_out;
  calibrate->add_option("--presets-dir", presets_dir, "preset directory");
  calibrate->add_option("--min", cal.min, "smallest candidate (rad/s)");
  calibrate->add_option("--max", cal.max, "largest candidate (rad/s)");
  calibrate->add_option("--count", cal.count, "log-spaced candidates");
  calibrate->add_option("--threads,-j", cal.run.threads, "worker threads (0: all cores)");
  calibrate->add_option("--scan-out", scan_out, "write the full scan as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    omm::RunOptions run;
    run.threads = out.threads;

    if (*point) {
      omm::parse_table_format(out.format);
      const auto cfg = omm::load_config_file(config_path);
      const auto r = omm::single_point_result(cfg, parse_pairs(pair_specs), parse_modes(amplitude_names));
      out.emit(r);
      if (r.points[0].status == omm::PointStatus::Failed) {
        std::cerr << "ommsim: " << r.points[0].error << '\n';
        return kNumericalFailure;
      }
      return kOk;
    }
    if (*sweep) {
      omm::parse_table_format(out.format);
      out.emit(omm::run_sweep(omm::load_sweep_file(config_path), run));
      return kOk;
    }
    if (*stability) {
      omm::parse_table_format(out.format);
      run.stability_only = true;
      const auto r = omm::run_sweep(omm::load_sweep_file(config_path), run);
      out.emit(r);
      return print_strip(r, strip_at, strip_from);
    }
    if (*reproduce) {
      if (list) {
        for (const auto& id : omm::preset_ids(presets_dir)) std::cout << id << '\n';
        return kOk;
      }
      if (fig_id.empty()) throw omm::ConfigError("reproduce-fig needs a preset id (see --list)");
      omm::parse_table_format(out.format);
      out.emit(omm::reproduce_figure(fig_id, presets_dir, run));
      return kOk;
    }
    if (*calibrate) {
      const auto result = omm::calibrate_cavity_mechanical_coupling(presets_dir, cal);
      if (!scan_out.empty()) {
        std::ostringstream csv;
        csv << "g_Ab,sideband_optimum,thermal_cutoff,rabi_peak,coupling_optimum,"
               "sideband_entanglement,worst_deviation\n";
        for (const auto& p : result.scan) {
          const auto& f = p.features;
          csv << omm::format_double(p.coupling) << ',' << omm::format_double(f.sideband_optimum) << ','
              << omm::format_double(f.thermal_cutoff) << ',' << omm::format_double(f.rabi_peak) << ','
              << omm::format_double(f.coupling_optimum) << ','
              << omm::format_double(f.sideband_entanglement) << ','
              << omm::format_double(p.worst_deviation) << '\n';
        }
        std::ofstream file(scan_out);
        if (!(file << csv.str())) throw omm::IoError("cannot write '" + scan_out + "'");
      }
      const auto& best = result.scan[result.best];
      std::cout << "# scan: " << result.scan.size() << " log-spaced values in ["
                << omm::format_double(cal.min) << ", " << omm::format_double(cal.max) << "] rad/s\n";
      for (const auto& a : omm::calibration_anchors())
        std::cout << "# " << a.name << ": " << omm::format_double(best.features.*(a.feature))
                  << " (target " << omm::format_double(a.target) << ", deviation "
                  << omm::format_double(a.deviation(best.features)) << ")\n";
      std::cout << "# best scan point: " << omm::format_double(best.coupling) << " rad/s\n";
      std::cout << "g_Ab = " << omm::format_double(omm::freeze_value(best.coupling)) << " rad/s\n";
      return best.worst_deviation <= 1.0 ? kOk : kNumericalFailure;
    }
  } catch (const omm::NumericalError& e) {
    std::cerr << "ommsim: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const omm::ConfigError& e) {
    std::cerr << "ommsim: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const omm::IoError& e) {
    std::cerr << "ommsim: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ommsim: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::domain_error& e) {
    std::cerr << "ommsim: " << e.what() << '\n';
    return kConfigFailure;
  }
  return kOk;
}
