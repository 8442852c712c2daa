#include "omm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "omm/errors.hpp"
#include "omm/parameters.hpp"

namespace omm {
namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Document {
  // section -> entries in file order
  std::map<std::string, std::vector<Entry>> sections;
};

const std::set<std::string> kConfigSections{"modes", "couplings", "drives", "environment"};
const std::set<std::string> kSweepSections{"sweep", "axis1", "axis2"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    const auto part = trim(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos));
    if (!part.empty()) out.emplace_back(part);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

Document tokenize(std::string_view text) {
  Document doc;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kConfigSections.count(section) && !kSweepSections.count(section))
        throw ConfigError("unknown section [" + section + "]", line_no);
      doc.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("entry outside of any section", line_no);
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (e.key.empty()) throw ConfigError("empty key", line_no);
    if (e.value.empty()) throw ConfigError("empty value for '" + e.key + "'", line_no);
    if (!seen.insert({section, e.key}).second)
      throw ConfigError("duplicate key '" + e.key + "'", line_no);
    doc.sections[section].push_back(std::move(e));
  }
  return doc;
}

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + std::string(s) + "'", line);
  return v;
}

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("not a non-negative integer: '" + std::string(s) + "'", line);
  return v;
}

enum class Kind { Rate, Temperature, Field };

std::optional<std::pair<Kind, double>> unit_factor(std::string_view u) {
  static const std::map<std::string_view, std::pair<Kind, double>> units{
      {"rad/s", {Kind::Rate, 1.0}},   {"Hz", {Kind::Rate, 1.0}},       {"kHz", {Kind::Rate, 1e3}},
      {"MHz", {Kind::Rate, 1e6}},     {"GHz", {Kind::Rate, 1e9}},      {"THz", {Kind::Rate, 1e12}},
      {"K", {Kind::Temperature, 1.0}}, {"mK", {Kind::Temperature, 1e-3}},
      {"uK", {Kind::Temperature, 1e-6}}, {"T", {Kind::Field, 1.0}},    {"mT", {Kind::Field, 1e-3}},
  };
  const auto it = units.find(u);
  if (it == units.end()) return std::nullopt;
  return it->second;
}

Kind kind_of(const ParameterInfo& p) {
  return p.quantity == Quantity::Rate ? Kind::Rate : Kind::Temperature;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Rate: return "rate";
    case Kind::Temperature: return "temperature";
    case Kind::Field: return "magnetic field";
  }
  return "?";
}

/// Which section a parameter lives in.
std::string section_of(const ParameterInfo& p) {
  const std::string_view n = p.name;
  if (n.starts_with("omega_") || n.starts_with("kappa_")) return "modes";
  if (n.starts_with("g_")) return "couplings";
  if (n == "temperature") return "environment";
  return "drives";
}

/// A config key resolved to the parameter it sets.
struct KeyTarget {
  const ParameterInfo* param = nullptr;
  bool over_2pi = false;
  bool bias_field = false;
};

std::optional<KeyTarget> resolve_key(std::string_view key) {
  KeyTarget t;
  std::string name(key);
  if (name == "bias_field_m1" || name == "bias_field_m2") {
    t.param = find_parameter(name == "bias_field_m1" ? "omega_m1" : "omega_m2");
    t.bias_field = true;
    return t;
  }
  constexpr std::string_view suffix = "_over_2pi";
  if (key.ends_with(suffix)) {
    name = std::string(key.substr(0, key.size() - suffix.size()));
    t.over_2pi = true;
  }
  t.param = find_parameter(name);
  if (!t.param) return std::nullopt;
  if (t.over_2pi && t.param->quantity != Quantity::Rate) return std::nullopt;
  return t;
}

/// An unresolved parameter assignment.
struct Assignment {
  KeyTarget target;
  Entry entry;
};

using AssignmentMap = std::map<std::string_view, Assignment>;  // parameter name -> assignment

void collect_config_entries(const Document& doc, AssignmentMap& out) {
  std::set<std::string_view> seen;
  for (const auto& section : kConfigSections) {
    const auto it = doc.sections.find(section);
    if (it == doc.sections.end()) continue;
    for (const auto& e : it->second) {
      const auto target = resolve_key(e.key);
      if (!target) throw ConfigError("unknown key '" + e.key + "' in [" + section + "]", e.line);
      if (section_of(*target->param) != section)
        throw ConfigError("key '" + e.key + "' belongs in [" + section_of(*target->param) + "]",
                          e.line);
      if (!seen.insert(target->param->name).second)
        throw ConfigError("'" + e.key + "' sets " + std::string(target->param->name) + " a second time", e.line);
      out.insert_or_assign(target->param->name, Assignment{*target, e});
    }
  }
}

/// Resolves one quantity expression: "<number> <unit>", "<number> <ref>",
/// "<ref>", or "default". `lookup` returns the internal value of a reference.
template <class Lookup>
double evaluate_value(const Entry& e, Kind expected, const ParameterInfo* param, Lookup&& lookup) {
  const std::string_view v = e.value;
  if (v == "default") {
    if (!param) throw ConfigError("'default' is not allowed here", e.line);
    if (param->requires_mode == DetuningMode::Bare)
      throw ConfigError("no built-in default for bare detuning '" + e.key + "'", e.line);
    return param->get(default_config());
  }
  const auto parts = split(v, ' ');
  std::string number = "1";
  std::string word;
  if (parts.size() == 1) {
    // a lone number lacks its unit; a lone word is a reference with coefficient 1
    double tmp = 0.0;
    const auto [p, ec] = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), tmp);
    if (ec == std::errc() && p == parts[0].data() + parts[0].size())
      throw ConfigError("missing unit in '" + e.key + " = " + e.value + "'", e.line);
    word = parts[0];
  } else if (parts.size() == 2) {
    number = parts[0];
    word = parts[1];
  } else {
    throw ConfigError("cannot parse value '" + e.value + "'", e.line);
  }
  const double coeff = parse_number(number, e.line);

  if (const auto unit = unit_factor(word)) {
    if (unit->first != expected)
      throw ConfigError(std::string("unit '") + word + "' is not a " + kind_name(expected), e.line);
    return coeff * unit->second;
  }
  const auto* ref = find_parameter(word);
  if (!ref) throw ConfigError("unknown unit or parameter '" + word + "'", e.line);
  if (kind_of(*ref) != expected)
    throw ConfigError("reference '" + word + "' is not a " + std::string(kind_name(expected)),
                      e.line);
  return coeff * lookup(*ref, e.line);
}

/// Resolves all assignments into a SystemConfig with cycle detection on
/// relative references.
SystemConfig resolve_config(const AssignmentMap& assignments) {
  bool any_eff = false, any_bare = false;
  for (const auto& [name, a] : assignments) {
    if (a.target.param->requires_mode == DetuningMode::Effective) any_eff = true;
    if (a.target.param->requires_mode == DetuningMode::Bare) any_bare = true;
  }
  if (any_eff && any_bare) {
    std::size_t line = 0;
    for (const auto& [name, a] : assignments)
      if (a.target.param->requires_mode == DetuningMode::Bare) line = std::max(line, a.entry.line);
    throw ConfigError("effective and bare detunings cannot be mixed in one config", line);
  }

  SystemConfig cfg;
  cfg.detuning_mode = any_bare ? DetuningMode::Bare : DetuningMode::Effective;

  std::map<std::string_view, double> resolved;
  std::set<std::string_view> in_progress;

  std::function<double(const ParameterInfo&, std::size_t)> value_of =
      [&](const ParameterInfo& p, std::size_t from_line) -> double {
    if (const auto it = resolved.find(p.name); it != resolved.end()) return it->second;
    const auto it = assignments.find(p.name);
    if (it == assignments.end()) {
      if (p.requires_mode || p.name.starts_with("rabi_") || p.name.starts_with("detuning_"))
        return 0.0;  // drive parameters default to zero when absent
      throw ConfigError("reference to unset parameter '" + std::string(p.name) + "'", from_line);
    }
    if (!in_progress.insert(p.name).second)
      throw ConfigError("cyclic relative reference through '" + std::string(p.name) + "'",
                        it->second.entry.line);
    const auto& a = it->second;
    double v = 0.0;
    if (a.target.bias_field) {
      v = magnon_frequency_from_field(
          evaluate_value(a.entry, Kind::Field, nullptr, [&](const ParameterInfo&, std::size_t l) -> double {
            throw ConfigError("bias field cannot be relative", l);
          }));
    } else {
      v = evaluate_value(a.entry, kind_of(p), &p, value_of);
      if (a.target.over_2pi && a.entry.value != "default") v *= constants::two_pi;
    }
    in_progress.erase(p.name);
    resolved.emplace(p.name, v);
    return v;
  };

  // Evaluate what is written first, in file order, so a bad value is reported
  // at its own line before any complaint about keys that are absent.
  std::vector<const Assignment*> written;
  for (const auto& [name, a] : assignments) written.push_back(&a);
  std::sort(written.begin(), written.end(),
            [](const Assignment* x, const Assignment* y) { return x->entry.line < y->entry.line; });
  for (const auto* a : written) value_of(*a->target.param, a->entry.line);

  for (const auto& p : parameters()) {
    if (p.requires_mode && *p.requires_mode != cfg.detuning_mode) continue;
    const bool optional = p.requires_mode || p.name.starts_with("rabi_") ||
                          p.name.starts_with("detuning_");
    if (!assignments.count(p.name) && !optional)
      throw ConfigError("missing required key '" + std::string(p.name) + "'");
    p.set(cfg, value_of(p, 0));
  }
  return cfg;
}

void check_only_sections(const Document& doc, const std::set<std::string>& allowed) {
  for (const auto& [name, entries] : doc.sections)
    if (!allowed.count(name))
      throw ConfigError("section [" + name + "] is not valid in this document",
                        entries.empty() ? 0 : entries.front().line);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModePair parse_pair(std::string_view s, std::size_t line) {
  const auto sep = s.find(':');
  if (sep == std::string_view::npos) throw ConfigError("pair must look like 'm1:m2'", line);
  const auto a = parse_mode(trim(s.substr(0, sep)));
  const auto b = parse_mode(trim(s.substr(sep + 1)));
  if (!a || !b) throw ConfigError("unknown mode in pair '" + std::string(s) + "'", line);
  if (*a == *b) throw ConfigError("pair must name two different modes", line);
  return {*a, *b};
}

const Entry* find_entry(const Document& doc, const std::string& section, std::string_view key) {
  const auto it = doc.sections.find(section);
  if (it == doc.sections.end()) return nullptr;
  for (const auto& e : it->second)
    if (e.key == key) return &e;
  return nullptr;
}

SweepAxis parse_axis(const Document& doc, const std::string& section, const SystemConfig& base) {
  static const std::set<std::string_view> keys{"parameter", "linked", "start", "stop", "count", "scale"};
  for (const auto& e : doc.sections.at(section))
    if (!keys.count(e.key)) throw ConfigError("unknown key '" + e.key + "' in [" + section + "]", e.line);

  auto require = [&](std::string_view key) -> const Entry& {
    const auto* e = find_entry(doc, section, key);
    if (!e) throw ConfigError("[" + section + "] is missing '" + std::string(key) + "'");
    return *e;
  };

  SweepAxis axis;
  const Entry& pe = require("parameter");
  const auto target = resolve_key(pe.value);
  if (!target || target->bias_field)
    throw SpecError("unknown sweep parameter '" + pe.value + "'", pe.line);
  axis.parameter = std::string(target->param->name);
  if (const auto* le = find_entry(doc, section, "linked")) {
    for (const auto& name : split(le->value, ',')) {
      if (!find_parameter(name)) throw SpecError("unknown linked parameter '" + name + "'", le->line);
      axis.linked.push_back(name);
    }
  }

  auto lookup = [&](const ParameterInfo& p, std::size_t) { return p.get(base); };
  const double scale2pi = target->over_2pi ? constants::two_pi : 1.0;
  const Entry& s = require("start");
  const Entry& t = require("stop");
  axis.start = scale2pi * evaluate_value(s, kind_of(*target->param), nullptr, lookup);
  axis.stop = scale2pi * evaluate_value(t, kind_of(*target->param), nullptr, lookup);
  const Entry& c = require("count");
  axis.count = parse_count(c.value, c.line);
  if (const auto* sc = find_entry(doc, section, "scale")) {
    if (sc->value == "linear") axis.scale = AxisScale::Linear;
    else if (sc->value == "log") axis.scale = AxisScale::Log;
    else throw ConfigError("scale must be 'linear' or 'log'", sc->line);
  }
  return axis;
}

std::string rate(double v) { return format_double(v) + " rad/s"; }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

SystemConfig parse_config(std::string_view text) {
  const Document doc = tokenize(text);
  check_only_sections(doc, kConfigSections);
  AssignmentMap assignments;
  collect_config_entries(doc, assignments);
  return resolve_config(assignments);
}

SweepSpec parse_sweep(std::string_view text, const std::filesystem::path& base_dir) {
  const Document doc = tokenize(text);
  if (!doc.sections.count("sweep")) throw ConfigError("sweep document needs a [sweep] section");
  static const std::set<std::string_view> sweep_keys{"base", "pairs", "amplitudes"};
  for (const auto& e : doc.sections.at("sweep"))
    if (!sweep_keys.count(e.key)) throw ConfigError("unknown key '" + e.key + "' in [sweep]", e.line);

  AssignmentMap assignments;
  if (const auto* b = find_entry(doc, "sweep", "base")) {
    const auto path = base_dir / b->value;
    const Document base_doc = tokenize(read_file(path));
    check_only_sections(base_doc, kConfigSections);
    collect_config_entries(base_doc, assignments);
  }
  // Overrides replace base entries parameter by parameter; switching detuning
  // kind means dropping the other kind's base entries.
  {
    AssignmentMap overrides;
    collect_config_entries(doc, overrides);
    for (const auto& [name, a] : overrides) {
      if (a.target.param->requires_mode) {
        for (auto it = assignments.begin(); it != assignments.end();) {
          const auto& m = it->second.target.param->requires_mode;
          it = (m && *m != *a.target.param->requires_mode) ? assignments.erase(it) : std::next(it);
        }
      }
    }
    for (auto& [name, a] : overrides) assignments.insert_or_assign(name, a);
  }

  SweepSpec spec;
  spec.base = resolve_config(assignments);

  const Entry* pe = find_entry(doc, "sweep", "pairs");
  if (!pe) throw ConfigError("[sweep] is missing 'pairs'");
  for (const auto& p : split(pe->value, ',')) spec.pairs.push_back(parse_pair(p, pe->line));
  if (const auto* ae = find_entry(doc, "sweep", "amplitudes")) {
    for (const auto& m : split(ae->value, ',')) {
      const auto mode = parse_mode(m);
      if (!mode) throw ConfigError("unknown mode '" + m + "'", ae->line);
      spec.amplitudes.push_back(*mode);
    }
  }
  for (const std::string section : {"axis1", "axis2"})
    if (doc.sections.count(section)) spec.axes.push_back(parse_axis(doc, section, spec.base));
  if (!doc.sections.count("axis1") && doc.sections.count("axis2"))
    throw ConfigError("[axis2] given without [axis1]");

  spec.validate();
  return spec;
}

std::variant<SystemConfig, SweepSpec> parse_document(std::string_view text,
                                                     const std::filesystem::path& base_dir) {
  const Document doc = tokenize(text);
  if (doc.sections.count("sweep")) return parse_sweep(text, base_dir);
  return parse_config(text);
}

SystemConfig load_config_file(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

SweepSpec load_sweep_file(const std::filesystem::path& path) {
  return parse_sweep(read_file(path), path.parent_path());
}

std::string serialize_config(const SystemConfig& config) {
  std::ostringstream out;
  for (const std::string section : {"modes", "couplings", "drives", "environment"}) {
    out << '[' << section << "]\n";
    for (const auto& p : parameters()) {
      if (section_of(p) != section) continue;
      if (p.requires_mode && *p.requires_mode != config.detuning_mode) continue;
      const double v = p.get(config);
      out << p.name << " = "
          << (p.quantity == Quantity::Rate ? rate(v) : format_double(v) + " K") << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string serialize_sweep(const SweepSpec& spec) {
  std::ostringstream out;
  out << serialize_config(spec.base);
  out << "[sweep]\npairs = ";
  for (std::size_t i = 0; i < spec.pairs.size(); ++i)
    out << (i ? ", " : "") << mode_name(spec.pairs[i].first) << ':' << mode_name(spec.pairs[i].second);
  out << '\n';
  if (!spec.amplitudes.empty()) {
    out << "amplitudes = ";
    for (std::size_t i = 0; i < spec.amplitudes.size(); ++i)
      out << (i ? ", " : "") << mode_name(spec.amplitudes[i]);
    out << '\n';
  }
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const auto& ax = spec.axes[a];
    const auto* info = find_parameter(ax.parameter);
    auto quantity = [&](double v) {
      return info && info->quantity == Quantity::Temperature ? format_double(v) + " K" : rate(v);
    };
    out << "\n[axis" << a + 1 << "]\nparameter = " << ax.parameter << '\n';
    if (!ax.linked.empty()) {
      out << "linked = ";
      for (std::size_t i = 0; i < ax.linked.size(); ++i) out << (i ? ", " : "") << ax.linked[i];
      out << '\n';
    }
    out << "start = " << quantity(ax.start) << "\nstop = " << quantity(ax.stop)
        << "\ncount = " << ax.count << "\nscale = " << (ax.scale == AxisScale::Log ? "log" : "linear")
        << '\n';
  }
  return out.str();
}

}  // namespace omm
