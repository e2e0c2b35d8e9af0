#pragma once

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "genland/error.hpp"
#include "genland/report.hpp"

namespace genland::experiments {

enum class ValueKind { real, integer, text };

struct KeySpec {
  std::string key;
  ValueKind kind;
  std::string fallback;  // default, in file syntax
  std::string doc;
};

using Value = std::variant<double, std::int64_t, std::string>;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"hn", "cdt-mono", "cdt-duo", "aah", "ssh", "bbh", "bounds"};
  return names;
}

/// Keys accepted by each experiment, with defaults.
inline const std::vector<KeySpec>& schema(const std::string& experiment) {
  using K = ValueKind;
  static const std::map<std::string, std::vector<KeySpec>> table{
      {"hn",
       {{"n_sites", K::integer, "120", "chain length N"},
        {"t_left", K::real, "1", "hopping t_L"},
        {"r_start", K::real, "0.7", "first r = t_R/t_L"},
        {"r_stop", K::real, "1.3", "last r"},
        {"r_count", K::integer, "25", "number of r points"},
        {"profile_r", K::real, "0.9", "extra r for a profile CSV"},
        {"rcond", K::real, "1e-24", "pseudoinverse cutoff on sigma^2/sigma_max^2"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"cdt-mono",
       {{"hopping", K::real, "1", "J"},
        {"omega", K::real, "10", "drive frequency"},
        {"x_start", K::real, "0", "first A/omega"},
        {"x_stop", K::real, "10", "last A/omega"},
        {"x_count", K::integer, "500", "number of A/omega points"},
        {"truncation", K::integer, "6", "harmonic cutoff M"},
        {"steps_per_period", K::integer, "2000", "RK4 steps per drive period (monodromy)"},
        {"prominence", K::real, "0.1", "peak prominence, fraction of max log10 v_max"},
        {"rcond", K::real, "1e-12", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"cdt-duo",
       {{"hopping", K::real, "1", "J"},
        {"omega1", K::real, "10", "first drive frequency"},
        {"omega2_ratio", K::real, "1.4142135623730951", "omega2/omega1"},
        {"x_start", K::real, "0", "first A/omega1"},
        {"x_stop", K::real, "6", "last A/omega1"},
        {"x_count", K::integer, "21", "number of A points"},
        {"y_start", K::real, "0", "first B/omega2"},
        {"y_stop", K::real, "6", "last B/omega2"},
        {"y_count", K::integer, "21", "number of B points"},
        {"truncation1", K::integer, "6", "harmonic cutoff M1"},
        {"truncation2", K::integer, "6", "harmonic cutoff M2"},
        {"periods", K::integer, "100", "propagation length in periods of omega1"},
        {"steps_per_period", K::integer, "2000", "RK4 steps per period of the faster drive"},
        {"rcond", K::real, "1e-12", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"aah",
       {{"n_sites", K::integer, "80", "chain length N"},
        {"hopping", K::real, "1", "J"},
        {"lambda0", K::real, "2.8", "quasiperiodic potential strength"},
        {"alpha", K::real, "0.61803398874989479", "incommensurate ratio"},
        {"theta", K::real, "0", "potential phase"},
        {"amplitude", K::real, "3.7", "drive amplitude A"},
        {"omega_start", K::real, "1", "first drive frequency"},
        {"omega_stop", K::real, "10", "last drive frequency"},
        {"omega_count", K::integer, "60", "number of frequencies"},
        {"truncation", K::integer, "6", "harmonic cutoff M"},
        {"bin_width", K::real, "0.01", "DOS bin width in epsilon/omega"},
        {"rcond", K::real, "1e-12", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"ssh",
       {{"variant", K::text, "all", "topological | trivial | domain_wall | all"},
        {"n_cells", K::integer, "20", "unit cells"},
        {"t_intra", K::real, "0.5", "intra-cell hopping"},
        {"t_inter", K::real, "1", "inter-cell hopping"},
        {"radius", K::integer, "3", "colocalization radius in sites"},
        {"floor_ratio", K::real, "0.25", "peak floor relative to the largest"},
        {"window", K::real, "0", "midgap window; 0 picks it from the spectrum"},
        {"rcond", K::real, "1e-24", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"bbh",
       {{"n_x", K::integer, "6", "cells along x"},
        {"n_y", K::integer, "6", "cells along y"},
        {"gamma", K::real, "0.5", "intra-cell hopping"},
        {"lambda", K::real, "1", "inter-cell hopping"},
        {"radius", K::integer, "2", "colocalization radius (Chebyshev, sites)"},
        {"floor_ratio", K::real, "0.25", "peak floor relative to the largest"},
        {"window", K::real, "0", "midgap window; 0 picks it from the spectrum"},
        {"rcond", K::real, "1e-24", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "unused, recorded"}}},
      {"bounds",
       {{"model", K::text, "all", "random-hermitian | hn | diag | all"},
        {"dim", K::integer, "30", "dimension of the random Hermitian PD matrix"},
        {"trials", K::integer, "20", "random matrices drawn"},
        {"n_sites", K::integer, "120", "Hatano-Nelson chain length"},
        {"r", K::real, "0.9", "Hatano-Nelson t_R/t_L"},
        {"diag_small", K::real, "1e-3", "small entry of the diagonal test matrix"},
        {"rcond", K::real, "1e-12", "pseudoinverse cutoff"},
        {"seed", K::integer, "1", "random seed"}}},
  };
  auto it = table.find(experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + experiment + "'");
  return it->second;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Value parse_value(const KeySpec& spec, const std::string& raw, const std::string& where) {
  const std::string text = trim(raw);
  auto fail = [&](const char* what) {
    return ConfigError(where + ": key '" + spec.key + "' expects " + what + ", got '" + text + "'");
  };
  switch (spec.kind) {
    case ValueKind::real: {
      if (text.empty()) throw fail("a real number");
      char* end = nullptr;
      const double x = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size() || !std::isfinite(x)) throw fail("a real number");
      return x;
    }
    case ValueKind::integer: {
      std::int64_t v = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) throw fail("an integer");
      return v;
    }
    case ValueKind::text:
      if (text.empty()) throw fail("a value");
      return text;
  }
  throw fail("a value");
}

class RunConfig {
 public:
  explicit RunConfig(std::string experiment) : experiment_(std::move(experiment)) {
    for (const auto& spec : schema(experiment_)) values_[spec.key] = parse_value(spec, spec.fallback, "default");
  }

  const std::string& experiment() const { return experiment_; }

  /// Sets key from text; `where` names the origin for error messages.
  void assign(const std::string& key, const std::string& text, const std::string& where) {
    values_[key] = parse_value(spec(key, where), text, where);
  }

  void assign_json(const std::string& key, const nlohmann::json& v, const std::string& where) {
    const KeySpec& s = spec(key, where);
    if (v.is_string()) {
      values_[key] = parse_value(s, v.get<std::string>(), where);
    } else if (v.is_number_integer() && s.kind != ValueKind::text) {
      if (s.kind == ValueKind::real) values_[key] = static_cast<double>(v.get<std::int64_t>());
      else values_[key] = v.get<std::int64_t>();
    } else if (v.is_number() && s.kind == ValueKind::real) {
      values_[key] = v.get<double>();
    } else {
      throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
  }

  double real(const std::string& key) const { return std::get<double>(at(key)); }
  std::int64_t integer(const std::string& key) const { return std::get<std::int64_t>(at(key)); }
  int small_int(const std::string& key) const { return static_cast<int>(integer(key)); }
  const std::string& text(const std::string& key) const { return std::get<std::string>(at(key)); }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& spec : schema(experiment_)) {
      const Value& v = values_.at(spec.key);
      if (const auto* d = std::get_if<double>(&v)) j[spec.key] = *d;
      else if (const auto* i = std::get_if<std::int64_t>(&v)) j[spec.key] = *i;
      else j[spec.key] = std::get<std::string>(v);
    }
    return j;
  }

  /// Flat key = value text that loads back to the same configuration.
  std::string to_text() const {
    std::string out = "experiment = " + experiment_ + "\n";
    for (const auto& spec : schema(experiment_)) {
      const Value& v = values_.at(spec.key);
      std::string s;
      if (const auto* d = std::get_if<double>(&v)) s = format_double(*d);
      else if (const auto* i = std::get_if<std::int64_t>(&v)) s = std::to_string(*i);
      else s = std::get<std::string>(v);
      out += spec.key + " = " + s + "\n";
    }
    return out;
  }

 private:
  const KeySpec& spec(const std::string& key, const std::string& where) const {
    for (const auto& s : schema(experiment_))
      if (s.key == key) return s;
    throw ConfigError(where + ": unknown key '" + key + "' for experiment " + experiment_);
  }

  const Value& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
  }

  std::string experiment_;
  std::map<std::string, Value> values_;
};

/// Applies a flat `key = value` file; `#` starts a comment.
inline void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key == "experiment") {
      if (trim(value) != cfg.experiment()) {
        throw ConfigError(where + ": file is for experiment '" + trim(value) + "', not " + cfg.experiment());
      }
      continue;
    }
    cfg.assign(key, value, where);
  }
}

/// Applies a run manifest (its "config" object) or a bare JSON object.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& doc, const std::string& origin) {
  const nlohmann::json* body = &doc;
  if (doc.contains("config")) {
    if (doc.contains("experiment") && doc["experiment"] != cfg.experiment()) {
      throw ConfigError(origin + ": manifest is for experiment '" + doc["experiment"].get<std::string>() +
                        "', not " + cfg.experiment());
    }
    body = &doc["config"];
  }
  if (!body->is_object()) throw ConfigError(origin + ": expected a JSON object");
  for (const auto& [key, value] : body->items()) cfg.assign_json(key, value, origin + ": " + key);
}

inline void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set '" + assignment + "': expected key=value");
  cfg.assign(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set " + assignment);
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

/// Cross-key checks that the per-key parser cannot see.
inline void validate(const RunConfig& c) {
  const std::string& e = c.experiment();
  auto positive = [&](const char* k) { require(c.real(k) > 0.0, std::string(k) + " must be positive"); };
  auto at_least = [&](const char* k, std::int64_t lo) {
    require(c.integer(k) >= lo, std::string(k) + " must be >= " + std::to_string(lo));
  };
  auto sweep = [&](const char* start, const char* stop, const char* count) {
    at_least(count, 2);
    require(c.real(stop) > c.real(start), std::string(stop) + " must exceed " + start);
  };
  const double rc = c.real("rcond");
  require(rc > 0.0 && rc < 1.0, "rcond must lie in (0,1)");

  if (e == "hn") {
    at_least("n_sites", 2);
    sweep("r_start", "r_stop", "r_count");
    require(c.real("r_start") > 0.0, "r_start must be positive");
    require(c.real("profile_r") > 0.0, "profile_r must be positive");
    positive("t_left");
  } else if (e == "cdt-mono") {
    sweep("x_start", "x_stop", "x_count");
    require(c.real("x_start") >= 0.0, "x_start must be >= 0");
    positive("omega");
    at_least("truncation", 0);
    at_least("steps_per_period", 200);
    require(c.real("prominence") > 0.0 && c.real("prominence") < 1.0, "prominence must lie in (0,1)");
  } else if (e == "cdt-duo") {
    sweep("x_start", "x_stop", "x_count");
    sweep("y_start", "y_stop", "y_count");
    require(c.real("x_start") >= 0.0 && c.real("y_start") >= 0.0, "amplitude ranges must be >= 0");
    positive("omega1");
    positive("omega2_ratio");
    at_least("truncation1", 0);
    at_least("truncation2", 0);
    at_least("periods", 1);
    at_least("steps_per_period", 200);
  } else if (e == "aah") {
    at_least("n_sites", 2);
    sweep("omega_start", "omega_stop", "omega_count");
    positive("omega_start");
    require(c.real("amplitude") >= 0.0, "amplitude must be >= 0");
    at_least("truncation", 0);
    require(c.real("bin_width") > 0.0 && c.real("bin_width") < 1.0, "bin_width must lie in (0,1)");
  } else if (e == "ssh") {
    const std::string& v = c.text("variant");
    require(v == "all" || v == "topological" || v == "trivial" || v == "domain_wall",
            "variant must be topological, trivial, domain_wall or all");
    at_least("n_cells", 2);
    at_least("radius", 0);
    require(c.real("window") >= 0.0, "window must be >= 0");
  } else if (e == "bbh") {
    at_least("n_x", 2);
    at_least("n_y", 2);
    at_least("radius", 0);
    require(c.real("window") >= 0.0, "window must be >= 0");
  } else if (e == "bounds") {
    const std::string& m = c.text("model");
    require(m == "all" || m == "random-hermitian" || m == "hn" || m == "diag",
            "model must be random-hermitian, hn, diag or all");
    at_least("dim", 2);
    at_least("trials", 1);
    at_least("n_sites", 2);
    positive("r");
    positive("diag_small");
  }
}

/// Defaults, then the file (flat text or JSON manifest), then overrides.
inline RunConfig load_config(const std::string& experiment, const std::optional<std::filesystem::path>& file,
                             const std::vector<std::string>& overrides) {
  RunConfig cfg(experiment);
  if (file) {
    const std::string text = read_text(*file);
    if (file->extension() == ".json") {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(file->string() + ": " + e.what());
      }
      apply_config_json(cfg, doc, file->string());
    } else {
      apply_config_text(cfg, text, file->string());
    }
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  validate(cfg);
  return cfg;
}

/// count evenly spaced points from start to stop inclusive.
inline std::vector<double> linspace(double start, double stop, std::int64_t count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        i + 1 == count ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace genland::experiments
