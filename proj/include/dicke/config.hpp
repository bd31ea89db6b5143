#pragma once

// JSON run configuration. Physical inputs use the keys
//   trap{fx_hz, fy_hz, fz_hz}, mass_kg, rho1_nm, rho2_nm, rho12_nm, N,
//   omega_cavity_hz, lambda_hz, frequencies_are_linear
// and model-unit inputs the block model{omega, omega0, q, lambda, N}.
// When frequencies_are_linear is true every *_hz value is multiplied by 2 pi.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dicke/constants.hpp"
#include "dicke/errors.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/model.hpp"
#include "dicke/sweep.hpp"

namespace dicke::config {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct SweepSettings {
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> steps;
  std::string variable;  // empty: command default
  std::string column;    // empty: command default
  std::optional<sweep::FitWindow> window;
  std::vector<double> values;  // explicit grid for model sweeps, overrides from/to/steps
};

struct OutputSettings {
  std::optional<std::string> path;
  std::string format;  // "csv", "json" or empty for the command default
};

struct TwoModeCheck {
  double r0 = 10e-6;                    // m
  std::optional<double> rho_typical;  // m; defaults to max(rho1, rho2, rho12)
};

struct RunConfig {
  std::optional<PhysicalParams> physical;
  std::optional<DickeParams> model;
  bool frequencies_are_linear = false;
  SweepSettings sweep;
  exactdiag::EDSettings ed;
  OutputSettings output;
  TwoModeCheck two_mode;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError("missing required key '" + where + key + "'");
  return obj.at(key);
}

inline double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("key '" + name + "' must be a number");
  return v.get<double>();
}

inline long integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("key '" + name + "' must be an integer");
  return v.get<long>();
}

inline double req_number(const json& obj, const std::string& key, const std::string& where = "") {
  return number(require(obj, key, where), where + key);
}

inline double opt_number(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj.at(key), key) : fallback;
}

inline bool has_physical_keys(const json& doc) {
  for (const char* k : {"trap", "mass_kg", "rho1_nm", "rho2_nm", "rho12_nm", "omega_cavity_hz", "lambda_hz"})
    if (doc.contains(k)) return true;
  return false;
}

}  // namespace detail

inline RunConfig parse(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  using namespace detail;

  const bool physical = has_physical_keys(doc);
  const bool model = doc.contains("model");
  if (physical && model) throw ConfigError("provide either physical parameters or a 'model' block, not both");

  if (physical) {
    const json& flag = require(doc, "frequencies_are_linear", "");
    if (!flag.is_boolean()) throw ConfigError("key 'frequencies_are_linear' must be a boolean");
    cfg.frequencies_are_linear = flag.get<bool>();
    const double to_angular = cfg.frequencies_are_linear ? 2.0 * constants::pi : 1.0;
    const json& trap = require(doc, "trap", "");
    PhysicalParams p;
    p.omega_x = req_number(trap, "fx_hz", "trap.") * to_angular;
    p.omega_y = req_number(trap, "fy_hz", "trap.") * to_angular;
    p.omega_z = req_number(trap, "fz_hz", "trap.") * to_angular;
    p.mass = req_number(doc, "mass_kg");
    p.rho1 = req_number(doc, "rho1_nm") * constants::nm;
    p.rho2 = req_number(doc, "rho2_nm") * constants::nm;
    p.rho12 = req_number(doc, "rho12_nm") * constants::nm;
    p.N = integer(require(doc, "N", ""), "N");
    p.omega_cavity = req_number(doc, "omega_cavity_hz") * to_angular;
    p.lambda = req_number(doc, "lambda_hz") * to_angular;
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("invalid physical parameters: ") + e.what());
    }
    cfg.physical = p;
  }

  if (model) {
    const json& m = doc.at("model");
    DickeParams dp;
    dp.omega = req_number(m, "omega", "model.");
    dp.omega0 = req_number(m, "omega0", "model.");
    dp.q = req_number(m, "q", "model.");
    dp.lambda = req_number(m, "lambda", "model.");
    dp.N = integer(require(m, "N", "model."), "model.N");
    dp.dimensionless = true;
    try {
      dp.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("invalid model parameters: ") + e.what());
    }
    cfg.model = dp;
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (s.contains("from")) cfg.sweep.from = number(s.at("from"), "sweep.from");
    if (s.contains("to")) cfg.sweep.to = number(s.at("to"), "sweep.to");
    if (s.contains("steps")) cfg.sweep.steps = static_cast<int>(integer(s.at("steps"), "sweep.steps"));
    if (s.contains("variable")) cfg.sweep.variable = s.at("variable").get<std::string>();
    if (s.contains("column")) cfg.sweep.column = s.at("column").get<std::string>();
    if (s.contains("window")) {
      const json& w = s.at("window");
      if (!w.is_array() || w.size() != 2) throw ConfigError("key 'sweep.window' must be [lo, hi]");
      cfg.sweep.window = sweep::FitWindow{number(w[0], "sweep.window[0]"), number(w[1], "sweep.window[1]")};
    }
    if (s.contains("values")) {
      for (const json& v : s.at("values")) cfg.sweep.values.push_back(number(v, "sweep.values"));
    }
  }

  if (doc.contains("ed")) {
    const json& e = doc.at("ed");
    cfg.ed.tol = opt_number(e, "tol", cfg.ed.tol);
    cfg.ed.tail_tol = opt_number(e, "tail_tol", cfg.ed.tail_tol);
    if (e.contains("n_max_start")) cfg.ed.n_max_start = integer(e.at("n_max_start"), "ed.n_max_start");
    cfg.ed.max_dimension = opt_number(e, "max_dimension", cfg.ed.max_dimension);
    if (!(cfg.ed.tol > 0.0) || !(cfg.ed.tail_tol > 0.0)) throw ConfigError("ED tolerances must be positive");
    if (cfg.ed.n_max_start < 0) throw ConfigError("key 'ed.n_max_start' must be non-negative");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (o.contains("path")) cfg.output.path = o.at("path").get<std::string>();
    if (o.contains("format")) cfg.output.format = o.at("format").get<std::string>();
  }

  if (doc.contains("two_mode")) {
    const json& t = doc.at("two_mode");
    if (t.contains("r0_um")) cfg.two_mode.r0 = number(t.at("r0_um"), "two_mode.r0_um") * 1e-6;
    if (t.contains("rho_typical_nm"))
      cfg.two_mode.rho_typical = number(t.at("rho_typical_nm"), "two_mode.rho_typical_nm") * constants::nm;
  }
  return cfg;
}

inline RunConfig parse_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  try {
    return parse(doc);
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("wrong value type in configuration: ") + e.what());
  }
}

// Fully resolved configuration, defaults included, in SI and model units.
inline ordered_json resolved(const RunConfig& cfg) {
  ordered_json out;
  if (cfg.physical) {
    const PhysicalParams& p = *cfg.physical;
    out["physical"] = {
        {"omega_x_rad_s", p.omega_x},
        {"omega_y_rad_s", p.omega_y},
        {"omega_z_rad_s", p.omega_z},
        {"mass_kg", p.mass},
        {"rho1_nm", p.rho1 / constants::nm},
        {"rho2_nm", p.rho2 / constants::nm},
        {"rho12_nm", p.rho12 / constants::nm},
        {"N", p.N},
        {"omega_cavity_rad_s", p.omega_cavity},
        {"lambda_rad_s", p.lambda},
        {"frequencies_are_linear", cfg.frequencies_are_linear},
    };
  }
  if (cfg.model) {
    const DickeParams& m = *cfg.model;
    out["model"] = {{"omega", m.omega}, {"omega0", m.omega0}, {"q", m.q}, {"lambda", m.lambda}, {"N", m.N}};
  }
  ordered_json sw;
  sw["from"] = cfg.sweep.from ? ordered_json(*cfg.sweep.from) : ordered_json(nullptr);
  sw["to"] = cfg.sweep.to ? ordered_json(*cfg.sweep.to) : ordered_json(nullptr);
  sw["steps"] = cfg.sweep.steps ? ordered_json(*cfg.sweep.steps) : ordered_json(nullptr);
  sw["variable"] = cfg.sweep.variable;
  sw["column"] = cfg.sweep.column;
  sw["window"] = cfg.sweep.window ? ordered_json::array({cfg.sweep.window->lo, cfg.sweep.window->hi})
                                  : ordered_json(nullptr);
  if (!cfg.sweep.values.empty()) sw["values"] = cfg.sweep.values;
  out["sweep"] = sw;
  out["ed"] = {{"tol", cfg.ed.tol},
               {"tail_tol", cfg.ed.tail_tol},
               {"n_max_start", cfg.ed.n_max_start},
               {"max_dimension", cfg.ed.max_dimension}};
  out["output"] = {{"path", cfg.output.path ? ordered_json(*cfg.output.path) : ordered_json(nullptr)},
                   {"format", cfg.output.format}};
  out["two_mode"] = {{"r0_um", cfg.two_mode.r0 * 1e6},
                     {"rho_typical_nm", cfg.two_mode.rho_typical ? ordered_json(*cfg.two_mode.rho_typical / constants::nm)
                                                                 : ordered_json(nullptr)}};
  return out;
}

}  // namespace dicke::config
