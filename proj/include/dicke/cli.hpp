#pragma once

// Subcommand implementations behind tools/dicke.cpp. Each command takes a
// resolved RunConfig, writes its report to `out` (diagnostics to `err`) and
// returns the process exit code.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dicke/config.hpp"
#include "dicke/errors.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/io.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"
#include "dicke/sweep.hpp"

namespace dicke::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

using ordered_json = nlohmann::ordered_json;
using config::RunConfig;

namespace detail {

class Report {
 public:
  explicit Report(bool json) : json_(json) {}

  template <class T>
  void add(const std::string& key, const T& value) {
    doc_[key] = value;
    order_.push_back(key);
  }
  void add_number(const std::string& key, double v) { add(key, io::number_or_null(v)); }

  void emit(std::ostream& out, const ordered_json& metadata) const {
    if (json_) {
      ordered_json doc;
      doc["metadata"] = metadata;
      doc["result"] = doc_;
      out << doc.dump(2) << '\n';
      return;
    }
    out << "config " << metadata.at("config").dump() << '\n';
    std::size_t width = 0;
    for (const auto& k : order_) width = std::max(width, k.size());
    for (const auto& k : order_) {
      const ordered_json& v = doc_.at(k);
      std::string text;
      if (v.is_number_float())
        text = io::format_double(v.get<double>());
      else if (v.is_string())
        text = v.get<std::string>();
      else
        text = v.dump();
      out << std::left << std::setw(static_cast<int>(width) + 2) << k << text << '\n';
    }
  }

 private:
  bool json_;
  ordered_json doc_ = ordered_json::object();
  std::vector<std::string> order_;
};

inline ordered_json metadata(const RunConfig& cfg, double scale = 1.0) {
  const ordered_json resolved = config::resolved(cfg);
  ordered_json m;
  m["version"] = io::kVersion;
  m["config_hash"] = io::config_hash(resolved.dump());
  m["scale"] = scale;
  m["config"] = resolved;
  return m;
}

inline bool wants_json(const RunConfig& cfg) { return cfg.output.format == "json"; }

// Model parameters for ED-style commands: the model block as given, or the
// physical couplings rescaled to omega = 1.
inline DickeParams model_params(const RunConfig& cfg, std::ostream& err) {
  if (cfg.model) return *cfg.model;
  if (!cfg.physical) throw ConfigError("command needs physical parameters or a 'model' block");
  const DickeParams si = derive_couplings(*cfg.physical);
  err << "warning: SI parameters rescaled by omega = " << io::format_double(si.omega)
      << " rad/s; with far off-resonant SI couplings photon observables are numerically degenerate\n";
  return si.rescaled(si.omega);
}

inline int write_table(const RunConfig& cfg, const sweep::SweepTable& table, const ordered_json& meta,
                       std::ostream& out, std::ostream& err) {
  auto emit = [&](std::ostream& os) {
    if (wants_json(cfg))
      os << io::table_json(table, meta).dump(2) << '\n';
    else
      io::write_csv(os, table);
  };
  if (!cfg.output.path) {
    emit(out);
    return kOk;
  }
  std::ofstream file(*cfg.output.path, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << *cfg.output.path << "' for writing\n";
    return kIoError;
  }
  emit(file);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << *cfg.output.path << "'\n";
    return kIoError;
  }
  return kOk;
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  if (cfg.output.format.empty()) return;
  for (const char* a : allowed)
    if (cfg.output.format == a) return;
  throw ConfigError("unsupported output format '" + cfg.output.format + "'");
}

inline sweep::SweepTable physical_sweep(RunConfig& cfg) {
  if (!cfg.physical) throw ConfigError("sweep needs physical parameters");
  if (!cfg.sweep.from || !cfg.sweep.to) throw ConfigError("sweep needs 'from' and 'to' (nm)");
  if (!cfg.sweep.steps) cfg.sweep.steps = 501;
  return sweep::sweep_meanfield(*cfg.physical, *cfg.sweep.from, *cfg.sweep.to, *cfg.sweep.steps);
}

}  // namespace detail

inline int cmd_derive(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "text"});
  if (!cfg.physical) throw ConfigError("derive needs physical parameters");
  const PhysicalParams& p = *cfg.physical;
  const DickeParams dp = derive_couplings(p);
  const TrapLengths d = harmonic_lengths(p);
  if (!cfg.two_mode.rho_typical) cfg.two_mode.rho_typical = std::max({p.rho1, p.rho2, p.rho12});
  const ValidityVerdict v = two_mode_validity(p.N, *cfg.two_mode.rho_typical, cfg.two_mode.r0);

  detail::Report r(detail::wants_json(cfg));
  r.add_number("d_x_m", d.d_x);
  r.add_number("d_y_m", d.d_y);
  r.add_number("d_z_m", d.d_z);
  r.add_number("coupling_scale_rad_s_per_nm", coupling_scale(p) * constants::nm);
  r.add_number("omega_cavity_rad_s", dp.omega);
  r.add_number("lambda_rad_s", dp.lambda);
  r.add_number("omega0_rad_s", dp.omega0);
  r.add_number("q_rad_s", dp.q);
  r.add_number("q_c_rad_s", meanfield::critical_q(dp));
  r.add_number("rho12_c_nm", meanfield::critical_rho12(p) / constants::nm);
  try {
    r.add_number("delta", meanfield::delta(dp));
  } catch (const SingularParameterError& e) {
    r.add("delta", nullptr);
    err << "warning: " << e.what() << '\n';
  }
  r.add("phase", std::string(meanfield::phase_name(meanfield::classify(dp))));
  r.add("two_mode_valid", v.valid);
  r.add_number("two_mode_margin_m", v.margin);
  r.emit(out, detail::metadata(cfg));
  return kOk;
}

inline int cmd_meanfield(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "text"});
  DickeParams dp;
  if (cfg.model)
    dp = *cfg.model;
  else if (cfg.physical)
    dp = derive_couplings(*cfg.physical);
  else
    throw ConfigError("meanfield needs physical parameters or a 'model' block");

  const meanfield::MeanFieldSolution s = meanfield::solve(dp);
  detail::Report r(detail::wants_json(cfg));
  r.add_number("q", dp.q);
  r.add_number("q_c", meanfield::critical_q(dp));
  r.add_number("delta", s.delta);
  if (std::isnan(s.delta)) err << "warning: 4 lambda^2 + omega q = 0, delta undefined; phase from q vs q_c\n";
  r.add("phase", std::string(meanfield::phase_name(s.phase)));
  r.add_number("alpha", s.alpha);
  r.add_number("beta", s.beta);
  r.add_number("e0_per_N", s.e0_per_N);
  if (s.phase == meanfield::Phase::Critical) {
    r.add_number("e0_per_N_normal", -dp.omega0 / 2.0);
    double sup = std::numeric_limits<double>::quiet_NaN();
    try {
      sup = meanfield::superradiant_branch_energy_per_atom(dp);
    } catch (const SingularParameterError&) {
    }
    r.add_number("e0_per_N_superradiant", sup);
  }
  r.add_number("dn_over_N", s.dn_over_N);
  r.add_number("i_over_N", s.i_over_N);
  r.emit(out, detail::metadata(cfg));
  return kOk;
}

inline int cmd_ed(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "text"});
  const DickeParams dp = detail::model_params(cfg, err);
  exactdiag::EDResult res;
  try {
    res = exactdiag::converged_ground(dp, cfg.ed);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << io::format_double(e.residual()) << ")\n";
    return kNumericalError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  detail::Report r(detail::wants_json(cfg));
  r.add("N", dp.N);
  r.add_number("e0", res.e0);
  r.add_number("e0_per_N", res.e0_per_N);
  r.add_number("sz_mean", res.sz_mean);
  r.add_number("two_sz_over_N", res.two_sz_over_N);
  r.add_number("photons_per_N", res.photons_per_N);
  r.add_number("a_mean_abs", res.a_mean_abs);
  r.add_number("parity", res.parity);
  r.add("n_max_used", res.n_max_used);
  r.add("dimension", res.dimension);
  r.add("converged", res.converged);
  r.add_number("tail_occupancy", res.tail_occupancy);
  r.add_number("residual", res.residual);
  r.add("degeneracy", res.degeneracy);
  r.add("degeneracy_sensitive", res.degeneracy_sensitive);
  r.add_number("e0_per_N_meanfield", meanfield::ed_reference_energy_per_atom(dp));
  r.emit(out, detail::metadata(cfg, dp.scale));
  if (!res.converged) {
    err << "error: photon cutoff did not converge within the dimension guard (n_max " << res.n_max_used
        << ", tail " << io::format_double(res.tail_occupancy) << ")\n";
    return kNumericalError;
  }
  return kOk;
}

inline int cmd_sweep(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "csv"});
  const sweep::SweepTable table = detail::physical_sweep(cfg);
  const ordered_json meta = detail::metadata(cfg);
  if (const int rc = detail::write_table(cfg, table, meta, out, err); rc != kOk) return rc;

  std::ostream& summary = cfg.output.path ? out : err;
  summary << "config " << meta.at("config").dump() << '\n';
  if (table.critical) summary << "critical rho12_nm " << io::format_double(*table.critical) << '\n';
  for (const char* column : {"e0_per_N", "dn_over_N", "i_over_N"}) {
    try {
      const sweep::OrderClassification c =
          sweep::classify_order(*cfg.physical, *cfg.sweep.from, *cfg.sweep.to, *cfg.sweep.steps, column);
      const char* label = c.order == 1 ? "first-order" : c.order == 2 ? "second-order" : "none";
      summary << "transition " << column << ' ' << label;
      if (c.order != 0) summary << " at rho12_nm " << io::format_double(c.location);
      summary << '\n';
    } catch (const DomainError& e) {
      summary << "transition " << column << " unavailable: " << e.what() << '\n';
    }
  }
  if (cfg.sweep.window) {
    const std::string column = cfg.sweep.column.empty() ? "i_over_N" : cfg.sweep.column;
    const sweep::ExponentFit f = sweep::fit_onset_exponent(table, column, *cfg.sweep.window);
    summary << "exponent " << column << ' ' << io::format_double(f.exponent) << " r2 "
            << io::format_double(f.r_squared) << '\n';
  }
  return kOk;
}

inline int cmd_ed_sweep(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "csv"});
  const DickeParams base = detail::model_params(cfg, err);
  if (cfg.sweep.variable.empty()) cfg.sweep.variable = "lambda";
  std::vector<double> values = cfg.sweep.values;
  if (values.empty()) {
    if (!cfg.sweep.from || !cfg.sweep.to) throw ConfigError("ed-sweep needs 'from' and 'to' or explicit 'values'");
    if (!cfg.sweep.steps) cfg.sweep.steps = 41;
    values = sweep::linspace(*cfg.sweep.from, *cfg.sweep.to, *cfg.sweep.steps);
  }
  if (cfg.sweep.column.empty()) cfg.sweep.column = "two_sz_over_N_ed";
  const sweep::SweepTable table = sweep::sweep_ed(base, cfg.sweep.variable, values, cfg.ed);
  const ordered_json meta = detail::metadata(cfg, base.scale);
  if (const int rc = detail::write_table(cfg, table, meta, out, err); rc != kOk) return rc;

  std::ostream& summary = cfg.output.path ? out : err;
  summary << "config " << meta.at("config").dump() << '\n';
  bool failed = false;
  for (const sweep::SweepRow& row : table.rows)
    if (row.error) {
      summary << "row " << io::format_double(row.x) << " failed: " << *row.error << '\n';
      failed = true;
    }
  if (table.critical) summary << "meanfield critical " << cfg.sweep.variable << ' ' << io::format_double(*table.critical) << '\n';
  try {
    summary << "crossover " << cfg.sweep.variable << ' '
            << io::format_double(sweep::locate_crossover_ed(table, cfg.sweep.column)) << " (peak of |d "
            << cfg.sweep.column << "/d " << cfg.sweep.variable << "|)\n";
  } catch (const DomainError& e) {
    summary << "crossover unavailable: " << e.what() << '\n';
  }
  return failed ? kNumericalError : kOk;
}

inline int cmd_fit(RunConfig cfg, std::ostream& out, std::ostream& err) {
  detail::require_format(cfg, {"json", "csv", "text"});
  if (cfg.sweep.column.empty()) cfg.sweep.column = "i_over_N";
  if (!cfg.sweep.window) cfg.sweep.window = sweep::FitWindow{0.001, 0.05};
  const sweep::SweepTable table = detail::physical_sweep(cfg);
  const sweep::ExponentFit f = sweep::fit_onset_exponent(table, cfg.sweep.column, *cfg.sweep.window);
  const ordered_json meta = detail::metadata(cfg);
  if (cfg.output.path) {
    RunConfig table_cfg = cfg;
    if (table_cfg.output.format == "text") table_cfg.output.format = "csv";
    if (const int rc = detail::write_table(table_cfg, table, meta, out, err); rc != kOk) return rc;
  }
  detail::Report r(detail::wants_json(cfg));
  r.add("column", cfg.sweep.column);
  r.add_number("critical_rho12_nm", *table.critical);
  r.add_number("window_lo_nm", f.window.lo);
  r.add_number("window_hi_nm", f.window.hi);
  r.add("points", f.points);
  r.add_number("exponent_zv", f.exponent);
  r.add_number("intercept", f.intercept);
  r.add_number("r_squared", f.r_squared);
  r.emit(out, meta);
  return kOk;
}

// Command-line flags layered over the configuration file.
struct Overrides {
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> steps;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> column;
  std::optional<std::string> variable;
  std::optional<sweep::FitWindow> window;
};

inline void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.from) cfg.sweep.from = *o.from;
  if (o.to) cfg.sweep.to = *o.to;
  if (o.steps) cfg.sweep.steps = *o.steps;
  if (o.out) cfg.output.path = *o.out;
  if (o.format) cfg.output.format = *o.format;
  if (o.column) cfg.sweep.column = *o.column;
  if (o.variable) cfg.sweep.variable = *o.variable;
  if (o.window) cfg.sweep.window = *o.window;
  if ((o.from || o.to || o.steps) && !cfg.sweep.values.empty()) cfg.sweep.values.clear();
}

// Runs `command` and maps library exceptions to exit codes.
template <class Command>
int guarded(Command&& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SingularParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << io::format_double(e.residual()) << ")\n";
    return kNumericalError;
  }
}

}  // namespace dicke::cli
