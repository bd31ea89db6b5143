#pragma once

// One-dimensional parameter scans, finite-difference analysis of the
// non-analyticities at the transition, onset-exponent fits and a finite-size
// crossover estimate from exact diagonalization.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"

namespace dicke::sweep {

using meanfield::Phase;

struct SweepRow {
  double x = 0.0;                 // swept variable
  std::optional<double> rho12_nm;  // physical sweeps only
  double q = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  Phase phase = Phase::Normal;
  double e0_per_N = 0.0;
  double dn_over_N = 0.0;
  double i_over_N = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> e0_per_N_ed;
  std::optional<double> photons_per_N_ed;
  std::optional<double> two_sz_over_N_ed;
  bool mean_field_ok = false;
  std::optional<std::string> error;
};

struct SweepTable {
  std::string variable;  // "rho12_nm", "q" or "lambda"
  std::vector<SweepRow> rows;
  bool has_ed = false;
  std::optional<double> critical;  // transition location in units of `variable`
  double scale = 1.0;              // rad/s per model unit
};

inline std::vector<double> linspace(double from, double to, int steps) {
  if (!(from < to)) throw DomainError("sweep requires from < to");
  if (steps < 3) throw DomainError("sweep requires at least 3 steps");
  std::vector<double> xs(static_cast<std::size_t>(steps));
  const double h = (to - from) / (steps - 1);
  for (int i = 0; i < steps; ++i) xs[static_cast<std::size_t>(i)] = from + i * h;
  xs.back() = to;
  return xs;
}

namespace detail {

inline void fill_meanfield(SweepRow& row, const DickeParams& dp) {
  const meanfield::MeanFieldSolution s = meanfield::solve(dp);
  row.q = dp.q;
  row.lambda = dp.lambda;
  row.delta = s.delta;
  row.phase = s.phase;
  row.e0_per_N = s.e0_per_N;
  row.dn_over_N = s.dn_over_N;
  row.i_over_N = s.i_over_N;
  row.alpha = s.alpha;
  row.beta = s.beta;
  row.mean_field_ok = true;
}

}  // namespace detail

// Mean-field scan over the interspecies scattering length (nm).
inline SweepTable sweep_meanfield(const PhysicalParams& p, double rho12_from_nm, double rho12_to_nm, int steps) {
  const std::vector<double> xs = linspace(rho12_from_nm, rho12_to_nm, steps);
  SweepTable table;
  table.variable = "rho12_nm";
  table.rows.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    SweepRow& row = table.rows[i];
    row.x = xs[i];
    row.rho12_nm = xs[i];
    try {
      PhysicalParams pi = p;
      pi.rho12 = xs[i] * constants::nm;
      detail::fill_meanfield(row, derive_couplings(pi));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  try {
    table.critical = meanfield::critical_rho12(p) / constants::nm;
  } catch (const std::exception&) {
    table.critical.reset();
  }
  return table;
}

namespace detail {

inline DickeParams with_variable(DickeParams dp, const std::string& variable, double value) {
  if (variable == "q")
    dp.q = value;
  else if (variable == "lambda")
    dp.lambda = value;
  else
    throw DomainError("model sweeps support variable q or lambda, got '" + variable + "'");
  return dp;
}

inline void check_sorted(std::span<const double> values) {
  if (values.size() < 3) throw DomainError("sweep requires at least 3 values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw DomainError("sweep values must be strictly increasing");
}

inline std::optional<double> model_critical(const DickeParams& dp, const std::string& variable) {
  if (variable == "q") return meanfield::critical_q(dp);
  // q = omega0 / N - 4 lambda^2 / omega solved for lambda >= 0.
  const double l2 = dp.omega * (dp.omega0 / static_cast<double>(dp.N) - dp.q) / 4.0;
  if (l2 < 0.0) return std::nullopt;
  return std::sqrt(l2);
}

}  // namespace detail

// Mean-field scan of q or lambda in model units.
inline SweepTable sweep_meanfield_model(const DickeParams& base, const std::string& variable,
                                        std::span<const double> values) {
  detail::check_sorted(values);
  SweepTable table;
  table.variable = variable;
  table.scale = base.scale;
  table.critical = detail::model_critical(base, variable);
  table.rows.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow& row = table.rows[i];
    row.x = values[i];
    row.q = variable == "q" ? values[i] : base.q;
    row.lambda = variable == "lambda" ? values[i] : base.lambda;
    try {
      detail::fill_meanfield(row, detail::with_variable(base, variable, values[i]));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return table;
}

// Exact-diagonalization scan with mean-field columns alongside.
inline SweepTable sweep_ed(const DickeParams& base, const std::string& variable, std::span<const double> values,
                           const exactdiag::EDSettings& settings) {
  SweepTable table = sweep_meanfield_model(base, variable, values);
  table.has_ed = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow& row = table.rows[i];
    if (row.error) continue;
    try {
      const exactdiag::EDResult r =
          exactdiag::converged_ground(detail::with_variable(base, variable, values[i]), settings);
      if (!r.converged) {
        row.error = "photon cutoff did not converge below the dimension guard (n_max " +
                    std::to_string(r.n_max_used) + ")";
        continue;
      }
      row.e0_per_N_ed = r.e0_per_N;
      row.photons_per_N_ed = r.photons_per_N;
      row.two_sz_over_N_ed = r.two_sz_over_N;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return table;
}

inline std::optional<double> column_value(const SweepRow& row, const std::string& column) {
  if (column == "x") return row.x;
  if (column == "rho12_nm") return row.rho12_nm;
  if (column == "q") return row.q;
  if (column == "lambda") return row.lambda;
  if (column == "delta") return row.delta;
  if (column == "e0_per_N") return row.e0_per_N;
  if (column == "dn_over_N") return row.dn_over_N;
  if (column == "i_over_N") return row.i_over_N;
  if (column == "alpha") return row.alpha;
  if (column == "beta") return row.beta;
  if (column == "e0_per_N_ed") return row.e0_per_N_ed;
  if (column == "photons_per_N_ed") return row.photons_per_N_ed;
  if (column == "two_sz_over_N_ed") return row.two_sz_over_N_ed;
  throw DomainError("unknown column '" + column + "'");
}

inline std::vector<double> column_values(const SweepTable& table, const std::string& column) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const SweepRow& row : table.rows) {
    if (row.error) throw DomainError("row at " + std::to_string(row.x) + " carries an error: " + *row.error);
    const std::optional<double> v = column_value(row, column);
    if (!v || std::isnan(*v)) throw DomainError("column '" + column + "' is missing at " + std::to_string(row.x));
    out.push_back(*v);
  }
  return out;
}

struct Jump {
  double location = std::numeric_limits<double>::quiet_NaN();
  double jump = 0.0;
  double baseline = 0.0;  // largest jump at least 5 grid steps from `location`
  bool detected = false;  // jump > 10 * baseline
};

struct DerivativeReport {
  std::string variable;
  std::string column;
  double step = 0.0;
  std::vector<double> x;  // interior grid points
  std::vector<double> first_derivative;
  std::vector<double> second_derivative;
  Jump first_jump;
  Jump second_jump;

  // Summary of the lowest-order detected jump.
  double discontinuity_location() const {
    return first_jump.detected ? first_jump.location : second_jump.location;
  }
  double discontinuity_jump() const { return first_jump.detected ? first_jump.jump : second_jump.jump; }
  double smoothness_baseline() const { return first_jump.detected ? first_jump.baseline : second_jump.baseline; }
};

namespace detail {

// Jumps are measured across two samples, |v[j+1] - v[j-1]|: a central
// difference spreads a kink over two neighbouring samples.
inline Jump find_jump(std::span<const double> x, std::span<const double> v) {
  Jump out;
  if (v.size() < 3) return out;
  std::size_t best = 1;
  double best_jump = -1.0;
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    const double d = std::abs(v[j + 1] - v[j - 1]);
    if (d > best_jump) {
      best_jump = d;
      best = j;
    }
  }
  out.location = x[best];
  out.jump = best_jump;
  double baseline = 0.0;
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    const std::size_t dist = j > best ? j - best : best - j;
    if (dist < 5) continue;
    baseline = std::max(baseline, std::abs(v[j + 1] - v[j - 1]));
  }
  out.baseline = baseline;
  out.detected = out.jump > 10.0 * baseline && out.jump > 0.0;
  return out;
}

}  // namespace detail

inline DerivativeReport numeric_derivatives(const SweepTable& table, const std::string& column) {
  if (table.rows.size() < 5) throw DomainError("derivative analysis needs at least 5 rows");
  std::vector<double> xs;
  for (const SweepRow& r : table.rows) xs.push_back(r.x);
  const std::vector<double> ys = column_values(table, column);
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * std::abs(h)) throw DomainError("grid is not uniform");

  DerivativeReport rep;
  rep.variable = table.variable;
  rep.column = column;
  rep.step = h;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    rep.x.push_back(xs[i]);
    rep.first_derivative.push_back((ys[i + 1] - ys[i - 1]) / (2.0 * h));
    rep.second_derivative.push_back((ys[i + 1] - 2.0 * ys[i] + ys[i - 1]) / (h * h));
  }
  rep.first_jump = detail::find_jump(rep.x, rep.first_derivative);
  rep.second_jump = detail::find_jump(rep.x, rep.second_derivative);
  return rep;
}

// Lowest derivative order whose discontinuity persists under halving the grid:
// 1 for a kink in the column, 2 for a jump in the second derivative with a
// continuous first derivative, 0 when neither is found.
struct OrderClassification {
  int order = 0;
  double location = std::numeric_limits<double>::quiet_NaN();
  double first_jump_ratio = 0.0;   // fine / coarse
  double second_jump_ratio = 0.0;
  DerivativeReport coarse;
  DerivativeReport fine;
};

inline OrderClassification classify_order(const SweepTable& coarse, const SweepTable& fine, const std::string& column) {
  OrderClassification c;
  c.coarse = numeric_derivatives(coarse, column);
  c.fine = numeric_derivatives(fine, column);
  if (!(c.fine.step < c.coarse.step)) throw DomainError("the fine table must have a smaller step");
  auto ratio = [](const Jump& f, const Jump& g) { return g.jump > 0.0 ? f.jump / g.jump : 0.0; };
  c.first_jump_ratio = ratio(c.fine.first_jump, c.coarse.first_jump);
  c.second_jump_ratio = ratio(c.fine.second_jump, c.coarse.second_jump);
  // Jumps of a continuous quantity shrink with the step (ratio ~ fine/coarse step).
  auto persists = [](const Jump& f, const Jump& g, double r) { return f.detected && g.detected && r > 0.75; };
  if (persists(c.fine.first_jump, c.coarse.first_jump, c.first_jump_ratio)) {
    c.order = 1;
    c.location = c.fine.first_jump.location;
  } else if (persists(c.fine.second_jump, c.coarse.second_jump, c.second_jump_ratio)) {
    c.order = 2;
    c.location = c.fine.second_jump.location;
  }
  return c;
}

// Mean-field scan over rho12 at `steps` and at the exactly halved spacing, then classified.
inline OrderClassification classify_order(const PhysicalParams& p, double from_nm, double to_nm, int steps,
                                          const std::string& column) {
  return classify_order(sweep_meanfield(p, from_nm, to_nm, steps), sweep_meanfield(p, from_nm, to_nm, 2 * steps - 1),
                        column);
}

struct FitWindow {
  double lo = 0.0;  // distance from the critical point, units of the swept variable
  double hi = 0.0;
};

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
  std::size_t points = 0;
};

// Least-squares slope of log|y - y_normal| against log|x - x_c| on the
// superradiant side. y_normal is the column's value on the normal branch.
inline ExponentFit fit_onset_exponent(const SweepTable& table, const std::string& column, FitWindow window) {
  if (!table.critical) throw DomainError("table carries no critical location");
  if (!(window.lo > 0.0) || !(window.hi > window.lo))
    throw DomainError("fit window must satisfy 0 < lo < hi (the critical point is excluded)");
  const double xc = *table.critical;

  double normal_value = 0.0;
  bool have_normal = false;
  for (const SweepRow& r : table.rows) {
    if (r.error || r.phase != Phase::Normal) continue;
    const std::optional<double> v = column_value(r, column);
    if (!v) continue;
    normal_value = *v;
    have_normal = true;
    break;
  }
  if (!have_normal) normal_value = 0.0;

  std::vector<double> lx, ly;
  for (const SweepRow& r : table.rows) {
    if (r.error || r.phase != Phase::Superradiant) continue;
    const double dist = std::abs(r.x - xc);
    if (dist < window.lo || dist > window.hi) continue;
    const std::optional<double> v = column_value(r, column);
    if (!v) continue;
    const double y = std::abs(*v - normal_value);
    if (!(y >= 1e-14)) continue;
    lx.push_back(std::log(dist));
    ly.push_back(std::log(y));
  }
  if (lx.size() < 4)
    throw DomainError("onset fit needs at least 4 usable points in the window, found " + std::to_string(lx.size()));

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.points = lx.size();
  return fit;
}

// Swept value at the peak of |d column / dx| (a susceptibility peak).
inline double locate_crossover(const SweepTable& table, const std::string& column) {
  if (table.rows.size() < 7) throw DomainError("crossover location needs at least 7 rows");
  const std::vector<double> ys = column_values(table, column);
  std::vector<double> d;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i)
    d.push_back(std::abs((ys[i + 1] - ys[i - 1]) / (table.rows[i + 1].x - table.rows[i - 1].x)));
  const auto it = std::max_element(d.begin(), d.end());
  const auto j = static_cast<std::size_t>(it - d.begin());
  if (j == 0 || j + 1 == d.size()) throw DomainError("susceptibility has no interior maximum in the sweep range");
  return table.rows[j + 1].x;
}

inline double locate_crossover_ed(const SweepTable& table, const std::string& column = "two_sz_over_N_ed") {
  if (!table.has_ed) throw DomainError("table has no exact-diagonalization columns");
  return locate_crossover(table, column);
}

}  // namespace dicke::sweep
