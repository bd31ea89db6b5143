#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "common.hpp"
#include "dicke/io.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;
using namespace dicke::sweep;
using testing_support::reference_params;
using testing_support::scaled;

namespace {

// Log-log slope of I/N against distance, recomputed from scratch on the same grid.
double oracle_exponent(double lo, double hi) {
  const PhysicalParams p = reference_params();
  const double hb = constants::hbar;
  const double dx = std::sqrt(hb / (p.mass * p.omega_x)), dy = std::sqrt(hb / (p.mass * p.omega_y)),
               dz = std::sqrt(hb / (p.mass * p.omega_z));
  const double c = 4.0 * constants::pi * hb / p.mass / std::pow(2.0 * constants::pi, 1.5) / (dx * dy * dz);
  const double n = static_cast<double>(p.N);
  const double w = p.omega_cavity, l = p.lambda, w0 = n * c * (p.rho2 - p.rho1) / 2.0;
  const double rc = 0.5 * (p.rho1 + p.rho2) - (w0 / n - 4.0 * l * l / w) / c;
  std::vector<double> lx, ly;
  for (int i = 0; i < 501; ++i) {
    const double r = (4.0 + 5.0 * i / 500.0) * constants::nm;
    const double dist = std::abs(r - rc) / constants::nm;
    if (r >= rc || dist < lo || dist > hi) continue;
    const double q = c * (0.5 * (p.rho1 + p.rho2) - r);
    const double d = w * w0 / (n * (4.0 * l * l + w * q));
    lx.push_back(std::log(dist));
    ly.push_back(std::log(n * l * l * (1.0 - d * d) / (w * w)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= lx.size();
  my /= lx.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
  return sxy / sxx;
}

}  // namespace

TEST(Sweep, LinspacePreconditions) {
  EXPECT_THROW(linspace(4.0, 9.0, 2), DomainError);
  EXPECT_THROW(linspace(9.0, 4.0, 10), DomainError);
  const std::vector<double> xs = linspace(4.0, 9.0, 501);
  EXPECT_EQ(xs.size(), 501u);
  EXPECT_DOUBLE_EQ(xs[100], 5.0);
  EXPECT_EQ(xs.back(), 9.0);
}

TEST(Sweep, ReferenceSweepTransition) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  ASSERT_TRUE(t.critical);
  EXPECT_NEAR(*t.critical, 7.14, 0.01);
  for (const SweepRow& r : t.rows) {
    ASSERT_TRUE(r.mean_field_ok);
    EXPECT_EQ(r.phase == meanfield::Phase::Superradiant, r.x < *t.critical);
  }
}

TEST(Sweep, OrderClassification) {
  const PhysicalParams p = reference_params();
  const OrderClassification e = classify_order(p, 4.0, 9.0, 501, "e0_per_N");
  EXPECT_EQ(e.order, 2);
  EXPECT_LT(e.first_jump_ratio, 0.75);
  EXPECT_NEAR(e.location, 7.14, 0.01);
  for (const char* col : {"i_over_N", "dn_over_N"}) {
    const OrderClassification c = classify_order(p, 4.0, 9.0, 501, col);
    EXPECT_EQ(c.order, 1) << col;
    EXPECT_NEAR(c.location, 7.14, 0.01) << col;
  }
  // A smooth column has no transition.
  EXPECT_EQ(classify_order(p, 4.0, 9.0, 501, "q").order, 0);
}

TEST(Sweep, OnsetExponent) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  const ExponentFit f = fit_onset_exponent(t, "i_over_N", {0.001, 0.05});
  EXPECT_NEAR(f.exponent, oracle_exponent(0.001, 0.05), 1e-9);
  EXPECT_NEAR(f.exponent, 1.0, 0.05);
  EXPECT_EQ(f.points, 5u);
  EXPECT_GE(f.r_squared, 0.999);
  EXPECT_LE(f.r_squared, 1.0);
  // Population imbalance onsets linearly too, measured from its normal value -1.
  EXPECT_NEAR(fit_onset_exponent(t, "dn_over_N", {0.001, 0.05}).exponent, 1.0, 0.05);
}

TEST(Sweep, ExponentStableNearCriticalPoint) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  for (double lo : {0.005, 0.01}) {
    for (double hi : {0.045, 0.05}) {
      const ExponentFit f = fit_onset_exponent(t, "i_over_N", {lo, hi});
      EXPECT_NEAR(f.exponent, 1.0, 0.05) << lo << "-" << hi;
      EXPECT_NEAR(f.exponent, oracle_exponent(lo, hi), 1e-9);
    }
  }
}

// Far from the critical point 1 - delta^2 bends over and the local slope drops.
TEST(Sweep, ExponentDriftsOnWideWindows) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  const double wide = fit_onset_exponent(t, "i_over_N", {0.005, 0.25}).exponent;
  EXPECT_NEAR(wide, oracle_exponent(0.005, 0.25), 1e-9);
  EXPECT_LT(wide, fit_onset_exponent(t, "i_over_N", {0.005, 0.05}).exponent);
}

TEST(Sweep, FitErrors) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  EXPECT_THROW(fit_onset_exponent(t, "i_over_N", {0.0, 0.05}), DomainError);
  EXPECT_THROW(fit_onset_exponent(t, "i_over_N", {0.001, 0.01}), DomainError);
  EXPECT_THROW(fit_onset_exponent(t, "no_such_column", {0.001, 0.05}), DomainError);
  // Identically zero on the superradiant side: no usable points.
  PhysicalParams p = reference_params();
  SweepTable z = sweep_meanfield(p, 4.0, 9.0, 501);
  for (SweepRow& r : z.rows) r.i_over_N = 0.0;
  EXPECT_THROW(fit_onset_exponent(z, "i_over_N", {0.001, 0.05}), DomainError);
}

TEST(Sweep, ModelSweepCarriesCritical) {
  const DickeParams base = scaled(1.0, 0.0, 0.1, 100);
  const std::vector<double> qs = linspace(-0.1, 0.1, 21);
  const SweepTable t = sweep_meanfield_model(base, "q", qs);
  ASSERT_TRUE(t.critical);
  EXPECT_DOUBLE_EQ(*t.critical, meanfield::critical_q(base));
  const std::vector<double> unsorted{0.1, 0.0, 0.2};
  EXPECT_THROW(sweep_meanfield_model(base, "q", unsorted), DomainError);
  const std::vector<double> ls = linspace(0.01, 0.2, 20);
  const SweepTable tl = sweep_meanfield_model(base, "lambda", ls);
  EXPECT_NEAR(*tl.critical, 0.05, 1e-15);
}

TEST(Sweep, LocateCrossoverMeanField) {
  const SweepTable t = sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  EXPECT_NEAR(locate_crossover(t, "dn_over_N"), *t.critical, 0.02);
}

TEST(Sweep, EdSweepCrossover) {
  const DickeParams base = scaled(1.0, 0.0, 0.1, 16);
  const std::vector<double> ls = linspace(0.05, 0.5, 46);
  const SweepTable t = sweep_ed(base, "lambda", ls, {});
  ASSERT_TRUE(t.has_ed);
  for (const SweepRow& r : t.rows) ASSERT_FALSE(r.error) << *r.error;
  const double x = locate_crossover_ed(t);
  // Finite N shifts the peak above lambda_c by roughly 15-20% at N = 16.
  EXPECT_GT(x, 0.125);
  EXPECT_LE(x, 1.25 * 0.125);
  // Entirely superradiant range: the peak sits on the boundary.
  const std::vector<double> deep = linspace(0.3, 0.5, 9);
  EXPECT_THROW(locate_crossover_ed(sweep_ed(base, "lambda", deep, {})), DomainError);
  EXPECT_THROW(locate_crossover_ed(sweep_meanfield(reference_params(), 4.0, 9.0, 51)), DomainError);
}

TEST(Sweep, ErrorRowsAreKeptAndRefuseAnalysis) {
  SweepTable t = sweep_meanfield(reference_params(), 4.0, 6.0, 5);
  t.rows[2].mean_field_ok = false;
  t.rows[2].error = "injected";
  std::ostringstream csv;
  io::write_csv(csv, t);
  EXPECT_NE(csv.str().find("5,,,error,,,,,\n"), std::string::npos) << csv.str();
  EXPECT_THROW(column_values(t, "e0_per_N"), DomainError);
  const auto doc = io::table_json(t, nlohmann::ordered_json::object());
  EXPECT_TRUE(doc["rows"][2]["e0_per_N"].is_null());
  EXPECT_EQ(doc["rows"][2]["error"], "injected");
}

TEST(Sweep, CsvIsDeterministic) {
  std::ostringstream a, b;
  io::write_csv(a, sweep_meanfield(reference_params(), 4.0, 9.0, 101));
  io::write_csv(b, sweep_meanfield(reference_params(), 4.0, 9.0, 101));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "rho12_nm,q,delta,phase,e0_per_N,dn_over_N,i_over_N,alpha,beta");
}

TEST(Io, ShortestRoundTripFormatting) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(-1.0625), "-1.0625");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(io::format_double(v)), v);
}
