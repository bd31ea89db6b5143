// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "dicke/dicke.hpp"

using namespace dicke;
using testing_support::reference_params;
using testing_support::rel;
using testing_support::scaled;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const PhysicalParams p = reference_params();
  const DickeParams dp = derive_couplings(p);
  const double w0 = dp.omega0, qc = meanfield::critical_q(dp), rc = meanfield::critical_rho12(p) / constants::nm;
  const double t = seconds_since(t0);
  const bool ok = rel(w0, 2866.0) <= 0.01 && rel(qc, -7.0) <= 0.05 && rel(rc, 7.14) <= 0.01 && t < 1.0;
  report(1, ok, fmt("omega0 = %.2f (2866 +-1%%), q_c = %.3f (-7 +-5%%), rho12_c = %.4f nm (7.14 +-1%%), %.3f s", w0, qc,
                    rc, t));
}

void criterion2() {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    DickeParams dp;
    dp.omega = 0.2 + 3.0 * u(gen);
    dp.omega0 = 0.05 + 3.0 * u(gen);
    dp.N = 1 + static_cast<long>(2000 * u(gen));
    dp.lambda = 0.5 * u(gen);
    dp.q = meanfield::critical_q(dp) - (1e-8 + 5.0 * u(gen));
    const meanfield::MeanFieldSolution s = meanfield::solve(dp);
    if (!(s.phase == meanfield::Phase::Normal && s.e0_per_N == -dp.omega0 / 2.0 && s.dn_over_N == -1.0 &&
          s.i_over_N == 0.0))
      ++bad;
  }
  report(2, bad == 0, fmt("100 normal points, %d violate E0/N = -omega0/2, dN/N = -1, I/N = 0 exactly", bad));
}

void criterion3() {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_h1 = 0.0, worst_ab = 0.0;
  for (int i = 0; i < 1000; ++i) {
    DickeParams dp;
    dp.omega = 0.5 + 1.5 * u(gen);
    dp.omega0 = 0.1 + 1.9 * u(gen);
    dp.N = 10 + static_cast<long>(990 * u(gen));
    dp.lambda = 0.02 + 0.5 * u(gen) / std::sqrt(static_cast<double>(dp.N));
    const double d = 0.02 + 0.96 * u(gen);
    dp.q = (dp.omega * dp.omega0 / (static_cast<double>(dp.N) * d) - 4.0 * dp.lambda * dp.lambda) / dp.omega;
    const meanfield::MeanFieldSolution s = meanfield::solve(dp);
    const meanfield::ExpansionCoefficients c = meanfield::expansion_coefficients(dp, s.alpha, s.beta);
    const double sk = std::sqrt(c.k), b2 = s.beta * s.beta;
    const double sc = dp.omega * s.alpha + 2.0 * c.g * s.beta * sk;
    const double sd = dp.omega0 * s.beta + (2.0 * c.g * s.alpha + std::abs(c.nu) * s.beta * sk) * std::abs(sk - b2 / sk);
    worst_h1 = std::max({worst_h1, std::abs(c.h1_c) / sc, std::abs(c.h1_d) / sd});
    const meanfield::H0Minimum m = meanfield::minimize_h0(dp);
    worst_ab = std::max({worst_ab, std::abs(m.alpha - s.alpha) / std::max(1.0, s.alpha), std::abs(m.beta - s.beta)});
  }
  report(3, worst_h1 <= 1e-10 && worst_ab <= 1e-6,
         fmt("1000 superradiant points, max relative H1 = %.2e (<= 1e-10), max |closed form - H0 minimum| = %.2e (<= 1e-6)",
             worst_h1, worst_ab));
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const PhysicalParams p = reference_params();
  const sweep::OrderClassification e = sweep::classify_order(p, 4.0, 9.0, 501, "e0_per_N");
  const sweep::OrderClassification i = sweep::classify_order(p, 4.0, 9.0, 501, "i_over_N");
  const sweep::OrderClassification n = sweep::classify_order(p, 4.0, 9.0, 501, "dn_over_N");
  const double t = seconds_since(t0);
  const bool ok = e.order == 2 && i.order == 1 && n.order == 1 && t < 10.0;
  report(4, ok,
         fmt("501-point sweep 4-9 nm: E0/N order %d at %.3f nm (first-jump ratio %.2f, second %.2f), I/N order %d, "
             "dN/N order %d, %.2f s",
             e.order, e.location, e.first_jump_ratio, e.second_jump_ratio, i.order, n.order, t));
}

void criterion5() {
  const sweep::SweepTable t = sweep::sweep_meanfield(reference_params(), 4.0, 9.0, 501);
  const sweep::ExponentFit f = sweep::fit_onset_exponent(t, "i_over_N", {0.001, 0.05});
  report(5, std::abs(f.exponent - 1.0) <= 0.05,
         fmt("I/N onset exponent %.4f over %zu points (1.00 +- 0.05), r^2 = %.6f", f.exponent, f.points, f.r_squared));
}

Eigen::MatrixXd dense(const DickeParams& dp, long n_max) {
  const exactdiag::BasisSpec spec{dp.N, n_max};
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  const double s = 0.5 * static_cast<double>(dp.N);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (long n = 0; n <= n_max; ++n)
    for (long k = 0; k <= dp.N; ++k) {
      const auto i = static_cast<Eigen::Index>(spec.index(n, k));
      const double m = static_cast<double>(k) - s;
      h(i, i) = dp.q * m * m + dp.omega0 * m + dp.omega * static_cast<double>(n);
      if (k < dp.N && n < n_max) {
        // (S+ a^+) and its conjugate
        const auto j = static_cast<Eigen::Index>(spec.index(n + 1, k + 1));
        h(i, j) = h(j, i) = dp.lambda * std::sqrt((s - m) * (s + m + 1.0)) * std::sqrt(static_cast<double>(n + 1));
      }
      if (k > 0 && n < n_max) {
        const auto j = static_cast<Eigen::Index>(spec.index(n + 1, k - 1));
        h(i, j) = h(j, i) = dp.lambda * std::sqrt((s + m) * (s - m + 1.0)) * std::sqrt(static_cast<double>(n + 1));
      }
    }
  return h;
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  struct P {
    DickeParams dp;
    long n_max;
  };
  const std::vector<P> pts = {{scaled(1.0, 0.0, 1.0, 8), 60},    {scaled(1.0, 0.0, 0.1, 16), 40},
                              {scaled(1.0, 0.2, 0.3, 20), 60},   {scaled(1.0, -0.3, 0.4, 12), 80},
                              {scaled(0.5, 0.05, 0.25, 30), 50}, {scaled(2.0, 0.5, 0.6, 5), 100},
                              {scaled(1.0, 0.7, 0.2, 1), 30},    {scaled(1.0, 0.0, 0.125, 24), 70}};
  double worst_e = 0.0, worst_sym = 0.0;
  int nondeg = 0;
  for (const P& pt : pts) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(pt.dp, pt.n_max), Eigen::EigenvaluesOnly);
    const exactdiag::EDResult r = exactdiag::solve_at_cutoff(pt.dp, pt.n_max, 1e-10);
    worst_e = std::max(worst_e, std::abs(r.e0 - es.eigenvalues()(0)));
    if (r.degeneracy == 1) {
      ++nondeg;
      worst_sym = std::max({worst_sym, std::abs(std::abs(r.parity) - 1.0), r.a_mean_abs});
    }
  }
  const double t = seconds_since(t0);
  report(6, worst_e <= 1e-8 && worst_sym <= 1e-12 && t < 30.0,
         fmt("%zu points (dim <= 2000): max |E_lanczos - E_dense| = %.2e (<= 1e-8); %d nondegenerate, max "
             "||<P>| - 1|, |<a>| = %.2e (<= 1e-12), %.2f s",
             pts.size(), worst_e, nondeg, worst_sym, t));
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> gaps, xovers;
  std::string detail;
  bool all_converged = true;
  for (long N : {4L, 8L, 16L, 32L}) {
    const double lc = std::sqrt(1.0 / (4.0 * static_cast<double>(N)));
    const DickeParams dp = scaled(1.0, 0.0, 2.0 * lc, N);
    const exactdiag::EDResult r = exactdiag::converged_ground(dp, {});
    all_converged = all_converged && r.converged;
    const double mf = meanfield::ground_energy_per_atom(dp);
    gaps.push_back(std::abs(r.e0_per_N - mf) / std::abs(mf));

    std::vector<double> ls;
    for (int i = 0; i <= 40; ++i) ls.push_back(lc * (0.5 + 0.05 * i));
    const sweep::SweepTable t = sweep::sweep_ed(dp, "lambda", ls, {});
    xovers.push_back(sweep::locate_crossover_ed(t) / lc);
    detail += fmt("N=%ld gap %.4f%% crossover %.3f lambda_c; ", N, 100.0 * gaps.back(), xovers.back());
  }
  bool monotone = true, approach = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    monotone = monotone && gaps[i] < gaps[i - 1];
    approach = approach && std::abs(xovers[i] - 1.0) < std::abs(xovers[i - 1] - 1.0);
  }
  const double t = seconds_since(t0);
  report(7, all_converged && monotone && gaps.back() <= 0.05 && approach && t < 300.0,
         detail + fmt("gap monotone %s, crossover approaching %s, %.1f s", monotone ? "yes" : "no",
                      approach ? "yes" : "no", t));
}

void criterion8() {
  const long N = 16;
  const double lambda = 0.25;
  const DickeParams base = scaled(1.0, 0.0, lambda, N);
  const double qc = meanfield::critical_q(base);
  const std::vector<double> qs = {-2.5, -1.0, -0.5, 0.0, 0.05, 0.1, 0.2};
  const sweep::SweepTable t = sweep::sweep_ed(base, "q", qs, {});
  double worst_normal = 0.0, worst_super = 0.0;
  std::string detail = fmt("N=16, lambda=0.25, q_c=%.4f: ", qc);
  for (const sweep::SweepRow& r : t.rows) {
    if (r.error || !r.two_sz_over_N_ed) {
      worst_super = INFINITY;
      continue;
    }
    const double sz = *r.two_sz_over_N_ed;
    if (r.x <= -1.0) worst_normal = std::max(worst_normal, std::abs(sz + 1.0));
    if (r.x > qc && r.phase == meanfield::Phase::Superradiant) worst_super = std::max(worst_super, std::abs(sz + r.delta));
    detail += fmt("q=%g 2<Sz>/N=%.4f; ", r.x, sz);
  }
  report(8, worst_normal <= 1e-2 && worst_super <= 0.1,
         detail + fmt("normal side |2<Sz>/N + 1| <= %.2e (1e-2), superradiant |2<Sz>/N + delta| <= %.3f (0.1)",
                      worst_normal, worst_super));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
