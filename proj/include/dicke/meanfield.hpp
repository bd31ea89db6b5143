#pragma once

// Closed-form large-N ground state of the generalized Dicke Hamiltonian.
//
// Spin is mapped to a boson with Holstein-Primakoff, both bosons are displaced
// by macroscopic amplitudes (c^+ = a^+ + sqrt(N) alpha, d^+ = b^+ - sqrt(N) beta)
// and the Hamiltonian is ordered as H = N H0 + sqrt(N) H1 + H2 + ...
// The stationary point H1 = 0 gives the order parameters.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>

#include "dicke/errors.hpp"
#include "dicke/model.hpp"

namespace dicke::meanfield {

enum class Phase { Normal, Superradiant, Critical };

inline constexpr std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Normal:
      return "normal";
    case Phase::Superradiant:
      return "superradiant";
    case Phase::Critical:
      return "critical";
  }
  return "unknown";
}

struct MeanFieldSolution {
  double delta = 0.0;  // NaN when 4 lambda^2 + omega q == 0
  double alpha = 0.0;
  double beta = 0.0;
  Phase phase = Phase::Normal;
  double e0_per_N = 0.0;
  double dn_over_N = -1.0;
  double i_over_N = 0.0;
};

struct ExpansionCoefficients {
  double h0 = 0.0;
  double h1_c = 0.0;  // multiplies (c^+ + c)
  double h1_d = 0.0;  // multiplies (d^+ + d)
  double h2_cc = 0.0;    // c^+ c
  double h2_dd = 0.0;    // d^+ d
  double h2_dsq = 0.0;   // (d^+)^2 + d^2
  double h2_dpd2 = 0.0;  // (d^+ + d)^2
  double h2_cd = 0.0;    // (c^+ + c)(d^+ + d)
  double k = 1.0;
  double nu = 0.0;
  double g = 0.0;
};

inline double delta(const DickeParams& dp) {
  const double denom = static_cast<double>(dp.N) * (4.0 * dp.lambda * dp.lambda + dp.omega * dp.q);
  if (denom == 0.0) throw SingularParameterError("4 lambda^2 + omega q = 0: delta is undefined");
  return dp.omega * dp.omega0 / denom;
}

inline double critical_q(const DickeParams& dp) {
  return dp.omega0 / static_cast<double>(dp.N) - 4.0 * dp.lambda * dp.lambda / dp.omega;
}

// q > q_c is superradiant. The delta < 1 test alone misreads q < -4 lambda^2 / omega.
inline Phase classify(const DickeParams& dp) {
  const double qc = critical_q(dp);
  const double window = 1e-12 * std::max(std::abs(qc), 4.0 * dp.lambda * dp.lambda / dp.omega);
  if (std::abs(dp.q - qc) <= window) return Phase::Critical;
  return dp.q > qc ? Phase::Superradiant : Phase::Normal;
}

// Interspecies scattering length (m) at which q(rho12) = q_c.
inline double critical_rho12(const PhysicalParams& p) {
  return rho12_of_q(p, critical_q(derive_couplings(p)));
}

struct OrderParameters {
  double alpha = 0.0;
  double beta = 0.0;
};

inline OrderParameters order_parameters(const DickeParams& dp) {
  if (classify(dp) != Phase::Superradiant) return {};
  const double d = delta(dp);
  const double n = static_cast<double>(dp.N);
  return {std::sqrt(n) * dp.lambda * std::sqrt(1.0 - d * d) / dp.omega, std::sqrt((1.0 - d) / 2.0)};
}

// The superradiant-branch formula evaluated regardless of the phase.
inline double superradiant_branch_energy_per_atom(const DickeParams& dp) {
  const double d = delta(dp);
  const double n = static_cast<double>(dp.N);
  return -(n * (dp.lambda * dp.lambda / dp.omega + dp.q / 4.0) * (1.0 - d * d) + dp.omega0 * d / 2.0);
}

inline double ground_energy_per_atom(const DickeParams& dp) {
  if (classify(dp) != Phase::Superradiant) return -dp.omega0 / 2.0;
  return superradiant_branch_energy_per_atom(dp);
}

inline double population_imbalance(const DickeParams& dp) {
  if (classify(dp) != Phase::Superradiant) return -1.0;
  return -delta(dp);
}

inline double intensity_per_atom(const DickeParams& dp) {
  if (classify(dp) != Phase::Superradiant) return 0.0;
  const double d = delta(dp);
  return static_cast<double>(dp.N) * dp.lambda * dp.lambda * (1.0 - d * d) / (dp.omega * dp.omega);
}

// The intensity written directly in the couplings, without going through delta.
inline double intensity_per_atom_expanded(const DickeParams& dp) {
  if (classify(dp) != Phase::Superradiant) return 0.0;
  const double n = static_cast<double>(dp.N);
  const double a = 4.0 * dp.lambda * dp.lambda + dp.omega * dp.q;
  const double l2 = dp.lambda * dp.lambda;
  return l2 * (n * n * a * a - dp.omega * dp.omega * dp.omega0 * dp.omega0) /
         (n * dp.omega * dp.omega * a * a);
}

inline MeanFieldSolution solve(const DickeParams& dp) {
  dp.validate();
  MeanFieldSolution s;
  s.phase = classify(dp);
  try {
    s.delta = delta(dp);
  } catch (const SingularParameterError&) {
    s.delta = std::numeric_limits<double>::quiet_NaN();
  }
  const OrderParameters op = order_parameters(dp);
  s.alpha = op.alpha;
  s.beta = op.beta;
  s.e0_per_N = ground_energy_per_atom(dp);
  s.dn_over_N = population_imbalance(dp);
  s.i_over_N = intensity_per_atom(dp);
  return s;
}

// Leading-order energy per atom. The last term is nu beta^2 k: this is what the
// quartic Holstein-Primakoff term reduces to, and the only form whose
// stationary point reproduces the closed-form alpha, beta and energy.
inline double h0_value(const DickeParams& dp, double alpha, double beta) {
  const double k = 1.0 - beta * beta;
  const double sk = std::sqrt(k);
  return dp.omega * alpha * alpha + dp.omega0 * (beta * beta - 0.5) - 4.0 * dp.g() * alpha * beta * sk +
         dp.nu() * beta * beta * k;
}

inline ExpansionCoefficients expansion_coefficients(const DickeParams& dp, double alpha, double beta) {
  const double b2 = beta * beta;
  if (!(b2 < 1.0)) throw DomainError("expansion requires beta^2 < 1");
  ExpansionCoefficients c;
  c.k = 1.0 - b2;
  c.nu = dp.nu();
  c.g = dp.g();
  const double sk = std::sqrt(c.k);
  const double w = dp.omega, w0 = dp.omega0, g = c.g, nu = c.nu;

  c.h0 = h0_value(dp, alpha, beta);
  c.h1_c = -w * alpha + 2.0 * g * beta * sk;
  c.h1_d = w0 * beta - (2.0 * g * alpha - nu * beta * sk) * (sk - b2 / sk);

  c.h2_cc = w;
  c.h2_dd = w0 + 4.0 * g * alpha * beta / sk + nu * c.k - 3.0 * nu * b2;
  c.h2_dsq = g * alpha * beta / sk - nu * b2;
  c.h2_dpd2 = g * alpha * beta * b2 / (2.0 * std::pow(c.k, 1.5));
  c.h2_cd = g * (sk - b2 / sk);
  return c;
}

struct H0Minimum {
  double alpha = 0.0;
  double beta = 0.0;
  double h0 = 0.0;
};

// Direct numerical minimisation of h0_value over alpha in [0, alpha_max],
// beta in [0, 1/sqrt 2]: a coarse grid with repeated zooming picks the basin,
// damped Newton steps on the analytic gradient finish it.
// Ties go to the smallest alpha, then the smallest beta.
inline H0Minimum minimize_h0(const DickeParams& dp) {
  // For fixed beta the optimal alpha is 2 g beta sqrt(k) / omega <= g / omega.
  const double alpha_max = std::max(1.25 * dp.g() / dp.omega, 1e-9);
  const double beta_max = 1.0 / std::sqrt(2.0);

  double a_lo = 0.0, a_hi = alpha_max, b_lo = 0.0, b_hi = beta_max;
  auto scan = [&](int points) {
    const double da = (a_hi - a_lo) / (points - 1);
    const double db = (b_hi - b_lo) / (points - 1);
    H0Minimum local{a_lo, b_lo, h0_value(dp, a_lo, b_lo)};
    for (int i = 0; i < points; ++i) {
      const double a = a_lo + i * da;
      for (int j = 0; j < points; ++j) {
        const double b = b_lo + j * db;
        const double v = h0_value(dp, a, b);
        if (v < local.h0) local = {a, b, v};
      }
    }
    return std::pair{local, std::pair{da, db}};
  };

  auto [best, steps] = scan(201);
  for (int iter = 0; iter < 12; ++iter) {
    const double ra = 5.0 * steps.first, rb = 5.0 * steps.second;
    a_lo = std::max(0.0, best.alpha - ra);
    a_hi = std::min(alpha_max, best.alpha + ra);
    b_lo = std::max(0.0, best.beta - rb);
    b_hi = std::min(beta_max, best.beta + rb);
    auto [fine, fine_steps] = scan(41);
    if (fine.h0 <= best.h0) best = fine;
    steps = fine_steps;
  }
  if (best.beta <= 0.0 || best.alpha <= 0.0) return best;

  const double w = dp.omega, w0 = dp.omega0, g = dp.g(), nu = dp.nu();
  struct Local {
    double ga, gb, haa, hab, hbb;
  };
  auto local = [&](double a, double b) {
    const double b2 = b * b, k = 1.0 - b2, sk = std::sqrt(k);
    const double f1 = (1.0 - 2.0 * b2) / sk;            // d(beta sqrt k) / d beta
    const double f2 = b * (2.0 * b2 - 3.0) / (k * sk);  // and its derivative
    return Local{2.0 * w * a - 4.0 * g * b * sk, 2.0 * w0 * b - 4.0 * g * a * f1 + nu * (2.0 * b - 4.0 * b2 * b),
                 2.0 * w, -4.0 * g * f1, 2.0 * w0 - 4.0 * g * a * f2 + nu * (2.0 - 12.0 * b2)};
  };
  // Near the minimum h0 is flat to rounding, so steps are judged by the gradient.
  auto grad_norm = [&](double a, double b) {
    const Local l = local(a, b);
    return std::hypot(l.ga, l.gb);
  };
  const double h0_slack = 1e-14 * std::max(1.0, std::abs(best.h0));
  for (int iter = 0; iter < 100; ++iter) {
    const double a = best.alpha, b = best.beta;
    const Local l = local(a, b);
    const double gn = std::hypot(l.ga, l.gb);
    const double det = l.haa * l.hbb - l.hab * l.hab;
    if (gn == 0.0 || !(det > 0.0)) break;
    double da = -(l.hbb * l.ga - l.hab * l.gb) / det;
    double db = -(l.haa * l.gb - l.hab * l.ga) / det;
    bool moved = false;
    for (int half = 0; half < 40 && !moved; ++half, da *= 0.5, db *= 0.5) {
      const double na = std::clamp(a + da, 0.0, alpha_max), nb = std::clamp(b + db, 0.0, beta_max);
      const double v = h0_value(dp, na, nb);
      if (v <= best.h0 + h0_slack && grad_norm(na, nb) < gn) {
        best = {na, nb, v};
        moved = true;
      }
    }
    if (!moved) break;
  }
  return best;
}

// ED builds q Sz^2 literally; the Holstein-Primakoff mean field drops the
// constant q N^2 / 4. This is the mean-field energy per atom on the ED scale.
inline double ed_reference_energy_per_atom(const DickeParams& dp) {
  return ground_energy_per_atom(dp) + dp.q * static_cast<double>(dp.N) / 4.0;
}

// Exact <H>/N in the product of a photon coherent state (<a> = -sqrt(N) alpha)
// and a spin coherent state with <Sz> = N (beta^2 - 1/2). An upper bound on
// the true ground energy per atom.
inline double coherent_state_energy_per_atom(const DickeParams& dp, double alpha, double beta) {
  const double k = 1.0 - beta * beta;
  return h0_value(dp, alpha, beta) + dp.q * static_cast<double>(dp.N) / 4.0 + dp.q * beta * beta * k;
}

}  // namespace dicke::meanfield
