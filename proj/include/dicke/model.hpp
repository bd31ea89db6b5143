#pragma once

// Physical inputs of a two-component condensate in a single harmonic trap
// coupled to one cavity mode, and their reduction to the couplings of the
// generalized Dicke Hamiltonian
//
//   H = q Sz^2 + omega0 Sz + 2 lambda Sx (a^+ + a) + omega a^+ a.
//
// All frequencies are angular (rad/s), energies are expressed in units of hbar.

#include <cmath>
#include <limits>
#include <string>

#include "dicke/constants.hpp"
#include "dicke/errors.hpp"

namespace dicke {

struct PhysicalParams {
  double omega_x = 0.0;  // trap, rad/s
  double omega_y = 0.0;
  double omega_z = 0.0;
  double mass = 0.0;   // kg
  double rho1 = 0.0;   // intraspecies scattering lengths, m
  double rho2 = 0.0;
  double rho12 = 0.0;  // interspecies scattering length, m
  long N = 0;
  double omega_cavity = 0.0;  // rad/s
  double lambda = 0.0;        // rad/s

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be strictly positive");
    };
    positive(omega_x, "omega_x");
    positive(omega_y, "omega_y");
    positive(omega_z, "omega_z");
    positive(mass, "mass");
    positive(omega_cavity, "omega_cavity");
    if (N < 1) throw DomainError("N must be at least 1");
    if (lambda < 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be non-negative");
    if (rho2 < rho1) throw DomainError("rho2 < rho1 gives omega0 < 0, which is unsupported");
  }
};

struct TrapLengths {
  double d_x = 0.0;
  double d_y = 0.0;
  double d_z = 0.0;

  double volume() const { return d_x * d_y * d_z; }
};

// Couplings of the generalized Dicke Hamiltonian. When `dimensionless` is set,
// every frequency-like field has been divided by `scale` (rad/s).
struct DickeParams {
  double omega = 1.0;
  double omega0 = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  long N = 1;
  bool dimensionless = false;
  double scale = 1.0;

  // Holstein-Primakoff couplings.
  double nu() const { return -static_cast<double>(N) * q; }
  double g() const { return std::sqrt(static_cast<double>(N)) * lambda; }

  void validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be strictly positive");
    if (N < 1) throw DomainError("N must be at least 1");
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be non-negative");
    if (!std::isfinite(q) || !std::isfinite(lambda)) throw DomainError("q and lambda must be finite");
  }

  // Divide all frequencies by `unit` (rad/s); composes with an existing scale.
  DickeParams rescaled(double unit) const {
    if (!(unit > 0.0)) throw DomainError("rescaling unit must be positive");
    DickeParams out = *this;
    out.omega /= unit;
    out.omega0 /= unit;
    out.q /= unit;
    out.lambda /= unit;
    out.scale = scale * unit;
    out.dimensionless = true;
    return out;
  }

  // Back to rad/s.
  DickeParams unscaled() const {
    DickeParams out = *this;
    out.omega *= scale;
    out.omega0 *= scale;
    out.q *= scale;
    out.lambda *= scale;
    out.scale = 1.0;
    out.dimensionless = false;
    return out;
  }
};

struct DickeEnergies {
  double omega = 0.0;  // J
  double omega0 = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  long N = 1;
};

inline DickeEnergies to_joules(const DickeParams& dp) {
  const DickeParams si = dp.unscaled();
  const double h = constants::hbar;
  return {si.omega * h, si.omega0 * h, si.q * h, si.lambda * h, si.N};
}

inline DickeParams from_joules(const DickeEnergies& e) {
  const double h = constants::hbar;
  DickeParams dp;
  dp.omega = e.omega / h;
  dp.omega0 = e.omega0 / h;
  dp.q = e.q / h;
  dp.lambda = e.lambda / h;
  dp.N = e.N;
  return dp;
}

inline TrapLengths harmonic_lengths(const PhysicalParams& p) {
  if (!(p.mass > 0.0)) throw DomainError("mass must be strictly positive");
  auto length = [&](double w) {
    if (!(w > 0.0)) throw DomainError("trap frequencies must be strictly positive");
    return std::sqrt(constants::hbar / (p.mass * w));
  };
  return {length(p.omega_x), length(p.omega_y), length(p.omega_z)};
}

// Interaction energy per unit scattering length, in rad/s per meter:
// (4 pi hbar / m) * integral |phi|^4 with the Gaussian trap ground state,
// integral |phi|^4 = (2 pi)^{-3/2} / (d_x d_y d_z).
inline double coupling_scale(const PhysicalParams& p) {
  const TrapLengths d = harmonic_lengths(p);
  const double overlap = std::pow(2.0 * constants::pi, -1.5) / d.volume();
  return 4.0 * constants::pi * constants::hbar * overlap / p.mass;
}

// q as an affine, decreasing function of rho12.
inline double q_of_rho12(const PhysicalParams& p, double rho12) {
  return coupling_scale(p) * (0.5 * (p.rho1 + p.rho2) - rho12);
}

inline double rho12_of_q(const PhysicalParams& p, double q) {
  return 0.5 * (p.rho1 + p.rho2) - q / coupling_scale(p);
}

inline DickeParams derive_couplings(const PhysicalParams& p) {
  p.validate();
  const double c = coupling_scale(p);
  DickeParams dp;
  // omega1 - omega2 vanishes for a common trap; (N - 1) ~ N.
  dp.omega0 = static_cast<double>(p.N) * c * (p.rho2 - p.rho1) / 2.0;
  dp.q = c * (0.5 * (p.rho1 + p.rho2) - p.rho12);
  dp.omega = p.omega_cavity;
  dp.lambda = p.lambda;
  dp.N = p.N;
  return dp;
}

struct ValidityVerdict {
  bool valid = false;
  double margin = 0.0;  // r0 - N rho, m
};

// Two-mode approximation holds while N * rho <= r0.
inline ValidityVerdict two_mode_validity(long N, double rho_typical, double r0) {
  const double used = static_cast<double>(N) * rho_typical;
  // N rho == r0 is valid up to rounding.
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * r0;
  return {used <= r0 + slack, r0 - used};
}

}  // namespace dicke
