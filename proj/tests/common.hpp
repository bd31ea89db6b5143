#pragma once

#include <cmath>

#include "dicke/constants.hpp"
#include "dicke/model.hpp"

namespace testing_support {

inline dicke::PhysicalParams reference_params() {
  using dicke::constants::nm;
  const double tp = 2.0 * dicke::constants::pi;
  dicke::PhysicalParams p;
  p.omega_x = tp * 290.0;
  p.omega_y = tp * 290.0;
  p.omega_z = tp * 450.0;
  p.mass = 1.45e-25;
  p.rho1 = 3.7 * nm;
  p.rho2 = 5.7 * nm;
  p.rho12 = 7.0 * nm;
  p.N = 1000;
  p.omega_cavity = 4e14;
  p.lambda = tp * 5e6;
  return p;
}

inline dicke::DickeParams scaled(double omega0, double q, double lambda, long N) {
  dicke::DickeParams dp;
  dp.omega = 1.0;
  dp.omega0 = omega0;
  dp.q = q;
  dp.lambda = lambda;
  dp.N = N;
  dp.dimensionless = true;
  return dp;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
