// Derive the couplings for the sample condensate, locate the transition and
// compare mean field with exact diagonalization at a small scaled point.
#include <cstdio>

#include "dicke/dicke.hpp"

int main() {
  using namespace dicke;
  PhysicalParams p;
  p.omega_x = p.omega_y = 2.0 * constants::pi * 290.0;
  p.omega_z = 2.0 * constants::pi * 450.0;
  p.mass = 1.45e-25;
  p.rho1 = 3.7 * constants::nm;
  p.rho2 = 5.7 * constants::nm;
  p.rho12 = 7.0 * constants::nm;
  p.N = 1000;
  p.omega_cavity = 4e14;
  p.lambda = 2.0 * constants::pi * 5e6;

  const DickeParams dp = derive_couplings(p);
  std::printf("omega0 = %.2f rad/s, q_c = %.3f rad/s, rho12_c = %.4f nm\n", dp.omega0, meanfield::critical_q(dp),
              meanfield::critical_rho12(p) / constants::nm);

  DickeParams s;
  s.omega = s.omega0 = 1.0;
  s.N = 16;
  s.lambda = 2.0 * 0.125;
  const exactdiag::EDResult ed = exactdiag::converged_ground(s, {});
  std::printf("N=16, lambda=2 lambda_c: ED e0/N = %.6f, mean field %.6f (n_max %ld)\n", ed.e0_per_N,
              meanfield::ground_energy_per_atom(s), ed.n_max_used);
}
