#pragma once

// Exact diagonalization of the generalized Dicke Hamiltonian at finite N in
// the photon Fock basis (truncated at n_max) times the S = N/2 spin multiplet.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/lanczos.hpp"
#include "dicke/model.hpp"

namespace dicke::exactdiag {

inline constexpr double kMaxDimension = 5e7;

// Flat index = n * (N + 1) + m_index, with m = m_index - N/2.
struct BasisSpec {
  long N = 1;
  long n_max = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(n_max + 1); }
  std::size_t index(long n, long m_index) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(m_index);
  }
  long photons(std::size_t i) const { return static_cast<long>(i / static_cast<std::size_t>(N + 1)); }
  long m_index(std::size_t i) const { return static_cast<long>(i % static_cast<std::size_t>(N + 1)); }
  double m(std::size_t i) const { return static_cast<double>(m_index(i)) - 0.5 * static_cast<double>(N); }
  // Eigenvalue of (-1)^(n + m_index); the decoupled ground state |0, -N/2> is even.
  int parity(std::size_t i) const { return ((photons(i) + m_index(i)) % 2 == 0) ? 1 : -1; }
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SparseHamiltonian {
  BasisSpec basis;
  SparseMatrix matrix;
  double norm_bound = 0.0;  // max absolute row sum
};

inline SparseHamiltonian build_hamiltonian(const DickeParams& dp, const BasisSpec& spec) {
  dp.validate();
  if (spec.N != dp.N) throw DomainError("basis N does not match model N");
  if (spec.n_max < 0) throw DomainError("photon cutoff must be non-negative");
  if (static_cast<double>(spec.N + 1) * static_cast<double>(spec.n_max + 1) > kMaxDimension)
    throw DomainError("Hilbert space dimension exceeds the 5e7 guard");

  const std::size_t dim = spec.dimension();
  const double s = 0.5 * static_cast<double>(spec.N);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(dim * 5);

  // 2 lambda Sx (a + a^+) = lambda (S+ + S-)(a + a^+): couples (n, m) to (n +- 1, m +- 1).
  for (long n = 0; n <= spec.n_max; ++n) {
    for (long k = 0; k <= spec.N; ++k) {
      const std::size_t i = spec.index(n, k);
      const double m = static_cast<double>(k) - s;
      triplets.emplace_back(i, i, dp.q * m * m + dp.omega0 * m + dp.omega * static_cast<double>(n));
      if (dp.lambda == 0.0) continue;
      auto couple = [&](long n2, long k2, double amp) {
        triplets.emplace_back(i, spec.index(n2, k2), amp);
      };
      const double up = k < spec.N ? std::sqrt(s * (s + 1.0) - m * (m + 1.0)) : 0.0;
      const double down = k > 0 ? std::sqrt(s * (s + 1.0) - m * (m - 1.0)) : 0.0;
      const double create = n < spec.n_max ? std::sqrt(static_cast<double>(n + 1)) : 0.0;
      const double annihilate = n > 0 ? std::sqrt(static_cast<double>(n)) : 0.0;
      if (up > 0.0 && annihilate > 0.0) couple(n - 1, k + 1, dp.lambda * up * annihilate);
      if (down > 0.0 && annihilate > 0.0) couple(n - 1, k - 1, dp.lambda * down * annihilate);
      if (up > 0.0 && create > 0.0) couple(n + 1, k + 1, dp.lambda * up * create);
      if (down > 0.0 && create > 0.0) couple(n + 1, k - 1, dp.lambda * down * create);
    }
  }

  SparseHamiltonian h;
  h.basis = spec;
  h.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.matrix.setFromTriplets(triplets.begin(), triplets.end());
  h.matrix.makeCompressed();
  for (Eigen::Index r = 0; r < h.matrix.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(h.matrix, r); it; ++it) row += std::abs(it.value());
    h.norm_bound = std::max(h.norm_bound, row);
  }
  return h;
}

struct GroundState {
  double e0 = 0.0;
  Eigen::VectorXd state;
  int parity_sector = 1;
  int degeneracy = 1;  // number of eigenvalues found within the degeneracy tolerance
  double residual = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline Eigen::VectorXd start_vector(const BasisSpec& spec, int sector) {
  std::mt19937 gen(12345u + static_cast<unsigned>(sector == 1 ? 1 : 0));
  Eigen::VectorXd v(static_cast<Eigen::Index>(spec.dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = spec.parity(static_cast<std::size_t>(i)) == sector ? 0.5 + static_cast<double>(gen()) / 4294967296.0 : 0.0;
  return v;
}

inline std::optional<std::size_t> first_support(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-8) return static_cast<std::size_t>(i);
  return std::nullopt;
}

}  // namespace detail

// Lowest eigenpair, solved separately in each parity sector. `guess`, if
// given, seeds both sectors (its projection onto each).
inline GroundState ground_state(const SparseHamiltonian& h, double tol, const Eigen::VectorXd* guess = nullptr) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const BasisSpec& spec = h.basis;
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  lanczos::Options opt;
  opt.tol = tol;
  opt.scale = std::max(h.norm_bound, 1e-300);
  opt.krylov_dim = static_cast<std::size_t>(
      std::clamp<double>(3e8 / (8.0 * static_cast<double>(dim)), 20.0, 120.0));

  const lanczos::MatVec apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = h.matrix * x; };

  struct SectorSolution {
    int sector;
    lanczos::Result res;
  };
  std::vector<SectorSolution> sectors;
  std::size_t iterations = 0;
  for (int sector : {1, -1}) {
    Eigen::VectorXd start = detail::start_vector(spec, sector);
    if (start.squaredNorm() == 0.0) continue;
    const lanczos::Projector project = [&spec, sector](Eigen::VectorXd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (spec.parity(static_cast<std::size_t>(i)) != sector) v(i) = 0.0;
    };
    if (guess != nullptr && guess->size() == dim) {
      Eigen::VectorXd seeded = *guess;
      project(seeded);
      // Generic admixture: the projected seed alone may miss the ground state.
      if (seeded.norm() > 1e-6) start = seeded.normalized() + 1e-3 * start.normalized();
    }
    lanczos::Result r = lanczos::lowest(apply, start, opt, {}, project);
    iterations += r.iterations;
    if (!r.converged)
      throw ConvergenceError("Lanczos did not converge in parity sector " + std::to_string(sector), r.residual);
    sectors.push_back({sector, std::move(r)});
  }

  const double base = std::min_element(sectors.begin(), sectors.end(), [](const auto& a, const auto& b) {
                        return a.res.eigenvalue < b.res.eigenvalue;
                      })->res.eigenvalue;
  const double deg_tol = 1e-9 * std::max(1.0, std::abs(base));
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(base));

  // Exactly tied sectors: take the one supported on the lowest flat index.
  const SectorSolution* chosen = nullptr;
  int degeneracy = 0;
  for (const auto& s : sectors) {
    if (s.res.eigenvalue - base <= deg_tol) ++degeneracy;
    if (s.res.eigenvalue - base > tie_tol) continue;
    if (chosen == nullptr ||
        detail::first_support(s.res.vector).value_or(dim) < detail::first_support(chosen->res.vector).value_or(dim))
      chosen = &s;
  }

  GroundState gs;
  gs.e0 = chosen->res.eigenvalue;
  gs.state = chosen->res.vector;
  gs.parity_sector = chosen->sector;
  gs.residual = chosen->res.residual;

  // Degeneracy inside the chosen sector: deflate and look for a second level.
  const int sector = chosen->sector;
  const lanczos::Projector project = [&spec, sector](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (spec.parity(static_cast<std::size_t>(i)) != sector) v(i) = 0.0;
  };
  Eigen::Index sector_size = 0;
  for (Eigen::Index i = 0; i < dim; ++i) sector_size += spec.parity(static_cast<std::size_t>(i)) == sector;
  if (sector_size > 1) {
    lanczos::Options second_opt = opt;
    second_opt.max_restarts = 60;
    const std::vector<Eigen::VectorXd> locked{gs.state};
    Eigen::VectorXd start = detail::start_vector(spec, sector);
    lanczos::Result r = lanczos::lowest(apply, start, second_opt, locked, project);
    iterations += r.iterations;
    if (r.eigenvalue - gs.e0 <= deg_tol) ++degeneracy;
    if (r.eigenvalue - gs.e0 <= tie_tol) {
      // Rotate within the pair to the vector with maximal weight on the first supported index.
      const Eigen::VectorXd& v1 = r.vector;
      std::optional<std::size_t> pivot;
      for (Eigen::Index i = 0; i < dim && !pivot; ++i)
        if (std::max(std::abs(gs.state(i)), std::abs(v1(i))) > 1e-8) pivot = static_cast<std::size_t>(i);
      const auto p = static_cast<Eigen::Index>(*pivot);
      Eigen::VectorXd rotated = gs.state(p) * gs.state + v1(p) * v1;
      rotated.normalize();
      if (rotated(p) < 0.0) rotated = -rotated;
      gs.state = rotated;
    }
  }
  gs.degeneracy = degeneracy;
  gs.iterations = iterations;
  return gs;
}

struct EDResult {
  double e0 = 0.0;
  double e0_per_N = 0.0;
  double sz_mean = 0.0;
  double two_sz_over_N = 0.0;
  double photons_per_N = 0.0;
  double a_mean_abs = 0.0;
  double parity = 0.0;
  long n_max_used = 0;
  bool converged = false;
  double tail_occupancy = 0.0;
  int degeneracy = 1;
  bool degeneracy_sensitive = false;  // sz_mean depends on the chosen degenerate vector
  double residual = 0.0;
  std::size_t dimension = 0;
};

inline EDResult observables(const SparseHamiltonian& h, const Eigen::VectorXd& state, const BasisSpec& spec) {
  const double norm = state.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-8) throw DomainError("state must be normalized");
  EDResult r;
  const double n_atoms = static_cast<double>(spec.N);
  const Eigen::VectorXd hv = h.matrix * state;
  r.e0 = state.dot(hv);
  r.e0_per_N = r.e0 / n_atoms;
  double sz = 0.0, photons = 0.0, parity = 0.0, a_mean = 0.0, tail = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double w = state(i) * state(i);
    const long n = spec.photons(idx);
    sz += w * spec.m(idx);
    photons += w * static_cast<double>(n);
    parity += w * spec.parity(idx);
    if (n == spec.n_max) tail += w;
    // <psi| a |psi> = sum psi(n-1, k) psi(n, k) sqrt(n)
    if (n > 0)
      a_mean += state(static_cast<Eigen::Index>(spec.index(n - 1, spec.m_index(idx)))) * state(i) *
                std::sqrt(static_cast<double>(n));
  }
  r.sz_mean = sz;
  r.two_sz_over_N = 2.0 * sz / n_atoms;
  r.photons_per_N = photons / n_atoms;
  r.parity = parity;
  r.a_mean_abs = std::abs(a_mean);
  r.tail_occupancy = tail;
  r.n_max_used = spec.n_max;
  r.dimension = spec.dimension();
  return r;
}

struct EDSettings {
  double tol = 1e-10;
  double tail_tol = 1e-12;
  long n_max_start = 8;
  double max_dimension = 2e6;
};

inline EDResult solve_at_cutoff(const DickeParams& dp, long n_max, double tol, const Eigen::VectorXd* guess = nullptr,
                                Eigen::VectorXd* state_out = nullptr) {
  const BasisSpec spec{dp.N, n_max};
  const SparseHamiltonian h = build_hamiltonian(dp, spec);
  GroundState gs = ground_state(h, tol, guess);
  EDResult r = observables(h, gs.state, spec);
  r.e0 = gs.e0;
  r.e0_per_N = gs.e0 / static_cast<double>(dp.N);
  r.degeneracy = gs.degeneracy;
  r.degeneracy_sensitive = gs.degeneracy > 1;
  r.residual = gs.residual;
  if (state_out != nullptr) *state_out = std::move(gs.state);
  return r;
}

// Doubles the photon cutoff until the ground energy is stable to tol and the
// weight on the top Fock level is below tail_tol. Returns the smaller cutoff
// of the final pair.
inline EDResult converged_ground(const DickeParams& dp, const EDSettings& settings) {
  if (!(settings.tol > 0.0) || !(settings.tail_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (settings.n_max_start < 0) throw DomainError("n_max_start must be non-negative");
  dp.validate();
  auto dim_of = [&](long n_max) { return static_cast<double>(dp.N + 1) * static_cast<double>(n_max + 1); };
  if (dim_of(settings.n_max_start) > std::min(settings.max_dimension, kMaxDimension))
    throw DomainError("starting cutoff already exceeds the dimension guard");

  long n_max = settings.n_max_start;
  Eigen::VectorXd state;
  EDResult prev = solve_at_cutoff(dp, n_max, settings.tol, nullptr, &state);
  for (;;) {
    const long next = std::max<long>(1, 2 * n_max);
    if (dim_of(next) > std::min(settings.max_dimension, kMaxDimension)) {
      prev.converged = false;
      return prev;
    }
    Eigen::VectorXd guess = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(BasisSpec{dp.N, next}.dimension()));
    guess.head(state.size()) = state;
    Eigen::VectorXd next_state;
    EDResult cur = solve_at_cutoff(dp, next, settings.tol, &guess, &next_state);
    const bool stable = std::abs(prev.e0 - cur.e0) < settings.tol * std::max(1.0, std::abs(prev.e0));
    if (stable && prev.tail_occupancy < settings.tail_tol) {
      prev.converged = true;
      return prev;
    }
    prev = cur;
    state = std::move(next_state);
    n_max = next;
  }
}

}  // namespace dicke::exactdiag
