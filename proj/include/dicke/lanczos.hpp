#pragma once

// Explicitly restarted Lanczos for the lowest eigenpair of a real symmetric
// operator. Full reorthogonalisation against the Krylov basis and against a
// set of locked vectors (deflation). An optional projector is applied to every
// new basis vector, which keeps the iteration inside a symmetry sector.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke::lanczos {

struct Options {
  double tol = 1e-10;           // residual ||Hv - e v|| <= tol * scale
  double scale = 1.0;           // operator norm estimate
  std::size_t krylov_dim = 120;
  std::size_t max_restarts = 400;
};

struct Result {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
using Projector = std::function<void(Eigen::VectorXd&)>;

namespace detail {

inline void orthogonalize(Eigen::VectorXd& w, std::span<const Eigen::VectorXd> basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) w -= b.dot(w) * b;
}

}  // namespace detail

// Lowest eigenpair of `apply` restricted to the orthogonal complement of
// `locked` (assumed orthonormal) and to the range of `project`.
inline Result lowest(const MatVec& apply, Eigen::VectorXd start, const Options& opt,
                     std::span<const Eigen::VectorXd> locked = {}, const Projector& project = {}) {
  const auto n = static_cast<std::size_t>(start.size());
  Result res;
  auto clean = [&](Eigen::VectorXd& v) {
    if (project) project(v);
    detail::orthogonalize(v, locked);
  };

  clean(start);
  double nrm = start.norm();
  if (nrm == 0.0) throw DomainError("Lanczos start vector has no component in the search space");
  start /= nrm;

  const std::size_t m_max = std::max<std::size_t>(1, std::min(opt.krylov_dim, n));
  const double target = opt.tol * opt.scale;
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(m_max);
  Eigen::VectorXd w(n);

  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    basis.clear();
    basis.push_back(start);
    std::vector<double> alpha, beta;
    double last_beta = 0.0;
    bool breakdown = false;

    for (std::size_t j = 0; j < m_max; ++j) {
      apply(basis[j], w);
      ++res.iterations;
      const double a = basis[j].dot(w);
      alpha.push_back(a);
      clean(w);
      detail::orthogonalize(w, basis);
      // Basis vectors carry rounding-level locked components; without a second
      // clean they are amplified at every step.
      clean(w);
      const double b = w.norm();
      last_beta = b;
      // Invariant subspace reached.
      if (b <= 1e-13 * std::max(opt.scale, std::abs(a))) {
        breakdown = true;
        break;
      }
      if (j + 1 == m_max) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd y = tri.eigenvectors().col(0);
    res.eigenvalue = tri.eigenvalues()(0);

    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) ritz += y(i) * basis[i];
    clean(ritz);
    ritz.normalize();

    const double estimate = breakdown ? 0.0 : std::abs(last_beta * y(m - 1));
    if (estimate <= target) {
      // Confirm with a true residual; the estimate drifts once orthogonality is lost.
      apply(ritz, w);
      res.eigenvalue = ritz.dot(w);
      res.residual = (w - res.eigenvalue * ritz).norm();
      if (res.residual <= target || breakdown) {
        res.vector = std::move(ritz);
        res.converged = res.residual <= target;
        return res;
      }
    }
    res.residual = estimate;
    start = std::move(ritz);
  }
  res.vector = std::move(start);
  return res;
}

}  // namespace dicke::lanczos
