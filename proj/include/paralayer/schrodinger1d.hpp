#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace paralayer {

// uniform half-line truncation grid: interior nodes s_i = (i+1) h, i = 0..n-1,
// h = L/(n+1); Dirichlet nodes s = 0 and s = L are excluded
template <typename Scalar = double>
struct Grid1D {
  Scalar L{};
  Eigen::Index n{};
  Scalar h() const { return L / Scalar(n + 1); }
};

// classical-turning-point truncation for a tail potential -c*s^{-beta}:
// every state counted at threshold -E lives within safety * (c/E)^{1/beta}
template <typename Scalar>
Scalar truncation_length(Scalar beta, Scalar c, Scalar E, Scalar safety = Scalar(3)) {
  return safety * std::pow(c / E, Scalar(1) / beta);
}

enum class Boundary1D { DirichletBoth, RobinLeft };

// symmetric 3-point stencil of  -d^2/ds^2 + q  on Grid1D
template <typename Scalar = double>
struct TridiagonalOperator {
  Eigen::VectorX<Scalar> diag;
  Eigen::VectorX<Scalar> offdiag;  // n-1 entries, all -1/h^2
  Scalar h{};
  Boundary1D boundary = Boundary1D::DirichletBoth;
  Scalar sigma{};  // boundary coupling, active for RobinLeft

  Eigen::MatrixX<Scalar> dense() const {
    const auto n = diag.size();
    Eigen::MatrixX<Scalar> M = Eigen::MatrixX<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      M(i, i) = diag(i);
      if (i + 1 < n) M(i, i + 1) = M(i + 1, i) = offdiag(i);
    }
    return M;
  }
};

// Node layout depends on the left boundary. DirichletBoth: s_i = (i+1) h with
// ghost walls at 0 and L. RobinLeft: s_i = i h, the wall at s=0 replaced by a
// natural (sigma = 0) condition from ghost elimination; the corner stencil is
// symmetrized, which scales offdiag(0) by sqrt(2) and leaves the spectrum
// intact. The right wall then sits at L - h.
template <typename Scalar, typename Potential>
TridiagonalOperator<Scalar> discretize(Potential&& q, const Grid1D<Scalar>& grid,
                                       Boundary1D boundary = Boundary1D::DirichletBoth) {
  if (grid.n < 16) throw std::invalid_argument("discretize: need n >= 16");
  TridiagonalOperator<Scalar> op;
  op.h = grid.h();
  op.boundary = boundary;
  op.diag.resize(grid.n);
  op.offdiag = Eigen::VectorX<Scalar>::Constant(grid.n - 1, Scalar(-1) / (op.h * op.h));
  const Scalar kin = Scalar(2) / (op.h * op.h);
  const Scalar shift = (boundary == Boundary1D::RobinLeft) ? Scalar(0) : Scalar(1);
  for (Eigen::Index i = 0; i < grid.n; ++i) {
    const Scalar qi = q((Scalar(i) + shift) * op.h);
    if (!std::isfinite(qi)) throw std::runtime_error("discretize: non-finite potential sample");
    op.diag(i) = kin + qi;
  }
  if (boundary == Boundary1D::RobinLeft) op.offdiag(0) = -std::sqrt(Scalar(2)) / (op.h * op.h);
  return op;
}

// one-sided Robin at s=0 as a rank-one form perturbation sigma*|psi(0)|^2.
// Ghost elimination and lumped-mass P1 agree on the entry: 2 sigma / h on the
// boundary diagonal (attractive for sigma < 0, depth -> sigma^2 at order h^2).
// Replaces any previously applied coupling.
template <typename Scalar>
TridiagonalOperator<Scalar> robin_rank_one(TridiagonalOperator<Scalar> op, Scalar sigma) {
  if (op.boundary != Boundary1D::RobinLeft)
    throw std::invalid_argument("robin_rank_one: discretize with RobinLeft first");
  op.diag(0) += 2 * (sigma - op.sigma) / op.h;
  op.sigma = sigma;
  return op;
}

// Number of eigenvalues < E by the Sturm sign-change count (LDL^T pivots of
// op - E). A vanishing pivot means E is an exact eigenvalue of a leading
// block; retried with a relative epsilon shift. If shifted != nullptr the
// applied shift is reported there (0 when no retry was needed).
template <typename Scalar>
int count_below(const TridiagonalOperator<Scalar>& op, Scalar E, Scalar* shifted = nullptr) {
  const auto n = op.diag.size();
  const Scalar scale = std::max(Scalar(1), std::abs(E));
  Scalar eps = 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Scalar Es = E + eps;
    int count = 0;
    Scalar d = op.diag(0) - Es;
    bool breakdown = (d == Scalar(0));
    if (d < Scalar(0)) ++count;
    for (Eigen::Index i = 1; i < n && !breakdown; ++i) {
      const Scalar b = op.offdiag(i - 1);
      d = op.diag(i) - Es - b * b / d;
      if (d == Scalar(0)) breakdown = true;
      if (d < Scalar(0)) ++count;
    }
    if (!breakdown) {
      if (shifted) *shifted = eps;
      return count;
    }
    eps = (eps == Scalar(0)) ? Scalar(1e-13) * scale : eps * 2;
  }
  throw std::runtime_error("count_below: persistent factorization breakdown");
}

// lowest min(k_max, count_below(E)) eigenvalues below E, each bracketed by
// bisection on count_below to 1e-10 * max(1,|E|)
template <typename Scalar>
std::vector<Scalar> eigenvalues_below(const TridiagonalOperator<Scalar>& op, Scalar E,
                                      int k_max) {
  if (k_max <= 0) throw std::invalid_argument("eigenvalues_below: k_max must be > 0");
  const int total = count_below(op, E);
  const int want = std::min(k_max, total);
  std::vector<Scalar> out;
  if (want == 0) return out;
  // Gershgorin lower bound
  Scalar lo0 = op.diag(0);
  for (Eigen::Index i = 0; i < op.diag.size(); ++i) {
    Scalar radius = 0;
    if (i > 0) radius += std::abs(op.offdiag(i - 1));
    if (i + 1 < op.diag.size()) radius += std::abs(op.offdiag(i));
    lo0 = std::min(lo0, op.diag(i) - radius);
  }
  const Scalar tol = Scalar(1e-10) * std::max(Scalar(1), std::abs(E));
  for (int j = 1; j <= want; ++j) {
    Scalar lo = lo0, hi = E;
    while (hi - lo > tol) {
      const Scalar mid = lo + (hi - lo) / 2;
      if (mid == lo || mid == hi) break;
      (count_below(op, mid) >= j ? hi : lo) = mid;
    }
    out.push_back(lo + (hi - lo) / 2);
  }
  return out;
}

// eigenvalue-counting asymptote of a half-line operator with tail
// q(s) ~ -c*s^{-beta}:  N(-E) ~ c^{1/beta} B(3/2, 1/beta - 1/2) / (pi beta) *
// E^{-(1/beta - 1/2)}; Euler Beta through lgamma to stay finite near beta -> 2
template <typename Scalar>
Scalar sl_asymptote(Scalar beta, Scalar c, Scalar E) {
  if (!(beta > Scalar(0)) || !(beta < Scalar(2)))
    throw std::domain_error("sl_asymptote: beta must be in (0,2)");
  if (!(c > Scalar(0))) throw std::domain_error("sl_asymptote: c must be > 0");
  if (!(E > Scalar(0))) throw std::domain_error("sl_asymptote: E must be > 0");
  const Scalar x = Scalar(1.5), y = Scalar(1) / beta - Scalar(0.5);
  const Scalar logB = std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
  return std::pow(c, Scalar(1) / beta) * std::exp(logB) /
         (Scalar(M_PI) * beta * std::pow(E, y));
}

}  // namespace paralayer
