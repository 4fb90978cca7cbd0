#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "paralayer/potentials.hpp"

namespace paralayer {

enum class LeftEdge {
  Dirichlet,  // ghost wall at s_lo, nodes start at s_lo + ds
  Natural,    // node sits on the edge with a half cell behind it
};

// tensor grid on (s_lo, s_hi) x (-a, a); u walls and the right s wall are
// always Dirichlet, the left s edge is part of the grid description so that
// both edge kinds place the right ghost wall exactly at s_hi
template <typename Scalar = double>
struct StripGrid {
  Scalar s_lo{}, s_hi{};
  Eigen::Index n_s{}, n_u{};
  Scalar a{};
  LeftEdge left = LeftEdge::Dirichlet;

  Scalar ds() const {
    return (s_hi - s_lo) / Scalar(left == LeftEdge::Dirichlet ? n_s + 1 : n_s);
  }
  Scalar du() const { return 2 * a / Scalar(n_u + 1); }
  Scalar s_node(Eigen::Index i) const {
    return s_lo + (left == LeftEdge::Dirichlet ? Scalar(i + 1) : Scalar(i)) * ds();
  }
  Scalar u_node(Eigen::Index j) const { return -a + Scalar(j + 1) * du(); }
};

// lumped-mass five-point discretization of a form
//   sum over faces c |grad psi|^2 + nodes (pot |psi|^2, wgt |psi|^2 mass)
// as the matrix pencil (K, M) with diagonal M > 0
template <typename Scalar = double>
struct StripOperator {
  Eigen::SparseMatrix<Scalar> K;
  Eigen::VectorX<Scalar> mass;
  StripGrid<Scalar> grid;

  Eigen::Index size() const { return mass.size(); }
  Eigen::Index index(Eigen::Index i, Eigen::Index j) const { return i * grid.n_u + j; }

  // small-problem view of M^{-1/2} K M^{-1/2}
  Eigen::MatrixX<Scalar> dense_fold() const {
    Eigen::MatrixX<Scalar> A = K;
    const auto d = mass.array().sqrt().inverse().matrix();
    return d.asDiagonal() * A * d.asDiagonal();
  }
};

// Generic form-consistent assembly. cs/cu are the face coefficients of
// |d_s psi|^2 and |d_u psi|^2, pot and wgt the node coefficients, bnd the
// trace coupling added on a Natural left edge (pass zero when unused).
// Half-cell quantities on a Natural edge are read at s_lo + ds/4, which keeps
// degenerate weights like r(0) = 0 strictly positive on the grid.
template <typename Scalar, typename Cs, typename Cu, typename Pot, typename Wgt,
          typename Bnd>
StripOperator<Scalar> assemble_strip(const StripGrid<Scalar>& grid, Cs cs, Cu cu, Pot pot,
                                     Wgt wgt, Bnd bnd) {
  if (grid.n_s < 8 || grid.n_u < 8)
    throw std::invalid_argument("assemble_strip: need n_s, n_u >= 8");
  if (!(grid.s_hi > grid.s_lo) || !(grid.a > Scalar(0)))
    throw std::invalid_argument("assemble_strip: empty strip");
  const Scalar ds = grid.ds(), du = grid.du();
  const Eigen::Index n = grid.n_s * grid.n_u;

  StripOperator<Scalar> op;
  op.grid = grid;
  op.mass.resize(n);
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(std::size_t(5 * n));
  const auto add = [&trip](Eigen::Index r, Eigen::Index c, Scalar v) {
    trip.emplace_back(int(r), int(c), v);
  };

  for (Eigen::Index i = 0; i < grid.n_s; ++i) {
    const Scalar s = grid.s_node(i);
    const bool half = (grid.left == LeftEdge::Natural && i == 0);
    const Scalar cell = half ? ds / 2 : ds;
    const Scalar se = half ? s + ds / 4 : s;
    for (Eigen::Index j = 0; j < grid.n_u; ++j) {
      const Scalar u = grid.u_node(j);
      const Eigen::Index id = op.index(i, j);

      Scalar diag = pot(se, u) * cell * du;
      op.mass(id) = wgt(se, u) * cell * du;
      if (!(op.mass(id) > Scalar(0)))
        throw std::runtime_error("assemble_strip: non-positive mass sample");
      if (half) diag += bnd(u) * du;

      // s-faces: right face always, left ghost face only for a Dirichlet edge
      const Scalar cr = cs(s + ds / 2, u) * du / ds;
      diag += cr;
      if (i + 1 < grid.n_s) {
        add(id, op.index(i + 1, j), -cr);
        add(op.index(i + 1, j), id, -cr);
      }
      if (i == 0 && grid.left == LeftEdge::Dirichlet) diag += cs(s - ds / 2, u) * du / ds;
      if (i > 0) diag += cs(s - ds / 2, u) * du / ds;

      // u-faces: top face plus both wall ghosts, half cells shrink the face
      const Scalar ct = cu(se, u + du / 2) * cell / du;
      diag += ct;
      if (j + 1 < grid.n_u) {
        add(id, op.index(i, j + 1), -ct);
        add(op.index(i, j + 1), id, -ct);
      }
      diag += cu(se, u - du / 2) * cell / du;

      add(id, id, diag);
      if (!std::isfinite(diag))
        throw std::runtime_error("assemble_strip: non-finite coefficient sample");
    }
  }
  op.K.resize(n, n);
  op.K.setFromTriplets(trip.begin(), trip.end());
  return op;
}

// straightened fiber operator on (s_lo,s_hi) x (-a,a): faces 1/J^2 and 1,
// nodes V_m, flat mass; a Natural left edge carries the coupling
// gd(s_lo) u / (2 J^3) of the cut when with_coupling is set
template <typename Scalar>
StripOperator<Scalar> assemble_fiber(const MeridianGeometry<Scalar>& geom,
                                     const StripGrid<Scalar>& grid, int m,
                                     bool with_coupling = false) {
  const auto cs = [&geom](Scalar s, Scalar u) {
    const auto mf = metric(geom, s, u);
    return Scalar(1) / mf.g;
  };
  const auto cu = [](Scalar, Scalar) { return Scalar(1); };
  const auto pot = [&geom, m](Scalar s, Scalar u) { return potential_full(geom, s, u, m); };
  const auto wgt = [](Scalar, Scalar) { return Scalar(1); };
  const Scalar p = grid.s_lo;
  const auto bnd = [&geom, p, with_coupling](Scalar u) {
    if (!with_coupling) return Scalar(0);
    const Scalar J = metric(geom, p, u).jac;
    return geom.dgamma(p) * u / (2 * J * J * J);
  };
  return assemble_strip(grid, cs, cu, pot, wgt, bnd);
}

// geometric fiber operator in the meridian coordinates without straightening:
// faces r/J and rJ, nodes m^2 J/r, mass rJ; the m = 0 axis edge is Natural
// and regular because every half-cell sample sits at s > 0
template <typename Scalar>
StripOperator<Scalar> assemble_meridian_weighted(const MeridianGeometry<Scalar>& geom,
                                                 const StripGrid<Scalar>& grid, int m) {
  const auto cs = [&geom](Scalar s, Scalar u) {
    return geom.radial(s, u) / metric(geom, s, u).jac;
  };
  const auto cu = [&geom](Scalar s, Scalar u) {
    return geom.radial(s, u) * metric(geom, s, u).jac;
  };
  const Scalar m2 = Scalar(m) * Scalar(m);
  const auto pot = [&geom, m2](Scalar s, Scalar u) {
    if (m2 == Scalar(0)) return Scalar(0);
    return m2 * metric(geom, s, u).jac / geom.radial(s, u);
  };
  const auto wgt = [&geom](Scalar s, Scalar u) {
    return geom.radial(s, u) * metric(geom, s, u).jac;
  };
  const auto bnd = [](Scalar) { return Scalar(0); };
  return assemble_strip(grid, cs, cu, pot, wgt, bnd);
}

// remove the left column of unknowns (Dirichlet condition on that line);
// the result coincides with the Dirichlet-edge assembly on the same nodes
template <typename Scalar>
StripOperator<Scalar> drop_left_column(const StripOperator<Scalar>& op) {
  if (op.grid.n_s < 9) throw std::invalid_argument("drop_left_column: grid too small");
  if (op.grid.left != LeftEdge::Natural)
    throw std::invalid_argument("drop_left_column: no boundary column to drop");
  StripOperator<Scalar> out;
  out.grid = op.grid;
  // the nodes at s_lo + i ds, i >= 1, keep their positions and spacing
  out.grid.n_s -= 1;
  out.grid.left = LeftEdge::Dirichlet;
  const Eigen::Index keep = op.size() - op.grid.n_u;
  out.mass = op.mass.tail(keep);
  Eigen::SparseMatrix<Scalar> sub(keep, keep);
  std::vector<Eigen::Triplet<Scalar>> trip;
  for (int k = 0; k < op.K.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(op.K, k); it; ++it)
      if (it.row() >= op.grid.n_u && it.col() >= op.grid.n_u)
        trip.emplace_back(int(it.row() - op.grid.n_u), int(it.col() - op.grid.n_u),
                          it.value());
  sub.setFromTriplets(trip.begin(), trip.end());
  out.K = std::move(sub);
  return out;
}

// remove the s-faces between columns ic-1 and ic: the form loses a positive
// term, so every eigenvalue can only move down and counts can only grow
template <typename Scalar>
StripOperator<Scalar> cut_coupling(StripOperator<Scalar> op, Eigen::Index ic) {
  if (ic < 1 || ic >= op.grid.n_s) throw std::invalid_argument("cut_coupling: bad column");
  for (Eigen::Index j = 0; j < op.grid.n_u; ++j) {
    const Eigen::Index l = op.index(ic - 1, j), r = op.index(ic, j);
    const Scalar c = -op.K.coeff(l, r);
    op.K.coeffRef(l, l) -= c;
    op.K.coeffRef(r, r) -= c;
    op.K.coeffRef(l, r) = Scalar(0);
    op.K.coeffRef(r, l) = Scalar(0);
  }
  op.K.prune(Scalar(0));
  return op;
}

namespace detail {

template <typename Scalar>
bool ldlt_inertia(const Eigen::SparseMatrix<Scalar>& P, int& negatives) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt(P);
  if (ldlt.info() != Eigen::Success) return false;
  const auto& D = ldlt.vectorD();
  int count = 0;
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (!std::isfinite(D(i)) || D(i) == Scalar(0)) return false;
    if (D(i) < Scalar(0)) ++count;
  }
  negatives = count;
  return true;
}

}  // namespace detail

// number of pencil eigenvalues of (K, M) strictly below tau, by the inertia
// of K - tau M; exact-singularity breakdowns are retried with a relative
// jitter of tau, then handed to a dense solver while the problem is small
template <typename Scalar>
int count_below_threshold(const StripOperator<Scalar>& op, Scalar tau) {
  Eigen::SparseMatrix<Scalar> P = op.K;
  Scalar eps = 0;
  const Scalar scale = std::max(Scalar(1), std::abs(tau));
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Scalar t = tau + eps;
    P = op.K;
    for (Eigen::Index id = 0; id < op.size(); ++id)
      P.coeffRef(id, id) -= t * op.mass(id);
    int neg = 0;
    if (detail::ldlt_inertia(P, neg)) return neg;
    eps = (eps == Scalar(0)) ? Scalar(1e-12) * scale : eps * 2;
  }
  if (op.size() <= 4000) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> es(op.dense_fold(),
                                                             Eigen::EigenvaluesOnly);
    int neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < tau) ++neg;
    return neg;
  }
  throw std::runtime_error("count_below_threshold: persistent factorization breakdown");
}

// lowest min(k_max, count) pencil eigenvalues below lambda_max through
// shifted block inverse iteration with a single factorization; the shift sits
// a deliberate margin under the first eigenvalue, close enough to favor the
// bottom of the spectrum but far enough that the block keeps full numerical
// rank across solves
template <typename Scalar>
std::vector<Scalar> lowest_eigenvalues(const StripOperator<Scalar>& op, int k_max,
                                       Scalar lambda_max) {
  if (k_max <= 0) throw std::invalid_argument("lowest_eigenvalues: k_max must be > 0");
  const int total = count_below_threshold(op, lambda_max);
  const int want = std::min<int>(k_max, total);
  std::vector<Scalar> out;
  if (want == 0) return out;

  // folded Gershgorin lower bound
  Scalar glo = std::numeric_limits<Scalar>::max();
  for (int k = 0; k < op.K.outerSize(); ++k) {
    Scalar center = 0, radius = 0;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(op.K, k); it; ++it) {
      const Scalar v = it.value() / std::sqrt(op.mass(it.row()) * op.mass(it.col()));
      if (it.row() == it.col())
        center = v;
      else
        radius += std::abs(v);
    }
    glo = std::min(glo, center - radius);
  }

  Scalar lo = glo, hi = lambda_max;
  for (int it = 0; it < 60 && hi - lo > Scalar(0.05) * (std::abs(lo) + Scalar(1)); ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    (count_below_threshold(op, mid) >= 1 ? hi : lo) = mid;
  }
  const Scalar sigma =
      lo - std::max(Scalar(0.1) * (lambda_max - lo),
                    Scalar(0.05) * (std::abs(lo) + Scalar(1)));

  Eigen::SparseMatrix<Scalar> P = op.K;
  for (Eigen::Index id = 0; id < op.size(); ++id)
    P.coeffRef(id, id) -= sigma * op.mass(id);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt(P);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("lowest_eigenvalues: shift factorization failed");

  const Eigen::Index n = op.size();
  const int p = int(std::min<Eigen::Index>(n, want + std::max(4, want / 2)));
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss;
  Eigen::MatrixX<Scalar> X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = Scalar(gauss(rng));

  const auto m_orthonormalize = [&op](Eigen::MatrixX<Scalar>& V) {
    Eigen::MatrixX<Scalar> G = V.transpose() * (op.mass.asDiagonal() * V);
    Eigen::LLT<Eigen::MatrixX<Scalar>> llt(G);
    if (llt.info() != Eigen::Success) {
      G.diagonal().array() += Scalar(1e-12) * G.diagonal().maxCoeff();
      llt.compute(G);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("lowest_eigenvalues: lost subspace rank");
    }
    Eigen::MatrixX<Scalar> Vt = llt.matrixL().solve(V.transpose());
    V = Vt.transpose();
  };

  m_orthonormalize(X);
  Eigen::VectorX<Scalar> theta = Eigen::VectorX<Scalar>::Zero(p);
  for (int sweep = 0; sweep < 400; ++sweep) {
    // the solve writes into its destination while reading the right side, so
    // the right side must not alias X
    const Eigen::MatrixX<Scalar> Y = op.mass.asDiagonal() * X;
    X = ldlt.solve(Y);
    // two passes keep the block orthonormal even when the solve stretches it
    m_orthonormalize(X);
    m_orthonormalize(X);
    const Eigen::MatrixX<Scalar> H = X.transpose() * (op.K * X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> es(
        Scalar(0.5) * (H + H.transpose()));
    X = X * es.eigenvectors();
    theta = es.eigenvalues();

    bool done = true;
    for (int j = 0; j < want && done; ++j) {
      const Eigen::VectorX<Scalar> x = X.col(j);
      const Eigen::VectorX<Scalar> r =
          op.K * x - theta(j) * (op.mass.asDiagonal() * x);
      const Scalar denom = (op.K * x).norm() + std::abs(theta(j));
      done = r.norm() <= Scalar(1e-9) * std::max(denom, Scalar(1));
    }
    if (done) {
      for (int j = 0; j < want; ++j)
        if (theta(j) < lambda_max) out.push_back(theta(j));
      return out;
    }
  }
  throw std::runtime_error("lowest_eigenvalues: inverse iteration stalled");
}

// per-mode counts below the threshold for m = 1, 2, ...; the count is
// nonincreasing in m (the centrifugal node term grows like m^2 on a fixed
// grid), so the scan stops at the first empty mode
struct ModeScanResult {
  std::vector<int> counts;  // counts[i] belongs to m = i+1
  int m_stop = 0;           // first mode with an empty count
  int total = 0;
};

template <typename Scalar>
ModeScanResult nonzero_mode_scan(const MeridianGeometry<Scalar>& geom,
                                 const StripGrid<Scalar>& grid, Scalar tau,
                                 int m_cap = 256) {
  // every nonzero mode vanishes on the axis, so the scan forces a wall there
  StripGrid<Scalar> gd = grid;
  gd.left = LeftEdge::Dirichlet;
  ModeScanResult res;
  for (int m = 1; m <= m_cap; ++m) {
    const auto op = assemble_meridian_weighted(geom, gd, m);
    const int c = count_below_threshold(op, tau);
    if (c == 0) {
      res.m_stop = m;
      return res;
    }
    res.counts.push_back(c);
    res.total += c;
  }
  throw std::runtime_error("nonzero_mode_scan: no empty mode up to the cap");
}

}  // namespace paralayer
