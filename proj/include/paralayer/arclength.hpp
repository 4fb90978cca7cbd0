#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "paralayer/profile.hpp"

namespace paralayer {

// First derivative of the arc-length reparametrization phi(s) of the
// generating curve: phi' = (1 + f'(phi)^2)^{-1/2}. Everything else in the
// geometry is an algebraic function of phi through this chain.
template <typename Scalar>
Scalar arc_speed(const LayerProfile<Scalar>& pr, Scalar phi) {
  const Scalar F = pr.df(phi);
  return Scalar(1) / std::sqrt(Scalar(1) + F * F);
}

template <typename Scalar>
Scalar arc_accel(const LayerProfile<Scalar>& pr, Scalar phi) {
  const Scalar F = pr.df(phi), d = arc_speed(pr, phi);
  return -F * pr.d2f(phi) * d * d * d * d;
}

template <typename Scalar>
Scalar arc_jerk(const LayerProfile<Scalar>& pr, Scalar phi) {
  const Scalar F = pr.df(phi), G = pr.d2f(phi), H = pr.d3f(phi);
  const Scalar d = arc_speed(pr, phi);
  const Scalar d7 = d * d * d * d * d * d * d;
  return (Scalar(3) * F * F * G * G - G * G - F * H * (Scalar(1) + F * F)) * d7;
}

// Arc-length solution table. Nodes are graded (near-uniform for small s_max,
// log-like for large), so tail fits always have enough sampled decades.
// Stored dphi/ddphi/dddphi are the exact algebraic values at the stored phi;
// integration accuracy is carried entirely by the phi column.
template <typename Scalar = double>
struct ArcLengthTable {
  LayerProfile<Scalar> profile;
  Eigen::VectorX<Scalar> s, phi, dphi, ddphi, dddphi;
  Scalar tol{};

  Scalar s_max() const { return s(s.size() - 1); }

  // phi at arbitrary s >= 0: quintic Hermite inside the grid, Newton on the
  // exact arc-length integral beyond it.
  Scalar phi_at(Scalar x) const {
    if (x < Scalar(0)) throw std::domain_error("phi_at: s must be >= 0");
    if (x >= s_max()) return tail_phi(x);
    const auto n = s.size();
    Eigen::Index lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (s(mid) <= x ? lo : hi) = mid;
    }
    const Scalar h = s(lo + 1) - s(lo), t = (x - s(lo)) / h;
    const Scalar t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const Scalar H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const Scalar H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const Scalar H2 = (t2 - 3 * t3 + 3 * t4 - t5) / 2;
    const Scalar H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const Scalar H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const Scalar H5 = (t3 - 2 * t4 + t5) / 2;
    return phi(lo) * H0 + h * dphi(lo) * H1 + h * h * ddphi(lo) * H2 +
           phi(lo + 1) * H3 + h * dphi(lo + 1) * H4 + h * h * ddphi(lo + 1) * H5;
  }

 private:
  // Gauss-Legendre 16-point nodes/weights on [-1,1], composite over
  // geometrically split panels (the integrand is a smooth power-like map).
  static Scalar arc_integral(const LayerProfile<Scalar>& pr, Scalar a, Scalar b) {
    static const double xg[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double wg[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    Scalar total = 0;
    Scalar lo = a;
    while (lo < b) {
      const Scalar hi = std::min(b, std::max(lo * Scalar(2), lo + Scalar(1)));
      const Scalar c = (hi + lo) / 2, hw = (hi - lo) / 2;
      Scalar acc = 0;
      for (int i = 0; i < 8; ++i) {
        const Scalar xp = c + hw * Scalar(xg[i]), xm = c - hw * Scalar(xg[i]);
        acc += Scalar(wg[i]) * (Scalar(1) / arc_speed(pr, xp) + Scalar(1) / arc_speed(pr, xm));
      }
      total += hw * acc;
      lo = hi;
    }
    return total;
  }

  Scalar tail_phi(Scalar x) const {
    const auto n = s.size();
    const Scalar s0 = s(n - 1), p0 = phi(n - 1);
    Scalar ph = std::max(p0, std::pow((x / profile.k), Scalar(1) / profile.alpha));
    for (int it = 0; it < 60; ++it) {
      const Scalar g = s0 + arc_integral(profile, p0, ph) - x;
      const Scalar step = g * arc_speed(profile, ph);
      ph -= step;
      if (ph < p0) ph = p0;
      if (std::abs(step) <= tol * std::max(Scalar(1), ph) + Scalar(1e-15) * ph) break;
    }
    return ph;
  }
};

// Integrates phi' = (1+f'(phi)^2)^{-1/2}, phi(0)=0 with an adaptive embedded
// Dormand-Prince 4(5) pair, landing exactly on each table node. n is the node
// count (>= 2); tol the local relative error target.
template <typename Scalar = double>
ArcLengthTable<Scalar> solve_arc_length(const LayerProfile<Scalar>& pr, Scalar s_max,
                                        Eigen::Index n, Scalar tol = Scalar(1e-12)) {
  if (!(s_max > Scalar(0))) throw std::invalid_argument("solve_arc_length: s_max must be > 0");
  if (n < 2) throw std::invalid_argument("solve_arc_length: need at least 2 nodes");
  if (!(tol > Scalar(0))) throw std::invalid_argument("solve_arc_length: tol must be > 0");

  ArcLengthTable<Scalar> tab;
  tab.profile = pr;
  tab.tol = tol;
  tab.s.resize(n);
  tab.phi.resize(n);
  tab.dphi.resize(n);
  tab.ddphi.resize(n);
  tab.dddphi.resize(n);

  // graded node map: s_i = s_max*(e^{c t}-1)/(e^c-1), t uniform
  const Scalar c = std::log1p(s_max);
  const Scalar den = std::expm1(c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar t = Scalar(i) / Scalar(n - 1);
    tab.s(i) = s_max * std::expm1(c * t) / den;
  }
  tab.s(0) = 0;
  tab.s(n - 1) = s_max;

  // Dormand-Prince coefficients
  constexpr double A21 = 1.0 / 5;
  constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
  constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
  constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                   A54 = -212.0 / 729;
  constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                   A64 = 49.0 / 176, A65 = -5103.0 / 18656;
  constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                   B5 = -2187.0 / 6784, B6 = 11.0 / 84;
  constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                   E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

  auto rhs = [&pr](Scalar y) { return arc_speed(pr, y); };

  Scalar y = 0;
  Scalar h = std::min(Scalar(1e-3), s_max / Scalar(n));
  tab.phi(0) = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Scalar t = tab.s(i);
    const Scalar t_end = tab.s(i + 1);
    while (t < t_end) {
      bool clipped = false;
      if (t + h >= t_end) {
        h = t_end - t;
        clipped = true;
      }
      const Scalar k1 = rhs(y);
      const Scalar k2 = rhs(y + h * Scalar(A21) * k1);
      const Scalar k3 = rhs(y + h * (Scalar(A31) * k1 + Scalar(A32) * k2));
      const Scalar k4 = rhs(y + h * (Scalar(A41) * k1 + Scalar(A42) * k2 + Scalar(A43) * k3));
      const Scalar k5 = rhs(y + h * (Scalar(A51) * k1 + Scalar(A52) * k2 + Scalar(A53) * k3 +
                                     Scalar(A54) * k4));
      const Scalar k6 = rhs(y + h * (Scalar(A61) * k1 + Scalar(A62) * k2 + Scalar(A63) * k3 +
                                     Scalar(A64) * k4 + Scalar(A65) * k5));
      const Scalar y5 = y + h * (Scalar(B1) * k1 + Scalar(B3) * k3 + Scalar(B4) * k4 +
                                 Scalar(B5) * k5 + Scalar(B6) * k6);
      const Scalar k7 = rhs(y5);
      const Scalar err = std::abs(h * (Scalar(E1) * k1 + Scalar(E3) * k3 + Scalar(E4) * k4 +
                                       Scalar(E5) * k5 + Scalar(E6) * k6 + Scalar(E7) * k7));
      const Scalar sc = tol * std::max(Scalar(1), std::abs(y5));
      if (err <= sc) {
        t += h;
        y = y5;
        if (clipped) t = t_end;
      }
      const Scalar grow = (err > Scalar(0))
                              ? Scalar(0.9) * std::pow(sc / err, Scalar(0.2))
                              : Scalar(5);
      h *= std::min(Scalar(5), std::max(Scalar(0.2), grow));
      if (!(h > Scalar(0)) || !std::isfinite(y))
        throw std::runtime_error("solve_arc_length: integrator stalled");
    }
    tab.phi(i + 1) = y;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    tab.dphi(i) = arc_speed(pr, tab.phi(i));
    tab.ddphi(i) = arc_accel(pr, tab.phi(i));
    tab.dddphi(i) = arc_jerk(pr, tab.phi(i));
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(tab.phi(i) < tab.phi(i + 1)))
      throw std::runtime_error("solve_arc_length: phi not strictly increasing");
  return tab;
}

}  // namespace paralayer
