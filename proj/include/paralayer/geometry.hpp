#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "paralayer/arclength.hpp"
#include "paralayer/profile.hpp"

namespace paralayer {

// Point evaluator for every curve quantity as an algebraic function of
// phi(s). Queries at s = 0 are nudged to an interior point so that profiles
// with unbounded origin curvature (pure power, alpha < 2) produce large
// finite values with correct signs instead of 0*inf artifacts; for C^2
// profiles the nudge is far below every tolerance in use.
template <typename Scalar = double>
struct MeridianGeometry {
  LayerProfile<Scalar> profile;
  ArcLengthTable<Scalar> arc;

  static MeridianGeometry build(const LayerProfile<Scalar>& pr, Scalar s_max,
                                Eigen::Index n, Scalar tol = Scalar(1e-12)) {
    return MeridianGeometry{pr, solve_arc_length(pr, s_max, n, tol)};
  }

  Scalar s_max() const { return arc.s_max(); }

  Scalar phi(Scalar s) const { return arc.phi_at(s); }
  Scalar dphi(Scalar s) const { return arc_speed(profile, phi(s)); }
  Scalar ddphi(Scalar s) const { return arc_accel(profile, phi(s)); }
  Scalar dddphi(Scalar s) const { return arc_jerk(profile, phi(s)); }

  // signed curvature of the meridian curve and its two s-derivatives
  Scalar gamma(Scalar s) const {
    const Scalar ph = phi(nudge(s)), d = arc_speed(profile, ph);
    return profile.d2f(ph) * d * d * d;
  }
  Scalar dgamma(Scalar s) const {
    s = nudge(s);
    const Scalar ph = phi(s), d = arc_speed(profile, ph), dd = arc_accel(profile, ph);
    return 3 * d * d * dd * profile.d2f(ph) + d * d * d * d * profile.d3f(ph);
  }
  Scalar ddgamma(Scalar s) const {
    s = nudge(s);
    const Scalar ph = phi(s), d = arc_speed(profile, ph), dd = arc_accel(profile, ph),
                 d3 = arc_jerk(profile, ph);
    const Scalar d2 = d * d, d5 = d2 * d2 * d;
    return 6 * d * dd * dd * profile.d2f(ph) + 3 * d2 * d3 * profile.d2f(ph) +
           7 * d2 * d * dd * profile.d3f(ph) + d5 * profile.d4f(ph);
  }

  // principal curvature along the parallel, kappa1 = -f'(phi) phi' / phi,
  // with the s -> 0 limit -f''(0)
  Scalar kappa1(Scalar s) const {
    const Scalar ph = phi(nudge(s));
    if (ph == Scalar(0)) return -profile.d2f(Scalar(0));
    return -profile.df(ph) * arc_speed(profile, ph) / ph;
  }
  Scalar kappa2(Scalar s) const { return -gamma(s); }

  // normal map of the meridian strip: tau(s,u) = base point + u * unit normal
  struct Point { Scalar r, z; };
  Point tau(Scalar s, Scalar u) const {
    const Scalar ph = phi(s), d = arc_speed(profile, ph), F = profile.df(ph);
    return {ph - u * F * d, profile.f(ph) + u * d};
  }

  // centrifugal radius r(s,u) = phi - u f'(phi) phi', written through the
  // bounded ratio f'(phi) phi'/phi so that r/phi never degrades to 0/0
  Scalar radial(Scalar s, Scalar u) const {
    const Scalar ph = phi(s);
    return ph * (Scalar(1) + u * kappa1(s));
  }

 private:
  static Scalar nudge(Scalar s) { return s == Scalar(0) ? Scalar(1e-12) : s; }
};

// per-node curvature rows on the arc-length grid
template <typename Scalar = double>
struct CurvatureTable {
  Eigen::VectorX<Scalar> s, gamma, dgamma, ddgamma, kappa1, kappa2, mean_h, gauss_k;
};

template <typename Scalar>
CurvatureTable<Scalar> curvature_tables(const MeridianGeometry<Scalar>& g) {
  const auto n = g.arc.s.size();
  CurvatureTable<Scalar> t;
  t.s = g.arc.s;
  t.gamma.resize(n); t.dgamma.resize(n); t.ddgamma.resize(n);
  t.kappa1.resize(n); t.kappa2.resize(n); t.mean_h.resize(n); t.gauss_k.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar s = t.s(i);
    t.gamma(i) = g.gamma(s);
    t.dgamma(i) = g.dgamma(s);
    t.ddgamma(i) = g.ddgamma(s);
    t.kappa1(i) = g.kappa1(s);
    t.kappa2(i) = -t.gamma(i);
    t.mean_h(i) = (t.kappa1(i) + t.kappa2(i)) / 2;
    t.gauss_k(i) = t.kappa1(i) * t.kappa2(i);
  }
  return t;
}

template <typename Scalar = double>
struct XiZeta {
  Scalar xi, zeta;
};

// xi_p = a * sup_{s >= p} max(|gamma|, f'(phi)phi'/phi); the sup is taken
// over the table nodes past p (plus p itself and a few beyond-grid probes;
// both envelopes decay monotonically in the tail). zeta_p = ((1-xi)/(1+xi))^2.
// xi >= 1 is reported as-is; consumers that require xi < 1 must check.
template <typename Scalar>
XiZeta<Scalar> xi_zeta(const MeridianGeometry<Scalar>& g, Scalar a, Scalar p) {
  if (!(a > Scalar(0))) throw std::invalid_argument("xi_zeta: a must be > 0");
  if (p < Scalar(0) || p > g.s_max()) throw std::domain_error("xi_zeta: p outside [0, s_max]");
  auto env = [&g](Scalar s) {
    return std::max(std::abs(g.gamma(s)), std::abs(g.kappa1(s)));
  };
  Scalar m = env(p);
  const auto& sg = g.arc.s;
  for (Eigen::Index i = 0; i < sg.size(); ++i)
    if (sg(i) > p) m = std::max(m, env(sg(i)));
  for (int j = 1; j <= 4; ++j) m = std::max(m, env(g.s_max() * std::pow(Scalar(2), j)));
  const Scalar xi = a * m;
  const Scalar zeta = ((1 - xi) / (1 + xi)) * ((1 - xi) / (1 + xi));
  return {xi, zeta};
}

// largest admissible half-width 1 / sup max(|kappa1|, |kappa2|)
template <typename Scalar>
Scalar rho_margin(const MeridianGeometry<Scalar>& g) {
  const Scalar xi1 = xi_zeta(g, Scalar(1), Scalar(0)).xi;
  return Scalar(1) / xi1;
}

template <typename Scalar = double>
struct TailLimitRow {
  std::string name;
  Scalar measured, limit, rel_err;
};

template <typename Scalar = double>
struct TailLimitReport {
  std::vector<TailLimitRow<Scalar>> rows;
  bool window_short;  // fewer than two decades between the cap region and s_max
};

// algebraic tail limits of the arc-length chain and the curvature chain,
// measured at s_max against closed forms
template <typename Scalar>
TailLimitReport<Scalar> tail_limits(const MeridianGeometry<Scalar>& g) {
  const Scalar al = g.profile.alpha, k = g.profile.k, S = g.s_max();
  const Scalar K = std::pow(k, Scalar(-1) / al);
  const Scalar a2 = al * al, a3 = a2 * al, a4 = a3 * al;
  auto pw = [S](Scalar e) { return std::pow(S, e); };
  const Scalar e1 = (al - 1) / al, e2 = (2 * al - 1) / al, e3 = (3 * al - 1) / al,
               e4 = (4 * al - 1) / al;
  TailLimitReport<Scalar> rep;
  rep.window_short = S < Scalar(100) * std::max(Scalar(1), g.profile.R);
  auto add = [&rep](std::string name, Scalar meas, Scalar lim) {
    const Scalar denom = std::max(std::abs(lim), Scalar(1e-300));
    rep.rows.push_back({std::move(name), meas, lim, std::abs(meas - lim) / denom});
  };
  add("phi", pw(Scalar(-1) / al) * g.phi(S), K);
  add("dphi", pw(e1) * g.dphi(S), K / al);
  add("ddphi", pw(e2) * g.ddphi(S), -(al - 1) / a2 * K);
  add("dddphi", pw(e3) * g.dddphi(S), (al - 1) * (2 * al - 1) / a3 * K);
  add("gamma", pw(e2) * g.gamma(S), (al - 1) / a2 * K);
  add("dgamma", pw(e3) * g.dgamma(S), -(al - 1) * (2 * al - 1) / a3 * K);
  add("ddgamma", pw(e4) * g.ddgamma(S), (al - 1) * (2 * al - 1) * (3 * al - 1) / a4 * K);
  return rep;
}

template <typename Scalar = double>
struct InjectivityReport {
  bool ok;
  Scalar rho;  // curvature-limited half-width bound
  std::optional<std::array<Scalar, 4>> witness;  // (s,u) pair of colliding samples
};

// Layer self-intersection check for half-width a. The curvature bound
// a < rho handles the rotational cases (normals reaching the axis need
// a >= 1/sup|kappa1| >= rho); the meridian strip is then sampled on an
// n_s x n_u lattice and hashed into cells of size a/8. Two samples landing
// in one cell whose parameter distance exceeds a/2 witness a fold. Heuristic
// by design: sampling cannot prove injectivity, only refute it.
template <typename Scalar>
InjectivityReport<Scalar> injectivity_check(const MeridianGeometry<Scalar>& g, Scalar a,
                                            Eigen::Index n_s = 400, Eigen::Index n_u = 32) {
  if (!(a > Scalar(0))) throw std::invalid_argument("injectivity_check: a must be > 0");
  InjectivityReport<Scalar> rep;
  rep.rho = rho_margin(g);
  rep.ok = a < rep.rho;
  if (!rep.ok) return rep;

  const Scalar cell = a / 8;
  struct Key {
    long long x, y;
    bool operator==(const Key& o) const { return x == o.x && y == o.y; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.x * 73856093LL ^ k.y * 19349663LL);
    }
  };
  std::unordered_map<Key, std::vector<std::array<Scalar, 2>>, KeyHash> buckets;
  const Scalar S = g.s_max();
  for (Eigen::Index i = 0; i <= n_s; ++i) {
    const Scalar s = S * Scalar(i) / Scalar(n_s);
    for (Eigen::Index j = 0; j <= n_u; ++j) {
      const Scalar u = -a + 2 * a * Scalar(j) / Scalar(n_u);
      const auto pt = g.tau(s, u);
      const Key key{static_cast<long long>(std::floor(pt.r / cell)),
                    static_cast<long long>(std::floor(pt.z / cell))};
      for (const auto& other : buckets[key]) {
        const Scalar ds = s - other[0], du = u - other[1];
        if (std::sqrt(ds * ds + du * du) > a / 2) {
          rep.ok = false;
          rep.witness = std::array<Scalar, 4>{other[0], other[1], s, u};
          return rep;
        }
      }
      buckets[key].push_back({s, u});
    }
  }
  return rep;
}

}  // namespace paralayer
