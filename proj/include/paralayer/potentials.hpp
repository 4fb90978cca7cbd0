#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "paralayer/geometry.hpp"

namespace paralayer {

template <typename Scalar = double>
struct MetricField {
  Scalar jac, g;
};

// straightening Jacobian J = 1 - u*gamma(s) and metric factor g = J^2
template <typename Scalar>
MetricField<Scalar> metric(const MeridianGeometry<Scalar>& geom, Scalar s, Scalar u) {
  const Scalar J = Scalar(1) - u * geom.gamma(s);
  if (!(J > Scalar(0))) throw std::domain_error("metric: J <= 0, half-width violation");
  return {J, J * J};
}

// full straightened fiber potential
//   V_m = u*gdd/(2 g^{3/2}) - gamma^2/(4g) - (5/4) u^2 gd^2/g^2 + (m^2-1/4)/r^2
// with r = phi - u f'(phi) phi'. Only m^2 enters; m is canonicalized to |m|.
template <typename Scalar>
Scalar potential_full(const MeridianGeometry<Scalar>& geom, Scalar s, Scalar u, int m) {
  const auto mf = metric(geom, s, u);
  const Scalar r = geom.radial(s, u);
  if (!(r > Scalar(0))) throw std::domain_error("potential_full: r <= 0, outside valid layer");
  const Scalar ga = geom.gamma(s), gd = geom.dgamma(s), gdd = geom.ddgamma(s);
  const Scalar J = mf.jac, g = mf.g;
  const Scalar mm = Scalar(std::abs(m));
  return u * gdd / (2 * g * J) - ga * ga / (4 * g) -
         Scalar(1.25) * u * u * gd * gd / (g * g) + (mm * mm - Scalar(0.25)) / (r * r);
}

enum class QVariant {
  Global,    // bounded on the whole half-line, no cut (p = 0 construction)
  CutLower,  // Dirichlet-cut lower proxy, potential translated from (p,inf)
  CutUpper,  // Robin-cut upper proxy, potential translated from (p,inf)
};

// Envelope potentials and 1D proxy builders for one (geometry, a, p)
// configuration; xi/zeta at the origin and at the cut are computed once.
// Construction never throws on xi >= 1 (xi is reported, not clamped); the
// evaluations that require xi < 1 do.
template <typename Scalar = double>
class StripPotentials {
 public:
  StripPotentials(const MeridianGeometry<Scalar>& geom, Scalar a, Scalar p)
      : geom_(&geom),
        a_(a),
        p_(p),
        x0_(xi_zeta(geom, a, Scalar(0))),
        xp_(xi_zeta(geom, a, p)) {}

  const MeridianGeometry<Scalar>& geometry() const { return *geom_; }
  Scalar a() const { return a_; }
  Scalar p() const { return p_; }
  const XiZeta<Scalar>& origin() const { return x0_; }
  const XiZeta<Scalar>& cut() const { return xp_; }

  // upper envelope of V_0 on s >= p:
  //   W_p = a|gdd|/(2(1-xi)^3) - 1/(4(1+xi)^2 phi^2)
  Scalar W(Scalar s) const {
    const Scalar xi = require_cut();
    const Scalar ph = geom_->phi(s), gdd = geom_->ddgamma(s);
    return a_ * std::abs(gdd) / (2 * cube(1 - xi)) -
           Scalar(0.25) / ((1 + xi) * (1 + xi) * ph * ph);
  }

  // lower envelope of V_0 on s >= p:
  //   U_p = -gamma^2/(4(1-xi)^2) - 5a^2 gd^2/(4(1-xi)^4)
  //         - a|gdd|/(2(1-xi)^3) - 1/(4(1-xi)^2 phi^2)
  Scalar U(Scalar s) const {
    const Scalar xi = require_cut();
    const Scalar ph = geom_->phi(s), ga = geom_->gamma(s), gd = geom_->dgamma(s),
                 gdd = geom_->ddgamma(s);
    const Scalar om = 1 - xi;
    return -ga * ga / (4 * om * om) -
           Scalar(1.25) * a_ * a_ * gd * gd / (om * om * om * om) -
           a_ * std::abs(gdd) / (2 * cube(om)) - Scalar(0.25) / (om * om * ph * ph);
  }

  // fiber lower envelope on the whole half-line (origin xi):
  //   U_m = phi^{-2} [ (m^2-1/4)/(1+xi0)^2 - phi^2 gamma^2/(4(1-xi0)^2)
  //           - a phi^2 |gdd|/(2(1-xi0)^3) - (5/4) a^2 phi^2 gd^2/(1-xi0)^4 ]
  Scalar U_m(Scalar s, int m) const {
    const Scalar xi = require_origin();
    const Scalar ph = geom_->phi(s), ga = geom_->gamma(s), gd = geom_->dgamma(s),
                 gdd = geom_->ddgamma(s);
    const Scalar mm = Scalar(std::abs(m));
    const Scalar om = 1 - xi;
    return (mm * mm - Scalar(0.25)) / ((1 + xi) * (1 + xi) * ph * ph) -
           ga * ga / (4 * om * om) - a_ * std::abs(gdd) / (2 * cube(om)) -
           Scalar(1.25) * a_ * a_ * gd * gd / (om * om * om * om);
  }

  // 1D comparison potentials; the cut variants are the (p,inf) restrictions
  // translated to the half-line, q(s) = W_p(s+p) / U_p(s+p) with the metric
  // prefactors, so all three are bounded on [0,inf)
  Scalar q(QVariant v, Scalar s) const {
    if (s < Scalar(0)) throw std::domain_error("q: s must be >= 0");
    switch (v) {
      case QVariant::Global: {
        const Scalar xi = require_origin();
        const Scalar ze = x0_.zeta;
        const Scalar ga = geom_->gamma(s), gd = geom_->dgamma(s), gdd = geom_->ddgamma(s);
        return -(ga * ga / 4 + a_ * std::abs(gdd) / (2 * (1 - xi)) +
                 Scalar(1.25) * a_ * a_ * gd * gd / ((1 - xi) * (1 - xi))) /
               ze;
      }
      case QVariant::CutLower: {
        const Scalar xi = require_cut();
        return W(s + p_) * (1 - xi) * (1 - xi);
      }
      case QVariant::CutUpper: {
        const Scalar xi = require_cut();
        return U(s + p_) * (1 + xi) * (1 + xi);
      }
    }
    throw std::logic_error("q: unknown variant");
  }

  // boundary coupling of the natural cut at s = p, B(u) = gd(p) u / (2 J^3)
  Scalar robin_boundary(Scalar u) const {
    const Scalar J = metric(*geom_, p_, u).jac;
    return geom_->dgamma(p_) * u / (2 * cube(J));
  }
  // uniform 2D bound of the coupling, -a|gd(p)|/(2(1-xi_p)^3)
  Scalar robin_bound() const {
    const Scalar xi = require_cut();
    return -a_ * std::abs(geom_->dgamma(p_)) / (2 * cube(1 - xi));
  }
  // rank-one coefficient of the 1D upper proxy, -a|gd(p)|/(2(1-xi_p) zeta_p)
  Scalar robin_sigma() const {
    const Scalar xi = require_cut();
    return -a_ * std::abs(geom_->dgamma(p_)) / (2 * (1 - xi) * xp_.zeta);
  }

 private:
  static Scalar cube(Scalar x) { return x * x * x; }
  Scalar require_cut() const {
    if (!(xp_.xi < Scalar(1))) throw std::domain_error("potentials: xi_p >= 1");
    return xp_.xi;
  }
  Scalar require_origin() const {
    if (!(x0_.xi < Scalar(1))) throw std::domain_error("potentials: xi_0 >= 1");
    return x0_.xi;
  }

  const MeridianGeometry<Scalar>* geom_;
  Scalar a_, p_;
  XiZeta<Scalar> x0_, xp_;
};

// smallest M >= 1 with U_m > 0 at every sampled node for all |m| >= M
// (monotone in m, so checking M itself suffices); returns m_cap+1 if none
template <typename Scalar>
int smallest_positive_mode(const StripPotentials<Scalar>& pots,
                           const Eigen::VectorX<Scalar>& s_nodes, int m_cap = 64) {
  for (int m = 1; m <= m_cap; ++m) {
    bool all_pos = true;
    for (Eigen::Index i = 0; i < s_nodes.size() && all_pos; ++i)
      all_pos = pots.U_m(s_nodes(i), m) > Scalar(0);
    if (all_pos) return m;
  }
  return m_cap + 1;
}

}  // namespace paralayer
