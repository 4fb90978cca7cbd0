#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "paralayer/potentials.hpp"
#include "paralayer/schrodinger1d.hpp"

namespace paralayer {

// n-th transverse Dirichlet level of the straight strip of half width a
template <typename Scalar>
Scalar transverse_level(int n, Scalar a) {
  if (n < 1) throw std::invalid_argument("transverse_level: n must be >= 1");
  if (!(a > Scalar(0))) throw std::invalid_argument("transverse_level: a must be > 0");
  const Scalar w = Scalar(n) * Scalar(M_PI) / (2 * a);
  return w * w;
}

// power law N(E) ~ coefficient * E^{-exponent} for eigenvalue counts at
// depth E below the essential threshold
template <typename Scalar = double>
struct AsymptoticLaw {
  Scalar coefficient{};
  Scalar exponent{};

  Scalar eval(Scalar E) const {
    if (!(E > Scalar(0))) throw std::domain_error("AsymptoticLaw: E must be > 0");
    return coefficient * std::pow(E, -exponent);
  }
};

// accumulation law of the layer over z = k|x|^alpha. The radial term
// -1/(4 r^2) with r ~ (s/k)^{1/alpha} leaves the half-line tail
// -c s^{-2/alpha}, c = k^{2/alpha}/4, whose phase-space volume gives
//   N(E) ~ alpha k 2^{-alpha} B(3/2, (alpha-1)/2) / (2 pi) * E^{-(alpha-1)/2}
template <typename Scalar>
AsymptoticLaw<Scalar> layer_asymptote(Scalar alpha, Scalar k) {
  if (!(alpha > Scalar(1))) throw std::domain_error("layer_asymptote: alpha must be > 1");
  if (!(k > Scalar(0))) throw std::domain_error("layer_asymptote: k must be > 0");
  AsymptoticLaw<Scalar> law;
  law.exponent = (alpha - 1) / 2;
  const Scalar lnb = std::lgamma(Scalar(1.5)) + std::lgamma(law.exponent) -
                     std::lgamma(Scalar(1.5) + law.exponent);
  law.coefficient =
      alpha * k * std::pow(Scalar(2), -alpha) * std::exp(lnb) / (2 * Scalar(M_PI));
  return law;
}

// logarithmic reference rate of the cone the layer degenerates into as
// alpha -> 1, for side-by-side reporting
template <typename Scalar>
Scalar conical_reference(Scalar k, Scalar E) {
  if (!(E > Scalar(0)) || E >= Scalar(1))
    throw std::domain_error("conical_reference: need 0 < E < 1");
  return k * std::abs(std::log(E)) / (4 * Scalar(M_PI));
}

template <typename Scalar = double>
struct RatioRow {
  Scalar E{};        // depth below the essential threshold
  int n_lower = 0;   // Dirichlet-cut proxy count
  int n_upper = 0;   // Robin-cut proxy count
  Scalar asymptote{};
  Scalar ratio_lower{};
  Scalar ratio_upper{};
};

// bracketed counts at the requested depths through the translated cut
// proxies on (p, inf):
//   lower   Dirichlet half-line with (1-xi_p)^2 W_p, counted below
//           -E (1-xi_p)^2
//   upper   Robin half-line with (1+xi_p)^2 U_p and the rank-one trace
//           term, counted below -E (1+xi_p)^2
// Both share the turning-point truncation of the upper tail constant, the
// larger of the two.
template <typename Scalar>
std::vector<RatioRow<Scalar>> ratio_study(const StripPotentials<Scalar>& pots,
                                          const std::vector<Scalar>& depths,
                                          Scalar h = Scalar(0.05)) {
  if (!(h > Scalar(0))) throw std::invalid_argument("ratio_study: h must be > 0");
  const Scalar alpha = pots.geometry().profile.alpha;
  const Scalar k = pots.geometry().profile.k;
  const auto law = layer_asymptote(alpha, k);
  const Scalar xi = pots.cut().xi, ze = pots.cut().zeta;
  const Scalar beta = 2 / alpha;
  const Scalar c_up = std::pow(k, beta) / (4 * ze);

  const auto q_lo = [&pots](Scalar s) { return pots.q(QVariant::CutLower, s); };
  const auto q_up = [&pots](Scalar s) { return pots.q(QVariant::CutUpper, s); };

  std::vector<RatioRow<Scalar>> rows;
  rows.reserve(depths.size());
  for (const Scalar E : depths) {
    if (!(E > Scalar(0))) throw std::domain_error("ratio_study: depths must be > 0");
    const Scalar L = truncation_length(beta, c_up, E);
    const Grid1D<Scalar> grid{L, Eigen::Index(std::ceil(L / h))};
    const auto op_lo = discretize(q_lo, grid, Boundary1D::DirichletBoth);
    const auto op_up =
        robin_rank_one(discretize(q_up, grid, Boundary1D::RobinLeft), pots.robin_sigma());

    RatioRow<Scalar> row;
    row.E = E;
    row.n_lower = count_below(op_lo, -E * (1 - xi) * (1 - xi));
    row.n_upper = count_below(op_up, -E * (1 + xi) * (1 + xi));
    row.asymptote = law.eval(E);
    row.ratio_lower = Scalar(row.n_lower) / row.asymptote;
    row.ratio_upper = Scalar(row.n_upper) / row.asymptote;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace paralayer
