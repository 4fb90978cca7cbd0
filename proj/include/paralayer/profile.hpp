#pragma once

#include <cmath>
#include <stdexcept>

namespace paralayer {

enum class CapKind { PurePower, QuinticBlend };

// Generating curve z = f(x) of the rotation surface: f(x) = k*x^alpha for
// x >= R, with an optional quintic cap on [0,R] matching value and the first
// two derivatives at R (so f is C^2 there; higher derivatives jump at R).
// PurePower (R = 0) keeps the bare power for all x; it is admitted for every
// alpha > 1 even though f''(0) is then infinite when alpha < 2.
template <typename Scalar = double>
struct LayerProfile {
  Scalar alpha{};
  Scalar k{};
  Scalar R{};
  CapKind cap = CapKind::PurePower;
  // cap coefficients, f(x) = c3 x^3 + c4 x^4 + c5 x^5 on [0,R]
  Scalar c3{}, c4{}, c5{};

  static LayerProfile make(Scalar alpha, Scalar k, Scalar R = Scalar(0),
                           CapKind cap = CapKind::PurePower) {
    if (!(alpha > Scalar(1))) throw std::invalid_argument("profile: alpha must be > 1");
    if (!(k > Scalar(0))) throw std::invalid_argument("profile: k must be > 0");
    if (R < Scalar(0)) throw std::invalid_argument("profile: R must be >= 0");
    if (cap == CapKind::PurePower && R != Scalar(0))
      throw std::invalid_argument("profile: PurePower requires R = 0");
    if (cap == CapKind::QuinticBlend && R == Scalar(0))
      throw std::invalid_argument("profile: QuinticBlend requires R > 0");
    LayerProfile p;
    p.alpha = alpha; p.k = k; p.R = R; p.cap = cap;
    if (cap == CapKind::QuinticBlend) {
      // unique {x^3,x^4,x^5} cap with f, f', f'' continuous at R
      const Scalar a = alpha;
      p.c3 = (a - 4) * (a - 5) / 2 * k * std::pow(R, a - 3);
      p.c4 = (a - 3) * (5 - a) * k * std::pow(R, a - 4);
      p.c5 = (a - 3) * (a - 4) / 2 * k * std::pow(R, a - 5);
    }
    return p;
  }

  // x^e with the 0^0 == limit convention used by the derivative ladder:
  // a zero prefactor always wins, and x = 0 with e < 0 only occurs when the
  // prefactor vanished already (integer alpha) or the quantity is genuinely
  // infinite (alpha < 2 curvature at the origin).
  static Scalar powm(Scalar coeff, Scalar x, Scalar e) {
    if (coeff == Scalar(0)) return Scalar(0);
    return coeff * std::pow(x, e);
  }

  Scalar f(Scalar x) const {
    if (x < R) return ((c5 * x + c4) * x + c3) * x * x * x;
    return k * std::pow(x, alpha);
  }
  Scalar df(Scalar x) const {
    if (x < R) return ((5 * c5 * x + 4 * c4) * x + 3 * c3) * x * x;
    return powm(alpha * k, x, alpha - 1);
  }
  Scalar d2f(Scalar x) const {
    if (x < R) return ((20 * c5 * x + 12 * c4) * x + 6 * c3) * x;
    return powm(alpha * (alpha - 1) * k, x, alpha - 2);
  }
  Scalar d3f(Scalar x) const {
    if (x < R) return (60 * c5 * x + 24 * c4) * x + 6 * c3;
    return powm(alpha * (alpha - 1) * (alpha - 2) * k, x, alpha - 3);
  }
  Scalar d4f(Scalar x) const {
    if (x < R) return 120 * c5 * x + 24 * c4;
    return powm(alpha * (alpha - 1) * (alpha - 2) * (alpha - 3) * k, x, alpha - 4);
  }
};

}  // namespace paralayer
