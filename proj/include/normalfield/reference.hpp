#pragma once

#include "normalfield/core.hpp"
#include "normalfield/ellipsoid.hpp"

/**
 * Closed-form reference values, coded straight from the textbook formulas
 * (Heiskanen & Moritz 2-73, 2-75, 2-78) and used only as independent
 * cross-checks by tests and the verify command.  These deliberately use the
 * literal arctan expression for q0 and q0' rather than the library's q
 * machinery, so an error in one path cannot hide in the other.
 */
namespace normalfield::reference {

namespace detail {

template <typename Scalar>
struct SomiglianaConstants {
  Scalar gamma_e, gamma_p;
};

template <typename Scalar>
SomiglianaConstants<Scalar> somigliana_constants(const EllipsoidParams<Scalar>& p) {
  using std::atan;
  const Scalar eb = p.E / p.b;
  const Scalar th = atan(eb);
  const Scalar q0 = ((1 + 3 / (eb * eb)) * th - 3 / eb) / 2;
  const Scalar q0p = 3 * (1 + 1 / (eb * eb)) * (1 - th / eb) - 1;
  const Scalar m = p.omega * p.omega * p.a * p.a * p.b / p.GM;
  SomiglianaConstants<Scalar> c;
  c.gamma_e = p.GM / (p.a * p.b) * (1 - m - m / 6 * eb * q0p / q0);
  c.gamma_p = p.GM / (p.a * p.a) * (1 + m / 3 * eb * q0p / q0);
  return c;
}

}  // namespace detail

template <typename Scalar>
Scalar normal_gravity_equator(const EllipsoidParams<Scalar>& p) {
  return detail::somigliana_constants(p).gamma_e;
}

template <typename Scalar>
Scalar normal_gravity_pole(const EllipsoidParams<Scalar>& p) {
  return detail::somigliana_constants(p).gamma_p;
}

/// Somigliana's formula: gravity magnitude on the level surface at geodetic
/// latitude lat.
template <typename Scalar>
Scalar somigliana_gravity(const EllipsoidParams<Scalar>& p, Scalar lat) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const auto c = detail::somigliana_constants(p);
  const Scalar s2 = sin(lat) * sin(lat);
  const Scalar c2 = cos(lat) * cos(lat);
  return (p.a * c.gamma_e * c2 + p.b * c.gamma_p * s2) /
         sqrt(p.a * p.a * c2 + p.b * p.b * s2);
}

/// Meridian radius of curvature M(lat) of the reference ellipsoid.
template <typename Scalar>
Scalar meridian_radius(const EllipsoidParams<Scalar>& p, Scalar lat) {
  using std::pow;
  using std::sin;
  const Scalar s2 = sin(lat) * sin(lat);
  return p.a * (1 - p.e2) / pow(1 - p.e2 * s2, Scalar(1.5));
}

/// Prime-vertical radius of curvature N(lat).
template <typename Scalar>
Scalar prime_vertical_radius(const EllipsoidParams<Scalar>& p, Scalar lat) {
  using std::sin;
  using std::sqrt;
  const Scalar s2 = sin(lat) * sin(lat);
  return p.a / sqrt(1 - p.e2 * s2);
}

}  // namespace normalfield::reference
