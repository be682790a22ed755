#pragma once

#include <numbers>

#include "normalfield/coords.hpp"
#include "normalfield/core.hpp"
#include "normalfield/ellipsoid.hpp"

namespace normalfield {

/// Geodetic coordinates: latitude/longitude in radians, ellipsoidal height in
/// meters above the u = b surface.
template <typename Scalar>
struct Geodetic {
  Scalar lat, lon, height;
};

using Geodeticd = Geodetic<double>;

template <typename Scalar>
Vec3<Scalar> geodetic_to_cartesian(const EllipsoidParams<Scalar>& p, Scalar lat, Scalar lon,
                                   Scalar height) {
  using std::abs;
  using std::cos;
  using std::isfinite;
  using std::sin;
  using std::sqrt;
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  if (!(isfinite(lat) && isfinite(lon) && isfinite(height)))
    throw DomainError("geodetic coordinates must be finite");
  if (!(abs(lat) <= half_pi))
    throw DomainError("latitude must lie in [-90, 90] degrees");
  const Scalar sphi = sin(lat), cphi = cos(lat);
  const Scalar N = p.a / sqrt(1 - p.e2 * sphi * sphi);
  return Vec3<Scalar>((N + height) * cphi * cos(lon), (N + height) * cphi * sin(lon),
                      (N * (1 - p.e2) + height) * sphi);
}

/// Inverse conversion by fixed-point iteration on the latitude; converges in
/// a handful of steps for exterior points.
template <typename Scalar>
Geodetic<Scalar> cartesian_to_geodetic(const EllipsoidParams<Scalar>& p, const Vec3<Scalar>& x) {
  using std::abs;
  using std::atan2;
  using std::cos;
  using std::hypot;
  using std::sqrt;
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!x.allFinite())
    throw DomainError("cartesian coordinates must be finite");
  const Scalar rho = hypot(x(0), x(1));
  Geodetic<Scalar> g;
  if (rho == Scalar(0)) {
    g.lat = x(2) >= Scalar(0) ? half_pi : -half_pi;
    g.lon = Scalar(0);
    g.height = abs(x(2)) - p.b;
    return g;
  }
  g.lon = atan2(x(1), x(0));
  if (g.lon == -pi) g.lon = pi;
  Scalar phi = atan2(x(2), rho * (1 - p.e2));
  Scalar N = p.a;
  for (int it = 0; it < 12; ++it) {
    using std::sin;
    const Scalar sphi = sin(phi);
    N = p.a / sqrt(1 - p.e2 * sphi * sphi);
    const Scalar h = rho / cos(phi) - N;
    const Scalar next = atan2(x(2), rho * (1 - p.e2 * N / (N + h)));
    const bool done = abs(next - phi) < Scalar(1e-15);
    phi = next;
    if (done) break;
  }
  const Scalar sphi = sin(phi);
  N = p.a / sqrt(1 - p.e2 * sphi * sphi);
  g.lat = phi;
  g.height = rho / cos(phi) - N;
  return g;
}

/// Reduced latitude of the surface point at geodetic latitude lat:
/// tan(beta) = (1 - f) tan(lat).
template <typename Scalar>
Scalar reduced_latitude(const EllipsoidParams<Scalar>& p, Scalar lat) {
  using std::abs;
  using std::atan;
  using std::tan;
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  if (!(abs(lat) <= half_pi))
    throw DomainError("latitude must lie in [-90, 90] degrees");
  if (abs(lat) == half_pi) return lat;
  return atan((1 - p.f) * tan(lat));
}

/// Point on the reference surface u = b at the given geodetic latitude.
template <typename Scalar>
Vec3<Scalar> surface_point(const EllipsoidParams<Scalar>& p, Scalar lat, Scalar lon) {
  return to_cartesian(p, HarmonicCoord<Scalar>{p.b, reduced_latitude(p, lat), lon});
}

}  // namespace normalfield
