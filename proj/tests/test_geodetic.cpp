#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "normalfield/field.hpp"
#include "normalfield/geodetic.hpp"
#include "normalfield/reference.hpp"

using namespace normalfield;
using Vec3d = Vec3<double>;
constexpr double pi = std::numbers::pi;

static doctest::Approx approx(double v, double tol) {
  return doctest::Approx(v).epsilon(tol).scale(0.0);
}

static EllipsoidParamsd grs80() {
  return derive_params(6378137.0, 1.0 / 298.257222101, 3.986005e14, 7.292115e-5);
}

static EllipsoidParamsd wgs84() {
  return derive_params(6378137.0, 1.0 / 298.257223563, 3.986004418e14, 7.292115e-5);
}

TEST_CASE("normal gravity at the equator and pole: frozen constants") {
  const EllipsoidParamsd g = grs80();
  CHECK(reference::normal_gravity_equator(g) == approx(9.7803267715348799, 1e-12));
  CHECK(reference::normal_gravity_pole(g) == approx(9.8321863685195748, 1e-12));
  const EllipsoidParamsd w = wgs84();
  CHECK(reference::normal_gravity_equator(w) == approx(9.7803253359038917, 1e-12));
  CHECK(reference::normal_gravity_pole(w) == approx(9.8321849378634005, 1e-12));
}

TEST_CASE("Somigliana formula: endpoints, 45 degrees, monotonicity") {
  const EllipsoidParamsd p = grs80();
  CHECK(reference::somigliana_gravity(p, 0.0) ==
        approx(reference::normal_gravity_equator(p), 1e-15));
  CHECK(reference::somigliana_gravity(p, pi / 2) ==
        approx(reference::normal_gravity_pole(p), 1e-15));
  CHECK(reference::somigliana_gravity(p, pi / 4) == approx(9.8061992025227642, 1e-12));
  double prev = 0;
  for (int i = 0; i <= 18; ++i) {
    const double g = reference::somigliana_gravity(p, i * 5.0 * pi / 180);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("surface gravity magnitude matches the Somigliana oracle") {
  const EllipsoidParamsd p = grs80();
  for (int i = 0; i <= 18; ++i) {
    const double lat = i * 5.0 * pi / 180;
    const FieldJet2d jet = field_jet(p, surface_point(p, lat, 0.0));
    CAPTURE(i * 5.0);
    CHECK(jet.gamma_mag == approx(reference::somigliana_gravity(p, lat), 1e-9));
  }
}

TEST_CASE("geodetic to cartesian: anchors") {
  const EllipsoidParamsd p = grs80();
  const Vec3d eq = geodetic_to_cartesian(p, 0.0, 0.0, 0.0);
  CHECK(eq(0) == p.a);
  CHECK(eq(1) == 0.0);
  CHECK(eq(2) == 0.0);
  const Vec3d eqh = geodetic_to_cartesian(p, 0.0, 0.0, 1000.0);
  CHECK(eqh(0) == p.a + 1000.0);
  const Vec3d np = geodetic_to_cartesian(p, pi / 2, 0.0, 0.0);
  CHECK(std::fabs(np(0)) < 1e-9);
  CHECK(np(2) == approx(p.b, 1e-15));
  const Vec3d west = geodetic_to_cartesian(p, 0.0, -pi / 2, 500.0);
  CHECK(west(1) == approx(-(p.a + 500.0), 1e-15));

  CHECK_THROWS_AS(geodetic_to_cartesian(p, 1.6, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(geodetic_to_cartesian(p, 0.0, 0.0, std::nan("")), DomainError);
}

TEST_CASE("geodetic round trip") {
  const EllipsoidParamsd p = grs80();
  std::mt19937_64 eng(19);
  auto unif = [&] { return std::ldexp(double(eng() >> 11), -53); };
  for (int i = 0; i < 200; ++i) {
    const double lat = (unif() * 2 - 1) * 89.9 * pi / 180;
    const double lon = (unif() * 2 - 1) * pi * 0.999;
    const double h = unif() * 1e5;
    const Vec3d x = geodetic_to_cartesian(p, lat, lon, h);
    const Geodeticd g = cartesian_to_geodetic(p, x);
    CAPTURE(lat);
    CAPTURE(h);
    CHECK(g.lat == approx(lat, 1e-12));
    CHECK(g.lon == approx(lon, 1e-12));
    CHECK(std::fabs(g.height - h) < 1e-7);
  }
}

TEST_CASE("cartesian to geodetic on the axis") {
  const EllipsoidParamsd p = grs80();
  const Geodeticd n = cartesian_to_geodetic(p, Vec3d(0, 0, p.b + 500));
  CHECK(n.lat == pi / 2);
  CHECK(n.height == approx(500.0, 1e-9));
  const Geodeticd s = cartesian_to_geodetic(p, Vec3d(0, 0, -(p.b + 500)));
  CHECK(s.lat == -pi / 2);
}

TEST_CASE("reduced latitude") {
  const EllipsoidParamsd p = grs80();
  CHECK(reduced_latitude(p, 0.0) == 0.0);
  CHECK(reduced_latitude(p, pi / 2) == pi / 2);
  CHECK(reduced_latitude(p, -pi / 2) == -pi / 2);
  CHECK(reduced_latitude(p, pi / 4) == approx(0.78371894458116156, 1e-14));
  for (const double lat : {0.2, 0.7, 1.2, 1.5}) {
    const double beta = reduced_latitude(p, lat);
    CHECK(std::tan(beta) == approx((1 - p.f) * std::tan(lat), 1e-13));
    CHECK(beta < lat);  // oblate: reduced latitude pulls toward the equator
  }
  CHECK_THROWS_AS(reduced_latitude(p, 1.6), DomainError);
}

TEST_CASE("surface points sit on u = b at zero height") {
  const EllipsoidParamsd p = grs80();
  for (int i = 0; i <= 17; ++i) {
    const double lat = (i * 10.0 - 85.0) * pi / 180;
    const Vec3d x = surface_point(p, lat, 0.4);
    CAPTURE(lat);
    CHECK(from_cartesian(p, x).u == approx(p.b, 1e-12));
    const Geodeticd g = cartesian_to_geodetic(p, x);
    CHECK(std::fabs(g.height) < 1e-6);
    CHECK(g.lat == approx(lat, 1e-12));
  }
}

TEST_CASE("curvature radii of the reference surface") {
  const EllipsoidParamsd p = grs80();
  CHECK(reference::meridian_radius(p, 0.0) == p.a * (1 - p.e2));
  CHECK(reference::prime_vertical_radius(p, 0.0) == p.a);
  const double polar = p.a * p.a / p.b;
  CHECK(reference::meridian_radius(p, pi / 2) == approx(polar, 1e-13));
  CHECK(reference::prime_vertical_radius(p, pi / 2) == approx(polar, 1e-13));
  double prevM = 0, prevN = 0;
  for (int i = 0; i <= 18; ++i) {
    const double lat = i * 5.0 * pi / 180;
    const double M = reference::meridian_radius(p, lat);
    const double N = reference::prime_vertical_radius(p, lat);
    CHECK(N >= M);  // oblate ellipsoid: meridian bends harder
    CHECK(M > prevM);
    CHECK(N > prevN);
    prevM = M;
    prevN = N;
  }
}
