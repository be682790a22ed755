#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "normalfield/ellipsoid.hpp"
#include "normalfield/potential.hpp"

using namespace normalfield;
constexpr double pi = std::numbers::pi;

static doctest::Approx approx(double v, double tol) {
  return doctest::Approx(v).epsilon(tol).scale(0.0);
}

static EllipsoidParamsd grs80() {
  return derive_params(6378137.0, 1.0 / 298.257222101, 3.986005e14, 7.292115e-5);
}

TEST_CASE("U is constant on the level surface u = b") {
  const EllipsoidParamsd p = grs80();
  // U0 = GM/E atan(E/b) + omega^2 a^2 / 3, evaluated independently at 60
  // digits.
  const double U0 = 62636860.850046091112;
  for (const double deg : {0.0, 30.0, 60.0, 90.0}) {
    CAPTURE(deg);
    CHECK(potential(p, p.b, deg * pi / 180) == approx(U0, 1e-9));
  }
  CHECK(potential(p, p.b, 0.3) == approx(U0, 1e-13));
}

TEST_CASE("value at a fixed exterior point") {
  const EllipsoidParamsd p = grs80();
  CHECK(potential(p, 6366769.1223368885, 0.78371894870991728) ==
        approx(62538952.896485056, 1e-13));
}

TEST_CASE("omega = 0 reduces to the pure attraction term") {
  const EllipsoidParamsd p = derive_params(6378137.0, 1.0 / 298.257222101, 3.986005e14, 0.0);
  for (const double beta : {-1.2, 0.0, 0.4, 1.5}) {
    const double u = 1.3 * p.b;
    CHECK(potential(p, u, beta) == p.GM / p.E * std::atan(p.E / u));
  }
}

TEST_CASE("far field: gravitational part approaches GM/u on the equator") {
  const EllipsoidParamsd p = grs80();
  const double u = 50 * p.b;
  const double grav = potential(p, u, 0.0) - 0.5 * p.omega * p.omega * (u * u + p.E * p.E);
  CHECK(grav * u / p.GM == approx(1.0, 0.01));
}

TEST_CASE("parity in beta") {
  const EllipsoidParamsd p = grs80();
  for (const double beta : {0.2, 0.9, 1.5}) {
    const double u = 1.1 * p.b;
    CHECK(potential(p, u, beta) == potential(p, u, -beta));
    const PotentialJet<double> jp = potential_jet(p, u, beta);
    const PotentialJet<double> jm = potential_jet(p, u, -beta);
    CHECK(jp.U_beta == -jm.U_beta);
    CHECK(jp.U_ubeta == -jm.U_ubeta);
    CHECK(jp.U_uu == jm.U_uu);
  }
}

TEST_CASE("symmetry axes kill the beta derivative") {
  const EllipsoidParamsd p = grs80();
  const PotentialJet<double> eq = potential_jet(p, 1.2 * p.b, 0.0);
  CHECK(eq.U_beta == 0.0);
  CHECK(eq.U_ubeta == 0.0);
  const PotentialJet<double> ax = potential_jet(p, 1.2 * p.b, pi / 2);
  CHECK(std::fabs(ax.U_beta) < 1e-9);
}

TEST_CASE("analytic partials match finite differences on a grid") {
  const EllipsoidParamsd p = grs80();
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double u = p.b * (1.0 + 2.0 * i / 9.0);
      const double beta = -1.4 + 2.8 * j / 9.0;
      const double hu = 1e-6 * u, hb = 1e-6;
      const PotentialJet<double> jet = potential_jet(p, u, beta);
      const PotentialJet<double> ju_p = potential_jet(p, u + hu, beta);
      const PotentialJet<double> ju_m = potential_jet(p, u - hu, beta);
      const PotentialJet<double> jb_p = potential_jet(p, u, beta + hb);
      const PotentialJet<double> jb_m = potential_jet(p, u, beta - hb);
      CAPTURE(u);
      CAPTURE(beta);
      // First partials against differences of U, second against differences
      // of the analytic first partials.  The absolute floors are the FD
      // cancellation noise, eps * (differenced quantity) / step; they matter
      // only where a partial passes through zero (U_beta vanishes on u = b).
      const auto close = [](double analytic, double fd, double floor) {
        return std::fabs(analytic - fd) < 1e-7 * std::fabs(analytic) + floor;
      };
      CHECK(jet.U_u == approx((ju_p.U - ju_m.U) / (2 * hu), 1e-7));
      CHECK(jet.U_uu == approx((ju_p.U_u - ju_m.U_u) / (2 * hu), 1e-7));
      CHECK(close(jet.U_beta, (jb_p.U - jb_m.U) / (2 * hb), 1e-2));
      CHECK(close(jet.U_betabeta, (jb_p.U_beta - jb_m.U_beta) / (2 * hb), 1e-4));
      CHECK(close(jet.U_ubeta, (jb_p.U_u - jb_m.U_u) / (2 * hb), 1e-8));
      CHECK(close(jet.U_ubeta, (ju_p.U_beta - ju_m.U_beta) / (2 * hu), 1e-8));
    }
  }
}

TEST_CASE("domain validation") {
  const EllipsoidParamsd p = grs80();
  CHECK_THROWS_AS(potential(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(potential(p, -p.b, 0.0), DomainError);
  CHECK_THROWS_AS(potential_jet(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(potential(p, std::nan(""), 0.0), DomainError);
}
