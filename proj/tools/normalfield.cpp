// Command-line front end for the normal-field library: single-point records,
// deterministic grid evaluation, the self-verification suite, and the
// curvature-relation scaling experiment.  Every number printed here traces to
// a library call; this file only does argument plumbing and formatting.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "normalfield/normalfield.hpp"

namespace nf = normalfield;

namespace {

constexpr double kDeg = std::numbers::pi / 180;

/// Usage-level problems detected after CLI11 parsing (exit code 1, like any
/// other bad invocation).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PointOptions {
  std::string ellipsoid;
  std::vector<double> xyz, geodetic, harmonic;
  std::string units = "si";
  std::string format = "csv";
};

struct GridOptions {
  std::string ellipsoid;
  std::string lat_range, lon_range;
  std::vector<double> heights;
  std::vector<std::string> quantities;
  std::string out;
};

struct VerifyOptions {
  std::string ellipsoid;
  std::uint64_t seed = 42;
  int count = 50;
  double tolerance_scale = 1.0;
};

struct CurvrelOptions {
  std::string ellipsoid;
  std::string model;
  std::vector<double> geodetic;
  std::vector<double> scales = {1.0, 2.0, 4.0};
};

nf::Vec3<double> resolve_position(const nf::EllipsoidParamsd& p, const PointOptions& o) {
  const int forms = int(!o.xyz.empty()) + int(!o.geodetic.empty()) + int(!o.harmonic.empty());
  if (forms != 1)
    throw UsageError("exactly one of --xyz, --geodetic, --harmonic is required");
  if (!o.xyz.empty()) return nf::Vec3<double>(o.xyz[0], o.xyz[1], o.xyz[2]);
  if (!o.geodetic.empty())
    return nf::geodetic_to_cartesian(p, o.geodetic[0] * kDeg, o.geodetic[1] * kDeg,
                                     o.geodetic[2]);
  // Harmonic input is canonicalized through the Cartesian map so that
  // equivalent position forms produce identical records.
  return nf::to_cartesian(p, {o.harmonic[0], o.harmonic[1], o.harmonic[2]});
}

nf::LocalFrame<double> frame_or_polar_fallback(const nf::FieldJet2d& jet) {
  try {
    return nf::local_frame(jet);
  } catch (const nf::AxisError&) {
    // On the rotation axis east/north are arbitrary, but the horizontal block
    // of the Hessian is isotropic there, so any right-handed frame with
    // z = -gamma/|gamma| yields the same matrix.
    const double s = jet.gamma(2) < 0 ? 1.0 : -1.0;
    nf::LocalFrame<double> f;
    f.R.row(0) = nf::Vec3<double>(1, 0, 0);
    f.R.row(1) = nf::Vec3<double>(0, s, 0);
    f.R.row(2) = nf::Vec3<double>(0, 0, s);
    return f;
  }
}

std::vector<std::pair<std::string, double>> point_record(const nf::EllipsoidParamsd& p,
                                                         const nf::Vec3<double>& x,
                                                         bool eotvos_units) {
  const nf::FieldJet2d jet = nf::field_jet(p, x);
  const nf::HarmonicCoordd h = nf::from_cartesian(p, x);
  const nf::Geodeticd geo = nf::cartesian_to_geodetic(p, x);
  const nf::Sym3<double> rot = nf::rotate_hessian(jet.hess, frame_or_polar_fallback(jet));
  const nf::EotvosMatrix<double> easm = nf::eotvos_assemble(p, jet, x);
  const nf::CurvatureSummary<double> s = nf::curvature_summary(p, jet, x);

  double disc = std::max({std::fabs(easm.U_xx - rot.xx()), std::fabs(easm.U_yy - rot.yy()),
                          std::fabs(easm.U_zz - rot.zz()), std::fabs(easm.U_yz - rot.yz()),
                          std::fabs(rot.xy()), std::fabs(rot.xz())});

  const double gs = eotvos_units ? 1e9 : 1.0;  // 1 E = 1e-9 s^-2
  std::vector<std::pair<std::string, double>> rec;
  rec.reserve(32);
  rec.emplace_back("X", x(0));
  rec.emplace_back("Y", x(1));
  rec.emplace_back("Z", x(2));
  rec.emplace_back("u", h.u);
  rec.emplace_back("beta_rad", h.beta);
  rec.emplace_back("lambda_rad", h.lambda);
  rec.emplace_back("lat_deg", geo.lat / kDeg);
  rec.emplace_back("lon_deg", geo.lon / kDeg);
  rec.emplace_back("h_m", geo.height);
  rec.emplace_back("U", jet.U);
  rec.emplace_back("gamma_X", jet.gamma(0));
  rec.emplace_back("gamma_Y", jet.gamma(1));
  rec.emplace_back("gamma_Z", jet.gamma(2));
  rec.emplace_back("gamma_mag", jet.gamma_mag);
  rec.emplace_back("U_xx_rot", gs * rot.xx());
  rec.emplace_back("U_yy_rot", gs * rot.yy());
  rec.emplace_back("U_zz_rot", gs * rot.zz());
  rec.emplace_back("U_xy_rot", gs * rot.xy());
  rec.emplace_back("U_xz_rot", gs * rot.xz());
  rec.emplace_back("U_yz_rot", gs * rot.yz());
  rec.emplace_back("U_xx_asm", gs * easm.U_xx);
  rec.emplace_back("U_yy_asm", gs * easm.U_yy);
  rec.emplace_back("U_zz_asm", gs * easm.U_zz);
  rec.emplace_back("U_yz_asm", gs * easm.U_yz);
  rec.emplace_back("max_discrepancy", gs * disc);
  rec.emplace_back("K_G", s.K_G);
  rec.emplace_back("J", s.J);
  rec.emplace_back("k1", s.k1);
  rec.emplace_back("k_pl", s.k_pl);
  rec.emplace_back("k_pl_signed", s.k_pl_signed);
  rec.emplace_back("phi_N_rad", s.phi_N);
  rec.emplace_back("R_p", s.R_p);
  return rec;
}

int cmd_point(const PointOptions& o) {
  const nf::EllipsoidParamsd p = nf::load_ellipsoid_file(o.ellipsoid);
  const nf::Vec3<double> x = resolve_position(p, o);
  const auto rec = point_record(p, x, o.units == "eotvos");
  std::string out;
  if (o.format == "json") {
    out += "{\n";
    for (const auto& [name, value] : rec)
      out += "  \"" + name + "\": " + fmt(value) + ",\n";
    out += "  \"gradient_units\": \"" + o.units + "\"\n}\n";
  } else {
    std::string header, values;
    for (const auto& [name, value] : rec) {
      header += name + ",";
      values += fmt(value) + ",";
    }
    out = header + "gradient_units\n" + values + o.units + "\n";
  }
  std::fputs(out.c_str(), stdout);
  return 0;
}

struct Range {
  double lo, hi, step;
};

Range parse_range(const std::string& text, const char* what) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw UsageError(std::string(what) + " must have the form LO:HI:STEP");
  Range r;
  try {
    r.lo = nf::detail::parse_number(text.substr(0, first), what);
    r.hi = nf::detail::parse_number(text.substr(first + 1, second - first - 1), what);
    r.step = nf::detail::parse_number(text.substr(second + 1), what);
  } catch (const nf::ParseError& e) {
    throw UsageError(e.what());
  }
  if (!(r.step > 0)) throw UsageError(std::string(what) + ": step must be positive");
  if (!(r.hi >= r.lo)) throw UsageError(std::string(what) + ": range is empty");
  return r;
}

std::vector<double> expand_range(const Range& r) {
  // Index-based expansion avoids accumulating the step.
  const int n = int(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[std::size_t(i)] = r.lo + i * r.step;
  return v;
}

int cmd_grid(const GridOptions& o) {
  static const std::vector<std::string> canonical = {"gamma", "eotvos", "K_G", "J",
                                                     "k1",    "k_pl",   "phi_N"};
  for (const auto& q : o.quantities)
    if (std::find(canonical.begin(), canonical.end(), q) == canonical.end())
      throw UsageError("unknown quantity '" + q + "'");
  std::vector<std::string> wanted;  // user selection in canonical order
  for (const auto& q : canonical)
    if (std::find(o.quantities.begin(), o.quantities.end(), q) != o.quantities.end())
      wanted.push_back(q);
  if (wanted.empty()) throw UsageError("at least one quantity is required");

  const auto lats = expand_range(parse_range(o.lat_range, "--lat"));
  const auto lons = expand_range(parse_range(o.lon_range, "--lon"));
  if (o.heights.empty()) throw UsageError("at least one height is required");
  const std::size_t cells = lats.size() * lons.size() * o.heights.size();
  if (cells > 10'000'000) throw UsageError("grid exceeds 10 million points");

  const nf::EllipsoidParamsd p = nf::load_ellipsoid_file(o.ellipsoid);

  std::string header = "lat_deg,lon_deg,h_m";
  for (const auto& q : wanted) {
    if (q == "eotvos")
      header += ",U_xx,U_yy,U_zz,U_yz";
    else
      header += "," + q;
  }
  header += "\n";

  // Row-major lat-outer order; rows land in preallocated slots so the output
  // is deterministic no matter how evaluation is distributed.
  std::vector<std::string> rows(cells);
  std::vector<std::string> errors(cells);
  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t ih = i % o.heights.size();
      const std::size_t il = (i / o.heights.size()) % lons.size();
      const std::size_t ia = i / (o.heights.size() * lons.size());
      const double lat = lats[ia], lon = lons[il], hgt = o.heights[ih];
      try {
        const nf::Vec3<double> x = nf::geodetic_to_cartesian(p, lat * kDeg, lon * kDeg, hgt);
        const nf::FieldJet2d jet = nf::field_jet(p, x);
        std::string row = fmt(lat) + "," + fmt(lon) + "," + fmt(hgt);
        const nf::CurvatureSummary<double> s = nf::curvature_summary(p, jet, x);
        for (const auto& q : wanted) {
          if (q == "gamma") {
            row += "," + fmt(jet.gamma_mag);
          } else if (q == "eotvos") {
            const nf::EotvosMatrix<double> e = nf::eotvos_assemble(p, jet, x);
            row += "," + fmt(e.U_xx) + "," + fmt(e.U_yy) + "," + fmt(e.U_zz) + "," +
                   fmt(e.U_yz);
          } else if (q == "K_G") {
            row += "," + fmt(s.K_G);
          } else if (q == "J") {
            row += "," + fmt(s.J);
          } else if (q == "k1") {
            row += "," + fmt(s.k1);
          } else if (q == "k_pl") {
            row += "," + fmt(s.k_pl);
          } else {
            row += "," + fmt(s.phi_N);
          }
        }
        rows[i] = row + "\n";
      } catch (const std::exception& e) {
        char at[96];
        std::snprintf(at, sizeof at, "lat=%.17g lon=%.17g h=%.17g", lat, lon, hgt);
        errors[i] = std::string(at) + ": " + e.what();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(hw, std::max<std::size_t>(1, cells / 64));
  if (nthreads <= 1) {
    worker(0, cells);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cells + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back(worker, t * chunk, std::min(cells, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < cells; ++i)
    if (!errors[i].empty())
      throw nf::EvaluationError("grid evaluation failed at " + errors[i]);

  std::string out = header;
  for (const auto& row : rows) out += row;
  if (o.out.empty()) {
    std::fputs(out.c_str(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw nf::EvaluationError("cannot open output file '" + o.out + "'");
    f << out;
  }
  return 0;
}

int cmd_verify(const VerifyOptions& o) {
  const nf::EllipsoidParamsd p = nf::load_ellipsoid_file(o.ellipsoid);
  nf::VerifyOptions vo;
  vo.seed = o.seed;
  vo.count = o.count;
  vo.tolerance_scale = o.tolerance_scale;
  const nf::VerifyReport report = nf::run_verification(p, vo);
  std::fputs(nf::format_report(report).c_str(), stdout);
  return report.all_passed() ? 0 : 3;
}

int cmd_curvrel(const CurvrelOptions& o) {
  const nf::EllipsoidParamsd p = nf::load_ellipsoid_file(o.ellipsoid);
  const nf::PointMassModeld model = nf::load_point_mass_model_file(o.model);
  nf::validate_model(p, model);
  const nf::Vec3<double> x = nf::geodetic_to_cartesian(p, o.geodetic[0] * kDeg,
                                                       o.geodetic[1] * kDeg, o.geodetic[2]);
  std::string out = "scale,lhs,rhs,residual,deflection_rad\n";
  std::vector<double> residuals;
  for (const double s : o.scales) {
    const auto rep = nf::curvature_relation(p, model.scaled(s), x);
    residuals.push_back(rep.residual);
    out += fmt(s) + "," + fmt(rep.lhs) + "," + fmt(rep.rhs) + "," + fmt(rep.residual) +
           "," + fmt(rep.deflection) + "\n";
  }
  const double slope = nf::residual_loglog_slope(o.scales, residuals);
  out += "slope," + fmt(slope) + "\n";
  std::fputs(out.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal gravity field of a level ellipsoid: potential, gravity vector, "
               "gravity-gradient (Eotvos) matrix, and equipotential curvatures."};
  app.require_subcommand(1);

  PointOptions po;
  CLI::App* point = app.add_subcommand("point", "Evaluate the full field record at one point");
  point->add_option("--ellipsoid", po.ellipsoid, "ellipsoid parameter file")->required();
  point->add_option("--xyz", po.xyz, "Cartesian X,Y,Z [m]")->delimiter(',')->expected(3);
  point->add_option("--geodetic", po.geodetic, "geodetic LAT,LON [deg], height [m]")
      ->delimiter(',')
      ->expected(3);
  point->add_option("--harmonic", po.harmonic, "ellipsoidal-harmonic U,BETA,LAMBDA [m, rad, rad]")
      ->delimiter(',')
      ->expected(3);
  point->add_option("--units", po.units, "gradient units (si = 1/s^2, eotvos = 1e-9/s^2)")
      ->check(CLI::IsMember({"si", "eotvos"}));
  point->add_option("--format", po.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  GridOptions go;
  CLI::App* grid = app.add_subcommand("grid", "Evaluate selected quantities on a geodetic grid");
  grid->add_option("--ellipsoid", go.ellipsoid, "ellipsoid parameter file")->required();
  grid->add_option("--lat", go.lat_range, "latitude range LO:HI:STEP [deg]")->required();
  grid->add_option("--lon", go.lon_range, "longitude range LO:HI:STEP [deg]")->required();
  grid->add_option("--heights", go.heights, "ellipsoidal heights [m]")
      ->delimiter(',')
      ->required();
  grid->add_option("--quantities", go.quantities,
                   "subset of gamma,eotvos,K_G,J,k1,k_pl,phi_N")
      ->delimiter(',')
      ->required();
  grid->add_option("--out", go.out, "write CSV to this file instead of stdout");

  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "Run the self-verification suite");
  verify->add_option("--ellipsoid", vo.ellipsoid, "ellipsoid parameter file")->required();
  verify->add_option("--seed", vo.seed, "sweep seed");
  verify->add_option("--count", vo.count, "points per sweep")->check(CLI::PositiveNumber);
  verify->add_option("--tolerance-scale", vo.tolerance_scale, "")->group("");  // test harness

  CurvrelOptions co;
  CLI::App* curvrel = app.add_subcommand(
      "curvrel", "Curvature relation between normal and disturbed fields across mass scalings");
  curvrel->add_option("--ellipsoid", co.ellipsoid, "ellipsoid parameter file")->required();
  curvrel->add_option("--model", co.model, "point-mass model file")->required();
  curvrel->add_option("--geodetic", co.geodetic, "evaluation point LAT,LON [deg], height [m]")
      ->delimiter(',')
      ->expected(3)
      ->required();
  curvrel->add_option("--scales", co.scales, "mass multipliers")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*point) return cmd_point(po);
    if (*grid) return cmd_grid(go);
    if (*verify) return cmd_verify(vo);
    return cmd_curvrel(co);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "normalfield: %s\n", e.what());
    return 1;
  } catch (const nf::Error& e) {
    std::fprintf(stderr, "normalfield: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "normalfield: unexpected error: %s\n", e.what());
    return 2;
  }
}
