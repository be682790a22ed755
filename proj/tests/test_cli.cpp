#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#ifndef NORMALFIELD_CLI_PATH
#error "NORMALFIELD_CLI_PATH must point at the built binary"
#endif
#ifndef NORMALFIELD_DATA_DIR
#error "NORMALFIELD_DATA_DIR must point at the data directory"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd =
      std::string("'") + NORMALFIELD_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out};
}

const std::string kEll =
    std::string("--ellipsoid '") + NORMALFIELD_DATA_DIR + "/grs80.cfg'";

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// CSV point record keyed by the header row.
struct PointRecord {
  std::vector<std::string> names, values;

  double num(const std::string& key) const {
    return std::stod(values.at(index(key)));
  }

  std::size_t index(const std::string& key) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == key) return i;
    REQUIRE_MESSAGE(false, "no column " << key);
    return 0;
  }
};

PointRecord point_record(const std::string& args) {
  const RunResult r = run("point " + kEll + " " + args);
  REQUIRE(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  PointRecord rec{split(ls[0]), split(ls[1])};
  REQUIRE(rec.names.size() == rec.values.size());
  return rec;
}

bool close_rel(double a, double b, double rel, double abs = 0.0) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + abs;
}

}  // namespace

TEST_CASE("point: geodetic 45 degrees matches the Somigliana value") {
  const PointRecord rec = point_record("--geodetic 45,0,0");
  CHECK(close_rel(rec.num("gamma_mag"), 9.8061992025227642, 1e-9));
  CHECK(close_rel(rec.num("phi_N_rad"), std::atan(1.0), 1e-10));
  CHECK(std::fabs(rec.num("h_m")) < 1e-6);
  CHECK(rec.num("lat_deg") == 45.0);
  CHECK(rec.values.back() == "si");
}

TEST_CASE("point: scalar outputs are longitude-invariant") {
  const PointRecord a = point_record("--geodetic 0,0,0");
  const PointRecord b = point_record("--geodetic 0,123,0");
  for (const char* key :
       {"u", "beta_rad", "lat_deg", "h_m", "U", "gamma_mag", "U_xx_rot", "U_yy_rot",
        "U_zz_rot", "U_xy_rot", "U_xz_rot", "U_yz_rot", "U_xx_asm", "U_yy_asm",
        "U_zz_asm", "U_yz_asm", "K_G", "J", "k1", "k_pl", "k_pl_signed", "phi_N_rad",
        "R_p"}) {
    CAPTURE(key);
    CHECK(close_rel(a.num(key), b.num(key), 1e-13, 1e-20));
  }
  CHECK(b.num("lon_deg") == 123.0);
}

TEST_CASE("point: harmonic surface input agrees with the cartesian equator") {
  const PointRecord h = point_record("--harmonic 6356752.3141403558,0,0");
  const PointRecord x = point_record("--xyz 6378137,0,0");
  CHECK(close_rel(h.num("U"), x.num("U"), 1e-12));
  CHECK(close_rel(h.num("gamma_mag"), x.num("gamma_mag"), 1e-12));
  CHECK(close_rel(h.num("K_G"), x.num("K_G"), 1e-12));
  CHECK(close_rel(h.num("X"), x.num("X"), 0, 1e-3));
}

TEST_CASE("point: eotvos units scale exactly the gradient columns") {
  const PointRecord si = point_record("--geodetic 45,0,0");
  const PointRecord eo = point_record("--geodetic 45,0,0 --units eotvos");
  for (const char* key : {"U_xx_rot", "U_yy_rot", "U_zz_rot", "U_xy_rot", "U_xz_rot",
                          "U_yz_rot", "U_xx_asm", "U_yy_asm", "U_zz_asm", "U_yz_asm",
                          "max_discrepancy"}) {
    CAPTURE(key);
    CHECK(eo.num(key) == si.num(key) * 1e9);
  }
  for (const char* key : {"U", "gamma_mag", "K_G", "J", "k1", "k_pl"}) {
    CAPTURE(key);
    CHECK(eo.num(key) == si.num(key));
  }
  CHECK(eo.values.back() == "eotvos");
}

TEST_CASE("point: JSON carries the same numbers as CSV") {
  const PointRecord csv = point_record("--geodetic -30,45,2000");
  const RunResult r = run("point " + kEll + " --geodetic -30,45,2000 --format json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  for (const char* key : {"U", "gamma_mag", "U_yz_asm", "K_G", "k_pl_signed"}) {
    CAPTURE(key);
    CHECK(j.at(key).get<double>() == csv.num(key));
  }
  CHECK(j.at("gradient_units").get<std::string>() == "si");
}

TEST_CASE("grid: shape, monotone gravity, reproducible output file") {
  const std::string args =
      "grid " + kEll + " --lat 0:80:40 --lon 0:90:45 --heights 0 --quantities gamma";
  const RunResult r = run(args);
  REQUIRE(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 10);  // header + 3 lat x 3 lon x 1 height
  CHECK(ls[0] == "lat_deg,lon_deg,h_m,gamma");
  // Rows are latitude-major; gamma grows toward the pole and ignores lon up
  // to the rounding of the rotated coordinates.
  double prev = 0;
  for (int ia = 0; ia < 3; ++ia) {
    const double g0 = std::stod(split(ls[1 + 3 * ia])[3]);
    CHECK(g0 > prev);
    for (int il = 1; il < 3; ++il)
      CHECK(close_rel(std::stod(split(ls[1 + 3 * ia + il])[3]), g0, 1e-13));
    prev = g0;
  }

  const RunResult again = run(args);
  CHECK(again.out == r.out);

  const std::string path = "/tmp/normalfield_grid_test.csv";
  std::remove(path.c_str());
  const RunResult to_file = run(args + " --out " + path);
  CHECK(to_file.exit_code == 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream file_content;
  file_content << in.rdbuf();
  CHECK(file_content.str() == r.out);
  std::remove(path.c_str());
}

TEST_CASE("grid: multiple quantities expand in canonical column order") {
  const RunResult r = run("grid " + kEll +
                          " --lat 10:10:1 --lon 0:0:1 --heights 0,5000"
                          " --quantities k_pl,eotvos,gamma");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "lat_deg,lon_deg,h_m,gamma,U_xx,U_yy,U_zz,U_yz,k_pl");
  CHECK(split(ls[1])[2] == "0");
  CHECK(split(ls[2])[2] == "5000");
}

TEST_CASE("verify: deterministic pass, tamper knob fails") {
  const std::string args = "verify " + kEll + " --seed 42 --count 10";
  const RunResult a = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out.find("verification PASS") != std::string::npos);
  const RunResult b = run(args);
  CHECK(b.out == a.out);

  const RunResult bad = run(args + " --tolerance-scale 1e-6");
  CHECK(bad.exit_code == 3);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("curvrel: zero-mass model degenerates cleanly") {
  const std::string path = "/tmp/normalfield_empty_model.txt";
  std::ofstream(path) << "# no masses\n";
  const RunResult r = run("curvrel " + kEll + " --model " + path +
                          " --geodetic 0,0,0 --scales 1,2");
  CHECK(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "scale,lhs,rhs,residual,deflection_rad");
  for (int i = 1; i <= 2; ++i) {
    const auto f = split(ls[i]);
    CHECK(std::stod(f[3]) == 0.0);
    CHECK(std::stod(f[4]) == 0.0);
  }
  CHECK(ls[3] == "slope,nan");
  std::remove(path.c_str());
}

TEST_CASE("curvrel: shipped example model reproduces the quadratic scaling") {
  const RunResult r =
      run("curvrel " + kEll + " --model '" + NORMALFIELD_DATA_DIR +
          "/point_masses_example.txt' --geodetic 0,0,0");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  const auto footer = split(ls[4]);
  REQUIRE(footer[0] == "slope");
  const double slope = std::stod(footer[1]);
  CHECK(slope >= 1.9);
  CHECK(slope <= 2.1);
  CHECK(close_rel(std::stod(split(ls[1])[4]), 4.0875580033e-6, 1e-9));
}

TEST_CASE("exit codes: usage 1, domain 2, verification 3") {
  CHECK(run("point " + kEll).exit_code == 1);  // no position given
  CHECK(run("point " + kEll + " --xyz 1,2,3 --geodetic 1,2,3").exit_code == 1);
  CHECK(run("nonsense").exit_code == 1);
  CHECK(run("grid " + kEll +
            " --lat 0:10:5 --lon 0:0:1 --heights 0 --quantities bogus")
            .exit_code == 1);
  CHECK(run("point " + kEll + " --xyz 6000000,0,0").exit_code == 2);  // interior
  CHECK(run("point " + kEll + " --geodetic 0,0,-100").exit_code == 2);
  CHECK(run("point --ellipsoid /nonexistent.cfg --xyz 7000000,0,0").exit_code == 2);
  CHECK(run("--help").exit_code == 0);

  const std::string bad = "/tmp/normalfield_bad_model.txt";
  std::ofstream(bad) << "4e7 6278137 0 0\n1 2 3\n";
  const RunResult r = run("curvrel " + kEll + " --model " + bad + " --geodetic 0,0,0");
  CHECK(r.exit_code == 2);
  std::remove(bad.c_str());
}
