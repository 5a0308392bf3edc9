#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "algebroid/catalog.hpp"
#include "algebroid/parallel.hpp"
#include "algebroid/scenario.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

const char* submersion_json = R"({
  "name": "sub", "n": 1, "m": 2,
  "rho": [["1"], ["z1"]],
  "C": [{"gamma": 1, "alpha": 1, "beta": 2, "expr": "1"}]
})";

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ALGEBROID_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("catalog contents") {
  const auto names = catalog_names();
  CHECK(names.size() >= 7);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  CHECK_THROWS_AS(catalog_entry("nonesuch"), ConfigError);
  CHECK(induction_case_of(catalog_entry("trivial").spec) == 1);
  CHECK(induction_case_of(catalog_entry("scaled").spec) == 1);
  CHECK(induction_case_of(catalog_entry("immersion").spec) == 2);
  CHECK(induction_case_of(catalog_entry("submersion").spec) == 3);
  CHECK(induction_case_of(catalog_entry("heisenberg-like").spec) == 3);
  for (const auto& e : catalog()) CHECK(e.induction_case == induction_case_of(e.spec));
  CHECK(default_lagrangian(1, 2) == "(1 + z1*zb1)*(u1*ub1 + u2*ub2)");
}

TEST_CASE("algebroid definitions from JSON") {
  const AlgebroidSpec a = parse_algebroid_json(submersion_json);
  const AlgebroidSpec& b = catalog_entry("submersion").spec;
  CHECK(a.n == 1);
  CHECK(a.m == 2);
  gen::Rng rng(81);
  for (int i = 0; i < 10; ++i) {
    const WPoint p = rng.point(1, 2);
    const Vec<Complex> c = to_coords(p);
    CHECK(gen::diff(rho_at(a, c, a.layout()), rho_at(b, c, b.layout())) == 0.0);
    CHECK(gen::diff(C_at(a, c, a.layout()), C_at(b, c, b.layout())) == 0.0);
  }
  const AlgebroidSpec t = parse_algebroid_json(R"({"name": "t", "n": 1, "m": 1, "rho": [["z1"]],
    "charts": [{"zmap": ["1/z1"], "M": [["z1"]], "zinv": ["1/z1"], "singular": [{"coord": 1, "value": [0, 0]}]}],
    "singular": [{"coord": 1, "value": 0}], "generic_rank": 1})");
  CHECK(t.charts.size() == 1);
  CHECK(t.singular.size() == 1);

  CHECK_THROWS_AS(parse_algebroid_json("{"), ConfigError);
  CHECK_THROWS_AS(parse_algebroid_json(R"({"name": "x", "m": 1, "rho": [["1"]]})"), ConfigError);
  CHECK_THROWS_AS(parse_algebroid_json(R"({"name": "x", "n": 1, "m": 1, "rho": [["u1"]]})"), Error);
  CHECK_THROWS_AS(parse_algebroid_json(R"({"name": "x", "n": 1, "m": 1, "rho": [["1", "2"]]})"), Error);
  CHECK_THROWS_AS(parse_algebroid_json(
                      R"({"name": "x", "n": 1, "m": 2, "rho": [["1"], ["1"]], "C": [{"gamma": 1, "alpha": 1, "beta": 3, "expr": "1"}]})"),
                  ConfigError);
}

TEST_CASE("sampling is seeded and avoids singular loci") {
  const AlgebroidSpec& a = catalog_entry("scaled").spec;
  SamplingSpec s;
  s.points = 200;
  s.r_min = 0.0;
  const auto p1 = sample_points(a, s);
  const auto p2 = sample_points(a, s);
  REQUIRE(p1.size() == 200);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].z == p2[i].z);
    CHECK(p1[i].u == p2[i].u);
    CHECK(std::abs(p1[i].z[0]) >= s.exclusion);
    CHECK(std::abs(p1[i].z[0]) <= s.r_max + 1e-12);
  }
  s.seed = 43;
  CHECK(sample_points(a, s)[0].z != p1[0].z);

  SamplingSpec d;
  for (const auto& p : sample_points(catalog_entry("immersion").spec, d))
    for (const auto& x : p.u) {
      CHECK(std::abs(x) >= d.r_min - 1e-12);
      CHECK(std::abs(x) <= d.r_max + 1e-12);
    }
}

TEST_CASE("complex lists and evaluation points") {
  const auto v = parse_complex_list("1+2i, 0.5, -i, 2i");
  REQUIRE(v.size() == 4);
  CHECK(v[0] == Complex(1, 2));
  CHECK(v[1] == Complex(0.5));
  CHECK(v[2] == Complex(0, -1));
  CHECK(v[3] == Complex(0, 2));
  CHECK_THROWS_AS(parse_complex_list("1, z1"), ConfigError);
  CHECK_THROWS_AS(parse_complex_list("1,,2"), ConfigError);

  const WPoint p = point_from_values(catalog_entry("submersion").spec, {1.0, 2.0, 3.0});
  CHECK(p.z == CVector{1.0});
  CHECK(p.u == CVector{2.0, 3.0});
  CHECK_THROWS_AS(point_from_values(catalog_entry("submersion").spec, {1.0, 2.0}), ConfigError);
}

TEST_CASE("scenario JSON") {
  const Scenario s = parse_scenario_json(R"({"algebroid": "twochart", "command": "derive-spray",
    "lagrangian": "(1 + z1*zb1)*u1*ub1", "points": {"count": 7, "seed": 9, "r_min": 0.5},
    "tolerances": {"ad": 1e-10, "ode": 1e-5}, "at": {"z": [1], "u": [[0, 2]]}, "t_end": 0.5, "step": 0.01})");
  CHECK(s.algebroid == "twochart");
  CHECK(s.command == "derive-spray");
  CHECK(s.sampling.points == 7);
  CHECK(s.sampling.seed == 9);
  CHECK(s.sampling.r_min == 0.5);
  CHECK(s.tol.ad == 1e-10);
  CHECK(s.tol.ode == 1e-5);
  CHECK(s.tol.metric == 1e-8);
  REQUIRE(s.at.has_value());
  CHECK(s.at->u[0] == Complex(0, 2));
  CHECK(s.t_end == 0.5);
  CHECK_THROWS_AS(parse_scenario_json(R"({"command": "fly"})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_json("[1, 2"), ConfigError);
}

TEST_CASE("every command passes on every catalog entry") {
  for (const auto& e : catalog())
    for (const auto& cmd : scenario_commands()) {
      Scenario s;
      s.algebroid = e.spec.name;
      s.command = cmd;
      s.sampling.points = 4;
      s.t_end = 0.1;
      const ResidualReport r = run(s);
      CHECK_MESSAGE(r.all_pass(), e.spec.name << " " << cmd);
    }
}

TEST_CASE("spray values at a requested point") {
  Scenario s;
  s.command = "derive-spray";
  s.lagrangian = "z1*zb1*u1*ub1";
  s.sampling.points = 3;
  s.at = WPoint{{1.0}, {2.0}};
  const std::string json = run(s).to_json();
  CHECK(json.find("\"G\"") != std::string::npos);

  s.lagrangian = "z1*zb1";
  CHECK_THROWS_AS(run(s), SingularMetric);
  s.lagrangian = "u1*";
  CHECK_THROWS_AS(run(s), ParseError);
}

TEST_CASE("reports are deterministic and independent of the execution mode") {
  Scenario s;
  s.algebroid = "twochart";
  s.command = "report";
  s.sampling.points = 8;
  set_default_exec(Exec::Parallel);
  const std::string a = run(s).to_json();
  const std::string b = run(s).to_json();
  set_default_exec(Exec::Serial);
  const std::string c = run(s).to_json();
  set_default_exec(Exec::Parallel);
  CHECK(a == b);
  CHECK(a == c);
  s.sampling.seed = 7;
  CHECK(run(s).to_json() != a);
}

TEST_CASE("batch map agrees in both execution modes") {
  SamplingSpec s;
  s.points = 64;
  const auto pts = sample_points(catalog_entry("heisenberg-like").spec, s);
  auto k = [](const WPoint& p) { return std::abs(p.z[0] * p.u[0] + p.u[1] * p.u[2]); };
  CHECK(map_points(pts, k, Exec::Serial) == map_points(pts, k, Exec::Parallel));
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("validate --algebroid trivial --points 3") == 0);
  CHECK(run_cli("--list") == 0);
  CHECK(run_cli("validate --algebroid nonesuch") == 2);
  CHECK(run_cli("derive-spray --lagrangian 'u1*(' ") == 2);
  CHECK(run_cli("validate --definition " + temp_file("algebroid_sub.json", submersion_json) + " --points 3") == 0);

  const std::string bad = temp_file("algebroid_bad.json", R"({"name": "bad", "n": 2, "m": 2,
    "rho": [["1", "0"], ["0", "1"]], "C": [{"gamma": 1, "alpha": 1, "beta": 2, "expr": "z1"}]})");
  CHECK(run_cli("validate --definition " + bad + " --points 3") == 1);

  const std::string out = (std::filesystem::temp_directory_path() / "algebroid_out.json").string();
  const std::string csv = (std::filesystem::temp_directory_path() / "algebroid_traj.csv").string();
  std::remove(csv.c_str());
  CHECK(run_cli("integrate --algebroid scaled --points 2 --t-end 0.05 --out " + out + " --csv " + csv) == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,re_z1,im_z1,re_u1,im_u1");
  CHECK(std::filesystem::file_size(out) > 0);
}
