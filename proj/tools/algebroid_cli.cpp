// algebroid validate|derive-spray|derive-connection|induce|integrate|report [options]
//
// Exit status: 0 all checks pass, 1 some check fails, 2 input rejected.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "algebroid/parallel.hpp"
#include "algebroid/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw algebroid::ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace algebroid;

  CLI::App app{"Holomorphic Lie algebroid geometry engine"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string scenario_path, algebroid = "trivial", definition, lagrangian, direction = "E->TM", out_path, csv, at;
  int icase = 0;
  std::uint64_t seed = 42;
  std::size_t points = 20;
  double tol_ad = 1e-9, tol_metric = 1e-8, tol_fd = 1e-6, tol_ode = 1e-6, t_end = 1.0, step = 1e-3;
  bool list = false, serial = false;

  app.add_option("--scenario", scenario_path, "scenario JSON; command-line flags override it");
  app.add_option("--algebroid", algebroid, "catalog name");
  app.add_option("--definition", definition, "algebroid definition JSON file");
  app.add_option("--lagrangian", lagrangian, "Lagrangian in z, zb, u, ub");
  app.add_option("--case", icase, "induction case 1, 2 or 3")->check(CLI::Range(0, 3));
  app.add_option("--direction", direction, "case I transport direction")->check(CLI::IsMember({"E->TM", "TM->E"}));
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--points", points, "number of sample points");
  app.add_option("--tol-ad", tol_ad);
  app.add_option("--tol-metric", tol_metric);
  app.add_option("--tol-fd", tol_fd);
  app.add_option("--tol-ode", tol_ode);
  app.add_option("--at", at, "evaluation point: comma-separated z then u values, e.g. \"1,2\" or \"2i,1\"");
  app.add_option("--t-end", t_end);
  app.add_option("--step", step);
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv, "trajectory CSV path (integrate)");
  app.add_flag("--list", list, "list catalog entries and exit");
  app.add_flag("--serial", serial, "disable OpenMP batch evaluation");

  const std::map<std::string, std::string> about = {
      {"validate", "structure identities and d_T^2 = 0 at the sample points"},
      {"derive-spray", "canonical spray, homogeneity and chart covariance"},
      {"derive-connection", "spray connection on the prolongation, its transformation law and curvature"},
      {"induce", "transport the Lagrange structure between E and T'M (case I, II or III)"},
      {"integrate", "RK4 integral curves of the canonical spray"},
      {"report", "all of the above merged into one report"},
  };
  for (const auto& c : scenario_commands()) app.add_subcommand(c, about.count(c) ? about.at(c) : c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& e : catalog())
      std::cout << e.spec.name << "  n=" << e.spec.n << " m=" << e.spec.m << " case=" << e.induction_case << "\n";
    return 0;
  }

  try {
    if (serial) set_default_exec(Exec::Serial);
    Scenario s = scenario_path.empty() ? Scenario{} : parse_scenario_json(slurp(scenario_path));
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (!app.get_subcommands().empty()) s.command = app.get_subcommands().front()->get_name();
    else if (scenario_path.empty()) throw ConfigError("no command given");
    if (given("--algebroid")) s.algebroid = algebroid;
    if (given("--definition")) s.definition_file = definition;
    if (given("--lagrangian")) s.lagrangian = lagrangian;
    if (given("--case")) s.induction_case = icase;
    if (given("--direction")) s.direction = direction;
    if (given("--seed")) s.sampling.seed = seed;
    if (given("--points")) s.sampling.points = points;
    if (given("--tol-ad")) s.tol.ad = tol_ad;
    if (given("--tol-metric")) s.tol.metric = tol_metric;
    if (given("--tol-fd")) s.tol.fd = tol_fd;
    if (given("--tol-ode")) s.tol.ode = tol_ode;
    if (given("--t-end")) s.t_end = t_end;
    if (given("--step")) s.step = step;
    if (given("--csv")) s.csv = csv;
    if (given("--at")) {
      const AlgebroidSpec a = s.definition_file.empty() ? catalog_entry(s.algebroid).spec
                                                        : parse_algebroid_json(slurp(s.definition_file));
      s.at = point_from_values(a, parse_complex_list(at));
    }

    const ResidualReport r = run(s);
    const std::string text = r.to_json();
    if (out_path.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream out(out_path);
      if (!out) throw ConfigError("cannot write '" + out_path + "'");
      out << text << "\n";
    }
    if (!r.all_pass()) {
      for (const auto& [name, c] : r.checks())
        if (!c.pass) std::cerr << "FAIL " << name << " residual " << c.max_residual << " > " << c.tolerance << "\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
