#pragma once

// Scenario execution: seeded point sampling and the commands
//   validate | derive-spray | derive-connection | induce | integrate | report

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algebroid/catalog.hpp"
#include "algebroid/report.hpp"

namespace algebroid {

struct SamplingSpec {
  std::size_t points = 20;
  double r_min = 0.3;
  double r_max = 2.0;
  double exclusion = 0.1;  // radius around declared singular loci
  std::uint64_t seed = 42;
};

/// z and u drawn uniformly from annuli r_min <= |.| <= r_max componentwise.
std::vector<WPoint> sample_points(const AlgebroidSpec& a, const SamplingSpec& s);

struct Scenario {
  std::string algebroid = "trivial";
  std::string definition_file;  // JSON definition, overrides the catalog name
  std::string lagrangian;       // empty: catalog default for the command
  std::string command = "validate";
  int induction_case = 0;       // 0: from the algebroid
  std::string direction = "E->TM";
  SamplingSpec sampling;
  Tolerances tol;
  std::optional<WPoint> at;     // extra evaluation point
  double t_end = 1.0;
  double step = 1e-3;
  std::string csv;              // trajectory export path
};

/// {"algebroid", "definition", "lagrangian", "command", "case", "direction",
///  "points": {count, r_min, r_max, exclusion, seed}, "tolerances": {ad, metric, fd, ode},
///  "at": {z: [...], u: [...]}, "t_end", "step", "csv"}
Scenario parse_scenario_json(const std::string& text);

/// "1+2i, 0.5" -> complex values; ConfigError on anything else.
std::vector<Complex> parse_complex_list(const std::string& text);

/// Fills the first n values into z and the rest into u.
WPoint point_from_values(const AlgebroidSpec& a, const std::vector<Complex>& v);

const std::vector<std::string>& scenario_commands();

/// Runs the command; errors propagate as exceptions.
ResidualReport run(const Scenario& s);

}  // namespace algebroid
