#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebroid/wirtinger.hpp"

namespace algebroid {

struct Tolerances {
  double ad = 1e-9;      // exact-AD identities
  double metric = 1e-8;  // completions and metric-mediated checks
  double fd = 1e-6;      // finite-difference cross-checks
  double ode = 1e-6;     // trajectory admissibility
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  std::optional<WPoint> point;
  double tolerance = 0.0;
  bool pass = true;
};

class ResidualReport {
 public:
  std::uint64_t seed = 0;
  std::size_t points = 0;
  Tolerances tolerances;

  /// Fold one residual into check `name`.  The first point reaching the
  /// maximum is kept; NaN counts as failure.
  void record(const std::string& name, double residual, const std::optional<WPoint>& at, double tolerance);

  void note(const std::string& text);
  void set_value(const std::string& name, std::vector<Complex> value);
  void set_scalar(const std::string& name, double value);

  /// Copy all checks, values and notes of `other`, prefixing names.
  void merge(const ResidualReport& other, const std::string& prefix = "");

  const std::map<std::string, CheckResult>& checks() const { return checks_; }
  const CheckResult& check(const std::string& name) const;
  bool has_check(const std::string& name) const { return checks_.count(name) != 0; }
  const std::map<std::string, std::vector<Complex>>& values() const { return values_; }
  const std::map<std::string, double>& scalars() const { return scalars_; }
  const std::vector<std::string>& notes() const { return notes_; }

  bool all_pass() const;
  double max_residual(const std::string& prefix = "") const;

  /// Deterministic JSON (sorted keys, shortest round-trip numbers).
  std::string to_json() const;

 private:
  std::map<std::string, CheckResult> checks_;
  std::map<std::string, std::vector<Complex>> values_;
  std::map<std::string, double> scalars_;
  std::vector<std::string> notes_;
};

}  // namespace algebroid
