#include "algebroid/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace algebroid {

void ResidualReport::record(const std::string& name, double residual, const std::optional<WPoint>& at,
                            double tolerance) {
  auto [it, inserted] = checks_.try_emplace(name);
  CheckResult& c = it->second;
  if (inserted) {
    c.name = name;
    c.tolerance = tolerance;
    c.max_residual = residual;
    c.point = at;
  } else if (std::isnan(residual) && !std::isnan(c.max_residual)) {
    c.max_residual = residual;
    c.point = at;
  } else if (residual > c.max_residual) {
    c.max_residual = residual;
    c.point = at;
  }
  c.tolerance = std::min(c.tolerance, tolerance);
  c.pass = !std::isnan(c.max_residual) && c.max_residual <= c.tolerance;
}

void ResidualReport::note(const std::string& text) {
  if (std::find(notes_.begin(), notes_.end(), text) == notes_.end()) notes_.push_back(text);
}

void ResidualReport::set_value(const std::string& name, std::vector<Complex> value) {
  values_[name] = std::move(value);
}

void ResidualReport::set_scalar(const std::string& name, double value) { scalars_[name] = value; }

void ResidualReport::merge(const ResidualReport& other, const std::string& prefix) {
  for (const auto& [name, c] : other.checks_) record(prefix + name, c.max_residual, c.point, c.tolerance);
  for (const auto& [name, v] : other.values_) values_[prefix + name] = v;
  for (const auto& [name, v] : other.scalars_) scalars_[prefix + name] = v;
  for (const auto& n : other.notes_) note(n);
}

const CheckResult& ResidualReport::check(const std::string& name) const {
  auto it = checks_.find(name);
  if (it == checks_.end()) throw Error("no check named '" + name + "'");
  return it->second;
}

bool ResidualReport::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const auto& kv) { return kv.second.pass; });
}

double ResidualReport::max_residual(const std::string& prefix) const {
  double m = 0;
  for (const auto& [name, c] : checks_) {
    if (name.rfind(prefix, 0) != 0) continue;
    if (std::isnan(c.max_residual)) return c.max_residual;
    m = std::max(m, c.max_residual);
  }
  return m;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

nlohmann::json complex_json(Complex c) { return nlohmann::json::array({number(c.real()), number(c.imag())}); }

nlohmann::json complex_list(const std::vector<Complex>& v) {
  auto a = nlohmann::json::array();
  for (const auto& c : v) a.push_back(complex_json(c));
  return a;
}

}  // namespace

std::string ResidualReport::to_json() const {
  nlohmann::json j;
  j["all_pass"] = all_pass();
  auto checks = nlohmann::json::array();
  for (const auto& [name, c] : checks_) {
    nlohmann::json e;
    e["name"] = name;
    e["max_residual"] = number(c.max_residual);
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (c.point) {
      e["point"] = {{"z", complex_list(c.point->z)}, {"u", complex_list(c.point->u)}};
    } else {
      e["point"] = nullptr;
    }
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["environment"] = {{"seed", seed},
                      {"points", points},
                      {"tolerances",
                       {{"ad", tolerances.ad}, {"metric", tolerances.metric}, {"fd", tolerances.fd},
                        {"ode", tolerances.ode}}}};
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [name, v] : values_) values[name] = complex_list(v);
  for (const auto& [name, v] : scalars_) values[name] = number(v);
  j["values"] = std::move(values);
  j["notes"] = notes_;
  return j.dump(2) + "\n";
}

}  // namespace algebroid
