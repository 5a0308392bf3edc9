#include "algebroid/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "algebroid/induction.hpp"
#include "algebroid/parallel.hpp"
#include "algebroid/prolongation.hpp"
#include "algebroid/spray.hpp"

namespace algebroid {

namespace {

using nlohmann::json;

struct Context {
  const Scenario& s;
  CatalogEntry entry;
  std::vector<WPoint> points;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CatalogEntry resolve(const Scenario& s) {
  if (!s.definition_file.empty()) {
    try {
      return entry_for(parse_algebroid_json(read_file(s.definition_file)));
    } catch (const ConfigError& e) {
      throw ConfigError(s.definition_file + ": " + e.what());
    }
  }
  return catalog_entry(s.algebroid);
}

Expression lagrangian_E(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  const std::string& text = cx.s.lagrangian.empty() ? cx.entry.lagrangian_E : cx.s.lagrangian;
  return parse(text, VariableContext::full(a.n, a.m));
}

Expression lagrangian_TM(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  const std::string& text = cx.s.lagrangian.empty() ? cx.entry.lagrangian_TM : cx.s.lagrangian;
  return parse(text, VariableContext::full(a.n, a.n));
}

std::vector<Complex> flatten(const CMatrix& m) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

double prolong_diff(const ProlongVector& x, const ProlongVector& y) {
  double w = 0;
  for (std::size_t i = 0; i < x.Z.size(); ++i) w = std::max(w, std::abs(x.Z[i] - y.Z[i]));
  for (std::size_t i = 0; i < x.V.size(); ++i) w = std::max(w, std::abs(x.V[i] - y.V[i]));
  return w;
}

// Transported spray, Lagrangian and reversed chart for chart B.
struct ChartSide {
  SprayField SB;
  Expression LB;
  ChartData reverse;
  AlgebroidSpec aB;
};

ChartSide chart_side(const AlgebroidSpec& a, const Expression& L, const ChartData& ch) {
  ChartSide out{};
  out.aB = transported(a, ch);
  out.LB = transport_lagrangian(L, ch, a.m);
  out.SB = SprayField::canonical(out.aB, out.LB);
  out.reverse = reverse_chart(ch);
  return out;
}

std::string chart_prefix(std::size_t i, std::size_t count) {
  return count > 1 ? "chart" + std::to_string(i + 1) + "." : std::string{};
}

ResidualReport cmd_validate(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  ResidualReport r = validate_structure(a, cx.points, cx.s.tol);
  r.merge(prolong_differential_check(a, cx.points, cx.s.tol));
  return r;
}

ResidualReport cmd_spray(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  const Tolerances& tol = cx.s.tol;
  const Expression L = lagrangian_E(cx);
  const SprayField S = SprayField::canonical(a, L);
  ResidualReport r;

  const auto hom = map_points(cx.points, [&](const WPoint& p) {
    check_lagrangian_real(L, p);
    return homogeneity_residual(S, p);
  });
  double hmax = 0;
  for (double h : hom) hmax = std::max(hmax, h);
  r.set_scalar("spray.homogeneity", hmax);
  const bool is_spray = hmax <= 1e-9;
  r.note(is_spray ? "canonical semispray is a spray (homogeneous of degree 2)"
                  : "canonical semispray is not homogeneous of degree 2");

  std::vector<std::string> names = {"spray.tangent_structure"};
  std::vector<double> tols = {0.0};
  if (is_spray) {
    names.push_back("spray.liouville_bracket");
    tols.push_back(tol.ad);
  }
  record_batch(r, names, tols, cx.points, [&](const WPoint& p) {
    std::vector<double> out;
    out.push_back(prolong_diff(tangent_structure_apply(semispray_section(S, p)), liouville_section(p)));
    if (is_spray) out.push_back(liouville_bracket_residual(S, p));
    return out;
  });

  for (std::size_t i = 0; i < a.charts.size(); ++i) {
    const ChartData& ch = a.charts[i];
    if (!ch.zinv) {
      r.note("chart " + std::to_string(i + 1) + " has no inverse coordinate map; covariance not checked");
      continue;
    }
    const ChartSide side = chart_side(a, L, ch);
    r.merge(semispray_change_residual(S, side.SB, ch, cx.points, tol), chart_prefix(i, a.charts.size()));
  }
  if (cx.s.at) {
    check_lagrangian_real(L, *cx.s.at);
    r.set_value("G", S.at(*cx.s.at));
    r.set_scalar("G.homogeneity", homogeneity_residual(S, *cx.s.at));
  }
  return r;
}

ResidualReport cmd_connection(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  const Tolerances& tol = cx.s.tol;
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  const Expression L = lagrangian_E(cx);
  const SprayField S = SprayField::canonical(a, L);
  const ConnectionField Np = nlc_from_spray(S);
  ResidualReport r;

  record_batch(r, {"connection.spray_derivative"}, {tol.ad}, cx.points, [&](const WPoint& p) {
    const CMatrix N = Np.at(p);
    const Vec<Complex> c = to_coords(p);
    double w = 0;
    for (std::size_t al = 0; al < m; ++al) {
      const Vec<Complex> dG = partial([&](const auto& x) { return S.G(x); }, c, 2 * n + al);
      for (std::size_t be = 0; be < m; ++be) w = std::max(w, std::abs(N(be, al) - dG[be]));
    }
    return std::vector<double>{w};
  });

  for (std::size_t i = 0; i < a.charts.size(); ++i) {
    const ChartData& ch = a.charts[i];
    if (!ch.zinv) continue;
    const ChartSide side = chart_side(a, L, ch);
    const std::string pre = chart_prefix(i, a.charts.size());
    const ConnectionField NA = nlc_from_spray(S, &ch);
    const ConnectionField NB = nlc_from_spray(side.SB, &side.reverse);
    r.merge(prolong_change_residual(a, NA, NB, ch, cx.points, tol), pre);
    const ConnectionField CA = chern_lagrange_connection(L, ConnectionKind::OnTE, a.n, a.m);
    const ConnectionField CB = chern_lagrange_connection(side.LB, ConnectionKind::OnTE, a.n, a.m);
    r.merge(nlc_change_residual(CA, CB, ch, cx.points, tol), pre + "chern_lagrange.");
  }

  const ConnectionField NE = chern_lagrange_connection(L, ConnectionKind::OnTE, a.n, a.m);
  r.merge(base_frame_residual(a, NE, nlc_from_base(a, NE), cx.points, tol));
  r.merge(basis_bracket_residuals(a, cx.points, tol));
  record_batch(r, {"prolongation.liouville_tangent"}, {1e-12}, cx.points,
               [&](const WPoint& p) { return std::vector<double>{liouville_tangent_bracket_residual(a, p)}; });

  const WPoint& p0 = cx.s.at ? *cx.s.at : cx.points.front();
  const TensorTable t = prolong_curvature(a, Np, p0);
  for (const auto& [name, v] : t.diagnostics) r.set_scalar("curvature." + name, v);
  for (const auto& note : t.notes) r.note(note);
  if (cx.s.at) {
    r.set_value("N", flatten(Np.at(*cx.s.at)));
    r.set_value("N_chern_lagrange", flatten(NE.at(*cx.s.at)));
  }
  return r;
}

ResidualReport cmd_induce(const Context& cx, bool lagrangian_is_E_only) {
  const AlgebroidSpec& a = cx.entry.spec;
  const int c = cx.s.induction_case != 0 ? cx.s.induction_case : cx.entry.induction_case;
  ResidualReport r;
  if (c == 1) {
    const Expression L = lagrangian_is_E_only ? parse(cx.entry.lagrangian_TM, VariableContext::full(a.n, a.n))
                                              : lagrangian_TM(cx);
    r = case1_report(a, L, cx.points, cx.s.tol);
    const ConnectionField NE = chern_lagrange_connection(pullback_lagrangian(a, L), ConnectionKind::OnTE, a.n, a.m);
    const ConnectionField NT = chern_lagrange_connection(L, ConnectionKind::OnTM, a.n, a.n);
    Direction dir;
    if (cx.s.direction == "E->TM")
      dir = Direction::EToTM;
    else if (cx.s.direction == "TM->E")
      dir = Direction::TMToE;
    else
      throw ConfigError("direction must be E->TM or TM->E");
    if (cx.s.at) r.set_value("N_transported", flatten(case1_connection_transport(a, dir == Direction::EToTM ? NE : NT,
                                                                               dir, *cx.s.at)));
  } else if (c == 2) {
    const Expression L = lagrangian_is_E_only ? parse(cx.entry.lagrangian_TM, VariableContext::full(a.n, a.n))
                                              : lagrangian_TM(cx);
    r = case2_report(a, L, cx.points, cx.s.tol);
    if (cx.s.at) {
      const ConnectionField NT = chern_lagrange_connection(L, ConnectionKind::OnTM, a.n, a.n);
      r.set_value("N_induced", flatten(case2_induced_connection(a, L, NT, *cx.s.at).N));
    }
  } else if (c == 3) {
    const Expression L = lagrangian_E(cx);
    r = chern_lagrange_induction_suite(a, L, cx.points, cx.s.tol);
    if (cx.s.at) {
      const ConnectionField NE = chern_lagrange_connection(L, ConnectionKind::OnTE, a.n, a.m);
      r.set_value("N_induced", flatten(case3_induced_connection(a, L, NE, *cx.s.at).N));
    }
  } else {
    throw UnsupportedInput("algebroid '" + a.name + "' fits none of the three rank cases");
  }
  return r;
}

ResidualReport cmd_integrate(const Context& cx) {
  const AlgebroidSpec& a = cx.entry.spec;
  const Expression L = lagrangian_E(cx);
  const SprayField S = SprayField::canonical(a, L);
  std::vector<WPoint> starts = cx.points;
  if (cx.s.at) starts.insert(starts.begin(), *cx.s.at);
  const auto trajs = map_points(starts, [&](const WPoint& p) { return integrate(S, p, cx.s.t_end, cx.s.step); });
  ResidualReport r;
  std::size_t aborted = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (trajs[i].aborted) {
      ++aborted;
      r.note("trajectory from start " + std::to_string(i) + " stopped: " + trajs[i].message);
    }
    r.record("integrate.admissibility", admissibility_residual(S, trajs[i]), starts[i], cx.s.tol.ode);
  }
  r.set_scalar("integrate.aborted", static_cast<double>(aborted));
  r.set_scalar("integrate.step", cx.s.step);
  r.note("method rk4");
  if (!cx.s.csv.empty()) {
    std::ofstream out(cx.s.csv);
    if (!out) throw ConfigError("cannot write '" + cx.s.csv + "'");
    trajs.front().write_csv(out);
  }
  return r;
}

Complex parse_complex(const std::string& token) {
  VariableContext none;
  none.allow_z = false;
  const Expression e = parse(token, none);
  return evaluate(e, std::map<Var, Complex>{});
}

}  // namespace

std::vector<WPoint> sample_points(const AlgebroidSpec& a, const SamplingSpec& s) {
  if (!(s.r_min >= 0 && s.r_max > s.r_min)) throw ConfigError("sampling radii must satisfy 0 <= r_min < r_max");
  std::vector<SingularLocus> loci = a.singular;
  for (const auto& ch : a.charts) loci.insert(loci.end(), ch.singular.begin(), ch.singular.end());
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> radius(s.r_min, s.r_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  auto draw = [&] { return std::polar(radius(rng), angle(rng)); };
  std::vector<WPoint> out;
  out.reserve(s.points);
  for (std::size_t i = 0; i < s.points; ++i) {
    WPoint p;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) throw ConfigError("sampling cannot avoid the singular loci");
      p.z.clear();
      for (int k = 0; k < a.n; ++k) p.z.push_back(draw());
      bool ok = true;
      for (const auto& l : loci)
        if (std::abs(p.z[static_cast<std::size_t>(l.coord)] - l.value) < s.exclusion) ok = false;
      if (ok) break;
    }
    for (int al = 0; al < a.m; ++al) p.u.push_back(draw());
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(parse_complex(tok));
    } catch (const Error& e) {
      throw ConfigError("bad complex value '" + tok + "': " + e.what());
    }
  }
  return out;
}

WPoint point_from_values(const AlgebroidSpec& a, const std::vector<Complex>& v) {
  const std::size_t n = static_cast<std::size_t>(a.n);
  if (v.size() != n + static_cast<std::size_t>(a.m))
    throw ConfigError("point needs " + std::to_string(a.n + a.m) + " values (z then u)");
  return WPoint{{v.begin(), v.begin() + static_cast<long>(n)}, {v.begin() + static_cast<long>(n), v.end()}};
}

const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> c = {"validate", "derive-spray", "derive-connection", "induce", "integrate",
                                             "report"};
  return c;
}

Scenario parse_scenario_json(const std::string& text) {
  Scenario s;
  try {
    const json j = json::parse(text);
    s.algebroid = j.value("algebroid", s.algebroid);
    s.definition_file = j.value("definition", s.definition_file);
    s.lagrangian = j.value("lagrangian", s.lagrangian);
    s.command = j.value("command", s.command);
    const auto& cmds = scenario_commands();
    if (std::find(cmds.begin(), cmds.end(), s.command) == cmds.end())
      throw ConfigError("unknown command '" + s.command + "'");
    s.induction_case = j.value("case", s.induction_case);
    s.direction = j.value("direction", s.direction);
    s.t_end = j.value("t_end", s.t_end);
    s.step = j.value("step", s.step);
    s.csv = j.value("csv", s.csv);
    if (j.contains("points")) {
      const auto& p = j["points"];
      s.sampling.points = p.value("count", s.sampling.points);
      s.sampling.r_min = p.value("r_min", s.sampling.r_min);
      s.sampling.r_max = p.value("r_max", s.sampling.r_max);
      s.sampling.exclusion = p.value("exclusion", s.sampling.exclusion);
      s.sampling.seed = p.value("seed", s.sampling.seed);
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      s.tol.ad = t.value("ad", s.tol.ad);
      s.tol.metric = t.value("metric", s.tol.metric);
      s.tol.fd = t.value("fd", s.tol.fd);
      s.tol.ode = t.value("ode", s.tol.ode);
    }
    if (j.contains("at")) {
      WPoint p;
      auto value = [](const json& v) {
        if (v.is_array() && v.size() == 2) return Complex(v[0].get<double>(), v[1].get<double>());
        if (v.is_number()) return Complex(v.get<double>(), 0.0);
        if (v.is_string()) return parse_complex(v.get<std::string>());
        throw ConfigError("scenario: point values must be numbers, [re, im] or strings");
      };
      for (const auto& v : j["at"].at("z")) p.z.push_back(value(v));
      for (const auto& v : j["at"].at("u")) p.u.push_back(value(v));
      s.at = p;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return s;
}

ResidualReport run(const Scenario& s) {
  const auto& cmds = scenario_commands();
  if (std::find(cmds.begin(), cmds.end(), s.command) == cmds.end())
    throw ConfigError("unknown command '" + s.command + "'");
  if (s.sampling.points == 0) throw ConfigError("at least one sample point is required");
  Context cx{s, resolve(s), {}};
  cx.points = sample_points(cx.entry.spec, s.sampling);
  if (s.at && s.at->layout() != cx.entry.spec.layout())
    throw DimensionMismatch("evaluation point does not match the algebroid dimensions");

  ResidualReport r;
  if (s.command == "validate") {
    r = cmd_validate(cx);
  } else if (s.command == "derive-spray") {
    r = cmd_spray(cx);
  } else if (s.command == "derive-connection") {
    r = cmd_connection(cx);
  } else if (s.command == "induce") {
    r = cmd_induce(cx, false);
  } else if (s.command == "integrate") {
    r = cmd_integrate(cx);
  } else {
    r.merge(cmd_validate(cx));
    r.merge(cmd_spray(cx));
    r.merge(cmd_connection(cx));
    if (cx.entry.induction_case != 0 || s.induction_case != 0) r.merge(cmd_induce(cx, true));
    Scenario shorter = s;
    shorter.t_end = std::min(s.t_end, 0.25);
    Context ci{shorter, cx.entry, cx.points};
    r.merge(cmd_integrate(ci));
  }
  r.seed = s.sampling.seed;
  r.points = cx.points.size();
  r.tolerances = s.tol;
  return r;
}

}  // namespace algebroid
