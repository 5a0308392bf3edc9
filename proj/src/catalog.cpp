#include "algebroid/catalog.hpp"

#include <json.hpp>

#include "algebroid/errors.hpp"

namespace algebroid {

namespace {

using nlohmann::json;

Expression base(const std::string& text, int n) { return parse(text, VariableContext::base(n)); }

ExprGrid grid(const std::vector<std::vector<std::string>>& rows, int n) {
  ExprGrid g;
  for (const auto& r : rows) {
    std::vector<Expression> row;
    for (const auto& t : r) row.push_back(base(t, n));
    g.push_back(std::move(row));
  }
  return g;
}

std::string sum_sq(const char* var, int k) {
  std::string s;
  for (int i = 1; i <= k; ++i) {
    if (!s.empty()) s += " + ";
    s += std::string(var) + std::to_string(i) + "*" + var[0] + "b" + std::to_string(i);
  }
  return s;
}

CatalogEntry finish(AlgebroidSpec spec, std::string LE, std::string LT) {
  CatalogEntry e;
  e.induction_case = induction_case_of(spec);
  e.lagrangian_E = LE.empty() ? default_lagrangian(spec.n, spec.m) : std::move(LE);
  e.lagrangian_TM = LT.empty() ? sum_sq("u", spec.n) + " + z1*zb1*u1*ub1" : std::move(LT);
  e.spec = std::move(spec);
  return e;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  out.push_back(finish(AlgebroidSpec::make("trivial", 1, 1, grid({{"1"}}, 1), {}), "", ""));
  out.push_back(finish(AlgebroidSpec::make("tangent", 2, 2, grid({{"1", "0"}, {"0", "1"}}, 2), {}), "", ""));
  out.push_back(finish(AlgebroidSpec::make("scaled", 1, 1, grid({{"z1"}}, 1), {}, {}, {{0, Complex{}}}), "", ""));
  out.push_back(finish(AlgebroidSpec::make("immersion", 2, 1, grid({{"1", "z1"}}, 2), {}), "",
                       "u1*ub1 + u2*ub2 + z1*zb1*u1*ub1"));
  out.push_back(finish(AlgebroidSpec::make("submersion", 1, 2, grid({{"1"}, {"z1"}}, 1), {{0, 0, 1, base("1", 1)}}),
                       "u1*ub1 + u2*ub2 + z1*zb1*u1*ub1", ""));

  ChartData ch;
  ch.zmap = {base("1/z1", 1)};
  ch.M = grid({{"z1"}}, 1);
  ch.W = grid({{"1/z1"}}, 1);
  ch.zinv = std::vector<Expression>{base("1/z1", 1)};
  ch.singular = {{0, Complex{}}};
  out.push_back(finish(AlgebroidSpec::make("twochart", 1, 1, grid({{"1"}}, 1), {}, {ch}, {{0, Complex{}}}),
                       "(1 + z1*zb1)*u1*ub1", ""));

  out.push_back(finish(AlgebroidSpec::make("heisenberg-like", 1, 3, grid({{"1"}, {"0"}, {"0"}}, 1),
                                           {{2, 0, 1, base("1", 1)}}, {}, {}, 1),
                       "", ""));
  return out;
}

Complex complex_of(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("complex value must be a number or [re, im]");
}

std::vector<SingularLocus> loci_of(const json& j, const std::string& path) {
  std::vector<SingularLocus> out;
  if (!j.is_array()) throw ConfigError(path + " must be an array");
  for (const auto& s : j) out.push_back({s.at("coord").get<int>() - 1, complex_of(s.at("value"))});
  return out;
}

ExprGrid grid_of(const json& j, int n, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + " must be an array of arrays");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j) rows.push_back(r.get<std::vector<std::string>>());
  try {
    return grid(rows, n);
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<Expression> list_of(const json& j, int n, const std::string& path) {
  std::vector<Expression> out;
  for (const auto& t : j.get<std::vector<std::string>>()) {
    try {
      out.push_back(base(t, n));
    } catch (const Error& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.spec.name == name) return e;
  throw ConfigError("unknown catalog algebroid '" + name + "'");
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.spec.name);
  return out;
}

std::string default_lagrangian(int n, int k) { return "(1 + " + sum_sq("z", n) + ")*(" + sum_sq("u", k) + ")"; }

int induction_case_of(const AlgebroidSpec& spec) {
  const int r = spec.generic_rank;
  if (spec.m == spec.n && r == spec.n) return 1;
  if (r == spec.m && spec.m < spec.n) return 2;
  if (r == spec.n && spec.n < spec.m) return 3;
  return 0;
}

CatalogEntry entry_for(const AlgebroidSpec& spec) { return finish(spec, "", ""); }

AlgebroidSpec parse_algebroid_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("algebroid definition: ") + e.what());
  }
  try {
    const std::string name = j.value("name", std::string("custom"));
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    ExprGrid rho = grid_of(j.at("rho"), n, "rho");
    std::vector<StructureTerm> C;
    if (j.contains("C"))
      for (std::size_t i = 0; i < j["C"].size(); ++i) {
        const auto& t = j["C"][i];
        const std::string path = "C[" + std::to_string(i) + "]";
        Expression e;
        try {
          e = base(t.at("expr").get<std::string>(), n);
        } catch (const Error& err) {
          throw ConfigError(path + ": " + err.what());
        }
        C.push_back({t.at("gamma").get<int>() - 1, t.at("alpha").get<int>() - 1, t.at("beta").get<int>() - 1, e});
      }
    std::vector<ChartData> charts;
    if (j.contains("charts"))
      for (std::size_t i = 0; i < j["charts"].size(); ++i) {
        const auto& c = j["charts"][i];
        const std::string path = "charts[" + std::to_string(i) + "]";
        ChartData ch;
        ch.zmap = list_of(c.at("zmap"), n, path + ".zmap");
        ch.M = grid_of(c.at("M"), n, path + ".M");
        if (c.contains("W")) ch.W = grid_of(c["W"], n, path + ".W");
        if (c.contains("zinv")) ch.zinv = list_of(c["zinv"], n, path + ".zinv");
        if (c.contains("singular")) ch.singular = loci_of(c["singular"], path + ".singular");
        charts.push_back(std::move(ch));
      }
    std::vector<SingularLocus> singular;
    if (j.contains("singular")) singular = loci_of(j["singular"], "singular");
    std::optional<int> rank;
    if (j.contains("generic_rank")) rank = j["generic_rank"].get<int>();
    return AlgebroidSpec::make(name, n, m, std::move(rho), C, std::move(charts), std::move(singular), rank);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("algebroid definition: ") + e.what());
  }
}

}  // namespace algebroid
