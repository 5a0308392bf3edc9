#include <doctest.h>

#include "algebroid/algebroid.hpp"
#include "algebroid/catalog.hpp"
#include "algebroid/scenario.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

Expression b1(const std::string& t) { return parse(t, VariableContext::base(1)); }
Expression b2(const std::string& t) { return parse(t, VariableContext::base(2)); }

Complex ev(const Expression& e, const WPoint& p) { return evaluate<Complex>(e, to_coords(p), p.layout()); }

// Bracket through symbolic derivatives.
CVector bracket_oracle(const AlgebroidSpec& a, const SectionExpr& s1, const SectionExpr& s2, const WPoint& p) {
  CVector out(static_cast<std::size_t>(a.m));
  for (int g = 0; g < a.m; ++g) {
    Complex v;
    for (int al = 0; al < a.m; ++al)
      for (int be = 0; be < a.m; ++be)
        v += ev(s1.components[al], p) * ev(s2.components[be], p) * ev(a.c(g, al, be), p);
    for (int k = 0; k < a.n; ++k)
      for (int al = 0; al < a.m; ++al) {
        v += ev(a.rho[al][k], p) * ev(s1.components[al], p) * ev(differentiate(s2.components[g], Var::z(k)), p);
        v -= ev(a.rho[al][k], p) * ev(s2.components[al], p) * ev(differentiate(s1.components[g], Var::z(k)), p);
      }
    out[static_cast<std::size_t>(g)] = v;
  }
  return out;
}

SectionExpr random_section(gen::Rng& rng, int n, int m) {
  SectionExpr s;
  std::vector<std::string> vars;
  for (int k = 1; k <= n; ++k) vars.push_back("z" + std::to_string(k));
  for (int a = 0; a < m; ++a) s.components.push_back(parse(rng.polynomial(vars, 3, 2), VariableContext::base(n)));
  return s;
}

}  // namespace

TEST_CASE("anchor examples") {
  const auto& trivial = catalog_entry("trivial").spec;
  CHECK(anchor_apply(trivial, SectionExpr{{b1("1")}}, WPoint{{Complex(0.3, 2)}, {1.0}})[0] == Complex(1.0));
  const auto& scaled = catalog_entry("scaled").spec;
  CHECK(anchor_apply(scaled, SectionExpr{{b1("1")}}, WPoint{{2.0}, {1.0}})[0] == Complex(2.0));
  CHECK(anchor_apply(scaled, SectionExpr{{b1("0")}}, WPoint{{2.0}, {1.0}})[0] == Complex(0.0));
}

TEST_CASE("bracket examples") {
  const auto& tangent = catalog_entry("tangent").spec;
  const CVector zero = bracket_sections(tangent, SectionExpr{{b2("1"), b2("2")}}, SectionExpr{{b2("3"), b2("-1")}},
                                        WPoint{{1.0, 2.0}, {1.0, 1.0}});
  CHECK(zero[0] == Complex(0.0));
  CHECK(zero[1] == Complex(0.0));
  const auto& trivial = catalog_entry("trivial").spec;
  CHECK(bracket_sections(trivial, SectionExpr{{b1("1")}}, SectionExpr{{b1("z1")}}, WPoint{{3.0}, {1.0}})[0] ==
        Complex(1.0));
}

TEST_CASE("bracket agrees with the symbolic oracle and is antisymmetric") {
  gen::Rng rng(31);
  for (const auto& name : {"submersion", "heisenberg-like", "immersion", "tangent"}) {
    const AlgebroidSpec& a = catalog_entry(name).spec;
    for (int i = 0; i < 20; ++i) {
      const SectionExpr s1 = random_section(rng, a.n, a.m);
      const SectionExpr s2 = random_section(rng, a.n, a.m);
      const WPoint p = rng.point(a.n, a.m);
      const CVector b12 = bracket_sections(a, s1, s2, p);
      const CVector b21 = bracket_sections(a, s2, s1, p);
      CHECK(gen::diff(b12, bracket_oracle(a, s1, s2, p)) <= 1e-10 * (1 + algebroid::max_abs(b12)));
      for (std::size_t g = 0; g < b12.size(); ++g) CHECK(std::abs(b12[g] + b21[g]) <= 1e-12 * (1 + std::abs(b12[g])));
    }
  }
}

TEST_CASE("every catalog entry satisfies the structure identities") {
  SamplingSpec s;
  s.points = 100;
  for (const auto& e : catalog()) {
    const ResidualReport r = validate_structure(e.spec, sample_points(e.spec, s));
    CHECK_MESSAGE(r.all_pass(), e.spec.name);
    CHECK_MESSAGE(r.max_residual("structure.") <= 1e-9, e.spec.name);
  }
  const ResidualReport h = validate_structure(catalog_entry("heisenberg-like").spec, {WPoint{{0.5}, {1.0, 2.0, 3.0}}});
  CHECK(h.check("structure.jacobi").max_residual == 0.0);
}

TEST_CASE("corrupted structure function is detected") {
  const AlgebroidSpec a =
      AlgebroidSpec::make("bad", 2, 2, {{b2("1"), b2("0")}, {b2("0"), b2("1")}}, {{0, 0, 1, b2("z1")}});
  const ResidualReport r = validate_structure(a, {WPoint{{1.0, 0.5}, {1.0, 1.0}}});
  CHECK(r.check("structure.anchor_bracket").max_residual >= 0.5);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("specification errors") {
  CHECK_THROWS_AS(AlgebroidSpec::make("x", 1, 2, {{b1("1")}}, {}), DimensionMismatch);
  CHECK_THROWS_AS(AlgebroidSpec::make("x", 1, 1, {{parse("u1", VariableContext::holomorphic(1, 1))}}, {}), Error);
  CHECK_THROWS_AS(AlgebroidSpec::make("x", 1, 2, {{b1("1")}, {b1("1")}}, {{0, 0, 2, b1("1")}}), ConfigError);
  CHECK_THROWS_AS(AlgebroidSpec::make("x", 1, 2, {{b1("1")}, {b1("1")}}, {{0, 0, 1, b1("1")}, {0, 1, 0, b1("1")}}),
                  ConfigError);
}

TEST_CASE("structure functions expand by antisymmetry") {
  const auto& a = catalog_entry("submersion").spec;
  CHECK(a.c(0, 0, 1) == b1("1"));
  CHECK(ev(a.c(0, 1, 0), WPoint{{1.0}, {1.0, 1.0}}) == Complex(-1.0));
  CHECK(a.c(0, 0, 0).is_zero_constant());
}

TEST_CASE("chart changes") {
  const auto& trivial = catalog_entry("trivial").spec;
  ChartData id;
  id.zmap = {b1("z1")};
  id.M = {{b1("1")}};
  const WPoint p{{Complex(0.7, -0.2)}, {Complex(1, 1)}};
  CHECK(gen::diff(change_chart(trivial, id, p).rho_tilde, rho_at(trivial, to_coords(p), p.layout())) == 0.0);

  ChartData inv;
  inv.zmap = {b1("1/z1")};
  inv.M = {{b1("1")}};
  CHECK(std::abs(change_chart(trivial, inv, WPoint{{2.0}, {1.0}}).rho_tilde(0, 0) + 0.25) < 1e-15);

  ChartData sing;
  sing.zmap = {b1("z1^2")};
  sing.M = {{b1("1")}};
  CHECK_THROWS_AS(change_chart(trivial, sing, WPoint{{0.0}, {1.0}}), SingularJacobian);
}

TEST_CASE("two-chart entry: transition data and transported structure") {
  const auto& a = catalog_entry("twochart").spec;
  REQUIRE(a.charts.size() == 1);
  const ChartData& ch = a.charts.front();
  gen::Rng rng(32);
  const AlgebroidSpec b = transported(a, ch);
  for (int i = 0; i < 20; ++i) {
    const WPoint p = rng.point(1, 1);
    const ChartChange cc = change_chart(a, ch, p);
    CHECK(gen::diff(cc.M * cc.W, CMatrix::identity(1)) < 1e-12);
    const WPoint q = chart_point(ch, p);
    CHECK(std::abs(q.z[0] - 1.0 / p.z[0]) < 1e-14);
    CHECK(std::abs(q.u[0] - p.z[0] * p.u[0]) < 1e-14);
    // rho~ at the image point equals the transition formula
    CHECK(gen::diff(rho_at(b, to_coords(q), q.layout()), cc.rho_tilde) < 1e-12);
  }
  SamplingSpec s;
  s.points = 30;
  CHECK(validate_structure(b, sample_points(b, s)).all_pass());
}

TEST_CASE("anchor rank") {
  CHECK(anchor_rank(catalog_entry("scaled").spec, WPoint{{0.0}, {1.0}}) == 0);
  CHECK(anchor_rank(catalog_entry("scaled").spec, WPoint{{1.0}, {1.0}}) == 1);
  CHECK(anchor_rank(catalog_entry("heisenberg-like").spec, WPoint{{1.0}, {1.0, 1.0, 1.0}}) == 1);
}
