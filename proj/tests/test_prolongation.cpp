#include <doctest.h>

#include "algebroid/catalog.hpp"
#include "algebroid/prolongation.hpp"
#include "algebroid/scenario.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

Complex ev(const Expression& e, const WPoint& p) { return evaluate<Complex>(e, to_coords(p), p.layout()); }

SectionExpr random_section(gen::Rng& rng, int n, int m) {
  SectionExpr s;
  const auto vars = gen::names(n, 0, false);
  for (int a = 0; a < m; ++a) s.components.push_back(parse(rng.polynomial(vars, 3, 2), VariableContext::base(n)));
  return s;
}

ConnectionField grid(ConnectionKind kind, const std::vector<std::vector<std::string>>& rows, int n, int m) {
  ExprGrid g;
  for (const auto& r : rows) {
    std::vector<Expression> row;
    for (const auto& t : r) row.push_back(parse(t, VariableContext::full(n, m)));
    g.push_back(row);
  }
  return ConnectionField::from_expressions(kind, g, Layout{n, m});
}

}  // namespace

TEST_CASE("lifts of sections") {
  const auto& trivial = catalog_entry("trivial").spec;
  const WPoint p{{1.0}, {2.0}};
  const ProlongVector v = vertical_lift(SectionExpr{{parse("4", VariableContext::base(1))}}, p);
  CHECK(v.Z[0] == Complex(0.0));
  CHECK(v.V[0] == Complex(4.0));

  const ProlongVector c = complete_lift(trivial, SectionExpr{{parse("z1", VariableContext::base(1))}}, p);
  CHECK(c.Z[0] == Complex(1.0));
  CHECK(c.V[0] == Complex(2.0));
}

TEST_CASE("complete lift matches the symbolic formula") {
  gen::Rng rng(61);
  for (const auto& name : {"submersion", "heisenberg-like", "immersion"}) {
    const AlgebroidSpec& a = catalog_entry(name).spec;
    for (int i = 0; i < 10; ++i) {
      const SectionExpr s = random_section(rng, a.n, a.m);
      const WPoint p = rng.point(a.n, a.m);
      const ProlongVector w = complete_lift(a, s, p);
      for (int al = 0; al < a.m; ++al) {
        Complex V;
        for (int b = 0; b < a.m; ++b) {
          Complex coeff;
          for (int k = 0; k < a.n; ++k) coeff += ev(a.rho[b][k], p) * ev(differentiate(s.components[al], Var::z(k)), p);
          for (int g = 0; g < a.m; ++g) coeff -= ev(s.components[g], p) * ev(a.c(al, g, b), p);
          V += coeff * p.u[b];
        }
        const auto ua = static_cast<std::size_t>(al);
        CHECK(std::abs(w.Z[ua] - ev(s.components[al], p)) < 1e-12);
        CHECK(std::abs(w.V[ua] - V) <= 1e-10 * (1 + std::abs(V)));
      }
    }
  }
}

TEST_CASE("brackets of lifts") {
  gen::Rng rng(62);
  SamplingSpec s;
  s.points = 10;
  for (const auto& e : catalog()) {
    const auto pts = sample_points(e.spec, s);
    for (int i = 0; i < 3; ++i) {
      const ResidualReport r =
          lift_bracket_residuals(e.spec, random_section(rng, e.spec.n, e.spec.m), random_section(rng, e.spec.n, e.spec.m), pts);
      CHECK_MESSAGE(r.all_pass(), e.spec.name);
      CHECK_MESSAGE(r.max_residual("lift.") <= 1e-9, e.spec.name);
    }
  }
}

TEST_CASE("basis brackets and the anchor morphism") {
  SamplingSpec s;
  s.points = 100;
  for (const auto& e : catalog()) {
    const ResidualReport r = basis_bracket_residuals(e.spec, sample_points(e.spec, s));
    CHECK_MESSAGE(r.all_pass(), e.spec.name);
    CHECK_MESSAGE(r.max_residual("prolongation.basis.") <= 1e-9, e.spec.name);
  }
}

TEST_CASE("tangent structure and Liouville section") {
  gen::Rng rng(63);
  const auto& e = catalog_entry("submersion");
  const SprayField S = SprayField::canonical(e.spec, parse(e.lagrangian_E, VariableContext::full(1, 2)));
  for (int i = 0; i < 20; ++i) {
    const WPoint p = rng.point(1, 2);
    const ProlongVector w{{rng.box(), rng.box()}, {rng.box(), rng.box()}, p};
    const ProlongVector tt = tangent_structure_apply(tangent_structure_apply(w));
    CHECK(algebroid::max_abs(tt.Z) == 0.0);
    CHECK(algebroid::max_abs(tt.V) == 0.0);

    const ProlongVector ts = tangent_structure_apply(semispray_section(S, p));
    const ProlongVector lv = liouville_section(p);
    CHECK(gen::diff(ts.Z, lv.Z) == 0.0);
    CHECK(gen::diff(ts.V, lv.V) == 0.0);
  }
  for (const auto& c : catalog()) {
    SamplingSpec s;
    s.points = 10;
    for (const auto& p : sample_points(c.spec, s)) CHECK(liouville_tangent_bracket_residual(c.spec, p) <= 1e-12);
  }
}

TEST_CASE("connection induced from the base") {
  const auto& scaled = catalog_entry("scaled").spec;
  const ConnectionField Np = nlc_from_base(scaled, grid(ConnectionKind::OnTE, {{"3"}}, 1, 1));
  CHECK(Np.kind == ConnectionKind::OnProlongation);
  CHECK(Np.at(WPoint{{2.0}, {1.0}})(0, 0) == Complex(6.0));

  gen::Rng rng(64);
  const auto& imm = catalog_entry("immersion").spec;
  const ConnectionField N = grid(ConnectionKind::OnTE, {{"z1*u1", "z2 + ub1"}}, 2, 1);
  SamplingSpec s;
  s.points = 20;
  const auto pts = sample_points(imm, s);
  const ResidualReport r = base_frame_residual(imm, N, nlc_from_base(imm, N), pts);
  CHECK(r.all_pass());
  CHECK(r.max_residual() <= 1e-12);
  CHECK_THROWS_AS(nlc_from_base(imm, grid(ConnectionKind::OnProlongation, {{"1"}}, 2, 1)), UnsupportedInput);
}

TEST_CASE("connection of a spray") {
  const auto& trivial = catalog_entry("trivial").spec;
  const auto full = VariableContext::full(1, 1);
  const SprayField S = SprayField::from_expressions(trivial, {parse("u1^2", full)});
  const WPoint p{{Complex(0.3, 0.2)}, {Complex(1.5, -1)}};
  CHECK(std::abs(nlc_from_spray_at(S, nullptr, p)(0, 0) - 2.0 * p.u[0]) < 1e-14);

  const SprayField C = SprayField::canonical(trivial, parse("z1*zb1*u1*ub1", full));
  CHECK(std::abs(nlc_from_spray_at(C, nullptr, WPoint{{1.0}, {2.0}})(0, 0) - 2.0) < 1e-12);
}

TEST_CASE("spray connection transforms between charts") {
  const auto& e = catalog_entry("twochart");
  const AlgebroidSpec& a = e.spec;
  const ChartData& ch = a.charts.front();
  const Expression L = parse(e.lagrangian_E, VariableContext::full(1, 1));
  const SprayField SA = SprayField::canonical(a, L);
  const AlgebroidSpec b = transported(a, ch);
  const SprayField SB = SprayField::canonical(b, transport_lagrangian(L, ch, 1));
  const ChartData back = reverse_chart(ch);
  SamplingSpec s;
  s.points = 50;
  const auto pts = sample_points(a, s);
  const ResidualReport r = prolong_change_residual(a, nlc_from_spray(SA, &ch), nlc_from_spray(SB, &back), ch, pts);
  CHECK(r.all_pass());
  CHECK(r.max_residual() <= 1e-8);

  const ConnectionField one = grid(ConnectionKind::OnProlongation, {{"1"}}, 1, 1);
  CHECK(prolong_change_residual(a, one, one, ch, pts).max_residual() > 0.1);
}

TEST_CASE("prolongation curvature") {
  const auto& sub = catalog_entry("submersion").spec;
  const WPoint p{{Complex(0.4, -0.3)}, {Complex(1, 0.5), Complex(-0.5, 2)}};
  const TensorTable z = prolong_curvature(sub, ConnectionField::zero(ConnectionKind::OnProlongation, 1, 2), p);
  CHECK(z.block("R").max_abs() == 0.0);

  // R^g_ab = C^e_ab N^g_e + rho^k_b dN^g_a/dz^k - rho^k_a dN^g_b/dz^k
  //        + N^e_a dN^g_b/du^e - N^e_b dN^g_a/du^e
  const std::vector<std::vector<std::string>> rows = {{"z1*u2", "u1^2"}, {"zb1 + u1*u2", "z1^2"}};
  const ConnectionField Np = grid(ConnectionKind::OnProlongation, rows, 1, 2);
  const auto full = VariableContext::full(1, 2);
  auto N = [&](int g, int a) { return parse(rows[g][a], full); };
  const TensorTable t = prolong_curvature(sub, Np, p);
  for (int g = 0; g < 2; ++g)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Complex v;
        for (int e = 0; e < 2; ++e) v += ev(sub.c(e, a, b), p) * ev(N(g, e), p);
        v += ev(sub.rho[b][0], p) * ev(differentiate(N(g, a), Var::z(0)), p);
        v -= ev(sub.rho[a][0], p) * ev(differentiate(N(g, b), Var::z(0)), p);
        for (int e = 0; e < 2; ++e) {
          v += ev(N(e, a), p) * ev(differentiate(N(g, b), Var::u(e)), p);
          v -= ev(N(e, b), p) * ev(differentiate(N(g, a), Var::u(e)), p);
        }
        const auto ug = static_cast<std::size_t>(g), ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        CHECK(std::abs(t.block("R").at({ug, ua, ub}) - v) <= 1e-10 * (1 + std::abs(v)));
      }
  CHECK(t.diagnostics.at("adapted_bracket_vs_R") <= 1e-10);
  CHECK(t.diagnostics.at("horizontal_vertical_vs_dN_du") <= 1e-10);
  CHECK(t.diagnostics.at("vertical_bracket") == 0.0);
  CHECK(t.diagnostics.at("R.antisymmetry") <= 1e-12);
}

TEST_CASE("differential squares to zero exactly when the anchor is a morphism") {
  SamplingSpec s;
  s.points = 30;
  for (const auto& e : catalog()) CHECK_MESSAGE(prolong_differential_check(e.spec, sample_points(e.spec, s)).all_pass(), e.spec.name);

  const auto b2 = VariableContext::base(2);
  const AlgebroidSpec bad = AlgebroidSpec::make("bad", 2, 2, {{parse("1", b2), parse("0", b2)}, {parse("0", b2), parse("1", b2)}},
                                                {{0, 0, 1, parse("z1", b2)}});
  gen::Rng rng(65);
  for (int i = 0; i < 10; ++i) {
    const WPoint p = rng.point(2, 2);
    const double d = prolong_differential_check(bad, {p}).check("prolongation.differential_squared").max_residual;
    CHECK(d > 0.1);
    CHECK(std::abs(d - std::abs(p.z[0])) < 1e-12);
  }
}
