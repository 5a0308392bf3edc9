#include <doctest.h>

#include "algebroid/catalog.hpp"
#include "algebroid/induction.hpp"
#include "algebroid/scenario.hpp"
#include "algebroid/tangent.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

ConnectionField onTE(const std::vector<std::vector<std::string>>& rows, int n, int m) {
  ExprGrid g;
  for (const auto& r : rows) {
    std::vector<Expression> row;
    for (const auto& t : r) row.push_back(parse(t, VariableContext::full(n, m)));
    g.push_back(row);
  }
  return ConnectionField::from_expressions(ConnectionKind::OnTE, g, Layout{n, m});
}

}  // namespace

TEST_CASE("induced eta") {
  CHECK(induced_eta(catalog_entry("trivial").spec, WPoint{{0.5}, {2.0}})[0] == Complex(2.0));
  CHECK(induced_eta(catalog_entry("scaled").spec, WPoint{{3.0}, {2.0}})[0] == Complex(6.0));
  const CVector zero = induced_eta(catalog_entry("submersion").spec, WPoint{{3.0}, {0.0, 0.0}});
  CHECK(zero[0] == Complex(0.0));
}

TEST_CASE("tangent pushforward") {
  const WPoint p{{Complex(0.4, 1)}, {Complex(2, -1)}};
  const TangentTM t = tangent_pushforward(catalog_entry("trivial").spec, p, {Complex(1, 2)}, {Complex(-3, 1)});
  CHECK(t.Z[0] == Complex(1, 2));
  CHECK(t.eta[0] == Complex(-3, 1));

  const auto& scaled = catalog_entry("scaled").spec;
  CHECK(tangent_pushforward(scaled, WPoint{{1.0}, {1.0}}, {1.0}, {0.0}).eta[0] == Complex(1.0));
  const TangentTM v = tangent_pushforward(scaled, WPoint{{Complex(2, 1)}, {1.0}}, {0.0}, {Complex(0.5, 0)});
  CHECK(v.Z[0] == Complex(0.0));
  CHECK(std::abs(v.eta[0] - Complex(2, 1) * 0.5) < 1e-15);
}

TEST_CASE("dual pullback is the transpose of the pushforward") {
  gen::Rng rng(41);
  const auto& a = catalog_entry("immersion").spec;
  for (int i = 0; i < 20; ++i) {
    const WPoint p = rng.point(a.n, a.m);
    const CVector Z = {rng.box(), rng.box()}, V = {rng.box()};
    const CVector A = {rng.box(), rng.box()}, B = {rng.box(), rng.box()};
    const TangentTM t = tangent_pushforward(a, p, Z, V);
    const CovectorE w = dual_pullback(a, p, A, B);
    Complex lhs, rhs;
    for (std::size_t k = 0; k < 2; ++k) lhs += A[k] * t.Z[k] + B[k] * t.eta[k];
    for (std::size_t k = 0; k < 2; ++k) rhs += w.dz[k] * Z[k];
    rhs += w.du[0] * V[0];
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("adapted frame examples") {
  const auto full = VariableContext::full(1, 1);
  const WPoint p{{2.0}, {3.0}};
  const CVector g = adapted_frame_apply(ConnectionField::zero(ConnectionKind::OnTE, 1, 1), parse("z1^2*u1", full), p);
  CHECK(g[0] == Complex(12.0));
  CHECK(adapted_frame_apply(onTE({{"5"}}, 1, 1), parse("u1", full), p)[0] == Complex(-5.0));
  CHECK(adapted_frame_apply(onTE({{"z1"}}, 1, 1), parse("z1*u1", full), p)[0] == Complex(-1.0));
}

TEST_CASE("connection change law") {
  const auto& a = catalog_entry("twochart").spec;
  const ChartData& ch = a.charts.front();
  SamplingSpec s;
  s.points = 20;
  const auto pts = sample_points(a, s);

  ChartData id;
  id.zmap = {parse("z1", VariableContext::base(1))};
  id.M = {{parse("1", VariableContext::base(1))}};
  const ConnectionField N = onTE({{"z1*u1 + zb1"}}, 1, 1);
  CHECK(nlc_change_residual(N, N, id, pts).max_residual() == 0.0);

  const auto& e = catalog_entry("twochart");
  const Expression L = parse(e.lagrangian_E, VariableContext::full(1, 1));
  const ConnectionField CA = chern_lagrange_connection(L, ConnectionKind::OnTE, 1, 1);
  const ConnectionField CB = chern_lagrange_connection(transport_lagrangian(L, ch, 1), ConnectionKind::OnTE, 1, 1);
  CHECK(nlc_change_residual(CA, CB, ch, pts).max_residual() <= 1e-9);

  const ConnectionField one = onTE({{"1"}}, 1, 1);
  const ResidualReport bad = nlc_change_residual(one, one, ch, pts);
  CHECK(bad.max_residual() > 0.1);
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("adapted bracket coefficients") {
  const WPoint p{{Complex(0.3, 1), Complex(-1, 0.2)}, {Complex(1, 1)}};
  const TensorTable zero = adapted_bracket_coeffs(ConnectionField::zero(ConnectionKind::OnTE, 2, 1), p);
  CHECK(zero.block("K").max_abs() == 0.0);

  // N^1_1 = z2, N^1_2 = 0:  [delta_k, delta_h] = (dN_k/dz^h - dN_h/dz^k) d/du
  const TensorTable t = adapted_bracket_coeffs(onTE({{"z2", "0"}}, 2, 1), p);
  CHECK(t.block("K").at({0, 0, 1}) == Complex(1.0));
  CHECK(t.block("K").at({0, 1, 0}) == Complex(-1.0));
  CHECK(t.diagnostics.at("horizontal_bracket_vs_K") < 1e-12);
  CHECK(t.diagnostics.at("K_antisymmetry") == 0.0);
}

TEST_CASE("u-dependent connection: horizontal and vertical fields do not commute") {
  const WPoint p{{Complex(0.5, 0.5)}, {Complex(1, -2)}};
  const TensorTable t = adapted_bracket_coeffs(onTE({{"u1^2"}}, 1, 1), p);
  CHECK(std::abs(t.block("dN_du").at({0, 0, 0}) - 2.0 * p.u[0]) < 1e-14);
  CHECK(t.diagnostics.at("horizontal_vertical_vs_dN_du") < 1e-12);
}

TEST_CASE("torsion examples") {
  const auto b = VariableContext::full(2, 1);
  const WPoint p{{Complex(1, 0), Complex(0, 1)}, {Complex(1, 0)}};
  const auto N0 = ConnectionField::zero(ConnectionKind::OnTE, 2, 1);
  const auto sym = LinearConnectionCoeffs::from_entries(2, 1, {{0, 0, 1, parse("z1", b)}, {0, 1, 0, parse("z1", b)}},
                                                        {}, {}, {});
  CHECK(torsion_table(sym, N0, p).block("T^i_hk").max_abs() == 0.0);

  const auto D = LinearConnectionCoeffs::from_entries(2, 1, {{0, 0, 1, parse("1", b)}}, {}, {}, {});
  const TensorTable t = torsion_table(D, N0, p);
  CHECK(t.block("T^i_hk").at({0, 1, 0}) == Complex(1.0));
  CHECK(t.block("T^i_hk").at({0, 0, 1}) == Complex(-1.0));

  const auto v = LinearConnectionCoeffs::from_entries(1, 2, {}, {}, {}, {{0, 0, 1, parse("z1", VariableContext::full(1, 2))}});
  const TensorTable tv = torsion_table(v, ConnectionField::zero(ConnectionKind::OnTE, 1, 2), WPoint{{2.0}, {1.0, 1.0}});
  CHECK(tv.block("T^c_ab").at({0, 0, 1}) == Complex(2.0));
  CHECK(tv.block("T^c_ab").at({0, 1, 0}) == Complex(-2.0));
}

TEST_CASE("curvature examples") {
  const WPoint p{{Complex(0.7, 0.1)}, {Complex(1.5, -0.5)}};
  const auto N0 = ConnectionField::zero(ConnectionKind::OnTE, 1, 1);
  const auto none = LinearConnectionCoeffs::from_entries(1, 1, {}, {}, {}, {});
  for (const auto& [name, blk] : curvature_table(none, N0, p).blocks) CHECK_MESSAGE(blk.max_abs() == 0.0, name);

  const auto c = LinearConnectionCoeffs::from_entries(1, 1, {}, {}, {},
                                                      {{0, 0, 0, parse("u1", VariableContext::full(1, 1))}});
  CHECK(curvature_table(c, N0, p).block("R^s_gab").max_abs() == 0.0);
}

TEST_CASE("curvature derivative terms match finite differences") {
  gen::Rng rng(42);
  const auto ctx = VariableContext::full(2, 1);
  const auto vars = gen::names(2, 0, false);
  std::vector<LinearConnectionCoeffs::Entry> entries;
  std::map<std::tuple<int, int, int>, Expression> L;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Expression e = parse(rng.polynomial(vars, 3, 3), ctx);
        entries.push_back({i, j, k, e});
        L[{i, j, k}] = e;
      }
  const auto D = LinearConnectionCoeffs::from_entries(2, 1, entries, {}, {}, {});
  const auto N0 = ConnectionField::zero(ConnectionKind::OnTE, 2, 1);
  const WPoint p = rng.point(2, 1);
  const TensorTable t = curvature_table(D, N0, p);
  auto val = [&](int i, int j, int k) { return evaluate<Complex>(L[{i, j, k}], to_coords(p), p.layout()); };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k) {
          Complex quad;
          for (int l = 0; l < 2; ++l) quad += val(l, j, h) * val(i, l, k) - val(l, j, k) * val(i, l, h);
          const Complex fd = fd_oracle(L[{i, j, h}], p, Var::z(k), 1e-5) - fd_oracle(L[{i, j, k}], p, Var::z(h), 1e-5);
          const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
          const auto uh = static_cast<std::size_t>(h), uk = static_cast<std::size_t>(k);
          CHECK(std::abs(t.block("R^i_jhk").at({ui, uj, uh, uk}) - quad - fd) <= 1e-6 * (1 + std::abs(fd)));
        }
}
