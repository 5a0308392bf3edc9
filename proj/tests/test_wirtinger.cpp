#include <doctest.h>

#include "algebroid/catalog.hpp"
#include "algebroid/scenario.hpp"
#include "algebroid/wirtinger.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

// Every expression the catalog carries, with the layout it lives on.
std::vector<std::pair<Expression, Layout>> catalog_expressions(const CatalogEntry& e) {
  const AlgebroidSpec& a = e.spec;
  std::vector<std::pair<Expression, Layout>> out;
  for (const auto& row : a.rho)
    for (const auto& x : row) out.push_back({x, a.layout()});
  for (const auto& x : a.C) out.push_back({x, a.layout()});
  for (const auto& ch : a.charts) {
    for (const auto& x : ch.zmap) out.push_back({x, a.layout()});
    for (const auto& row : ch.M)
      for (const auto& x : row) out.push_back({x, a.layout()});
  }
  out.push_back({parse(e.lagrangian_E, VariableContext::full(a.n, a.m)), a.layout()});
  return out;
}

}  // namespace

TEST_CASE("holomorphic function has no antiholomorphic derivative") {
  const Expression e = parse("exp(z1)", VariableContext::base(1));
  const WirtingerJet j = jet(e, WPoint{{0.0}, {}}, 1);
  CHECK(j.d1.at(Var::z(0)) == Complex(1.0));
  CHECK(j.d1.at(Var::zb(0)) == Complex(0.0));
}

TEST_CASE("second-order jet of |z|^2 |u|^2") {
  const Expression e = parse("z1*zb1*u1*ub1", VariableContext::full(1, 1));
  const WPoint p{{Complex(1, 1)}, {Complex(2, 0)}};
  const WirtingerJet j = jet(e, p, 2, {{}, {{Var::u(0), Var::ub(0)}, {Var::z(0), Var::ub(0)}}});
  CHECK(std::abs(j.d2.at({Var::u(0), Var::ub(0)}) - 2.0) < 1e-14);
  // d2/dz dub = zb u
  CHECK(std::abs(j.d2.at({Var::z(0), Var::ub(0)}) - Complex(1, -1) * 2.0) < 1e-14);
}

TEST_CASE("finite-difference oracle examples") {
  const auto full = VariableContext::full(1, 1);
  CHECK(std::abs(fd_oracle(parse("z1^2", full), WPoint{{1.0}, {0.0}}, Var::z(0), 1e-5) - 2.0) < 1e-8);
  CHECK(std::abs(fd_oracle(parse("z1*zb1", full), WPoint{{Complex(1, 1)}, {0.0}}, Var::zb(0), 1e-5) - Complex(1, 1)) <
        1e-7);
  CHECK(std::abs(fd_oracle(parse("3-2i", full), WPoint{{Complex(0.3, 1)}, {0.5}}, Var::u(0), 1e-5)) < 1e-10);
}

TEST_CASE("exact jets agree with finite differences on catalog expressions") {
  for (const auto& entry : catalog()) {
    SamplingSpec s;
    s.points = 50;
    s.seed = 2;
    const auto pts = sample_points(entry.spec, s);
    for (const auto& [e, layout] : catalog_expressions(entry)) {
      for (const auto& p : pts) {
        const WirtingerJet j = jet(e, p, 1);
        for (const auto& [v, d] : j.d1) {
          const Complex f = fd_oracle(e, p, v, 1e-5);
          CHECK_MESSAGE(std::abs(d - f) / (1 + std::abs(d)) <= 1e-6, entry.spec.name << " " << print(e) << " "
                                                                                       << v.name());
        }
      }
    }
  }
}

TEST_CASE("mixed second partials are symmetric") {
  gen::Rng rng(21);
  const auto ctx = VariableContext::full(2, 2);
  const auto vars = gen::names(2, 2, true);
  for (int i = 0; i < 40; ++i) {
    const Expression e = parse(rng.expression(vars), ctx);
    const WirtingerJet j = jet(e, rng.point(2, 2), 2);
    for (const auto& [key, v] : j.d2) CHECK(j.d2.at({key.second, key.first}) == v);
  }
}

TEST_CASE("product rule") {
  gen::Rng rng(22);
  const auto ctx = VariableContext::full(1, 2);
  const auto vars = gen::names(1, 2, true);
  for (int i = 0; i < 100; ++i) {
    const Expression a = parse(rng.expression(vars), ctx);
    const Expression b = parse(rng.expression(vars), ctx);
    const WPoint p = rng.point(1, 2);
    const WirtingerJet ja = jet(a, p, 1);
    const WirtingerJet jb = jet(b, p, 1);
    const WirtingerJet jab = jet(a * b, p, 1);
    for (const auto& [v, d] : jab.d1) {
      const Complex expect = ja.value * jb.d1.at(v) + jb.value * ja.d1.at(v);
      CHECK(std::abs(d - expect) <= 1e-12 * (1 + std::abs(expect)));
    }
  }
}

TEST_CASE("reality residual") {
  const auto full = VariableContext::full(1, 1);
  const WPoint p{{Complex(0.4, 1.2)}, {Complex(-1, 0.5)}};
  CHECK(reality_residual(parse("z1*zb1*u1*ub1 + u1*zb1 + ub1*z1", full), p) < 1e-15);
  CHECK(reality_residual(parse("u1*zb1", full), p) > 0.1);
  CHECK_THROWS_AS(require_real(parse("i*u1*ub1", full), {p}), RealityCheckFailed);
}

TEST_CASE("lie bracket of coordinate fields") {
  // [d/dz, z d/dz] = d/dz on layout {1, 0 -> 1}
  const Layout L{1, 1};
  auto X = [](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    Vec<S> v(c.size(), S(Complex{}));
    v[0] = S(Complex{1.0, 0.0});
    return v;
  };
  auto Y = [](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    Vec<S> v(c.size(), S(Complex{}));
    v[0] = c[0];
    return v;
  };
  const Vec<Complex> c = to_coords(WPoint{{Complex(3, 1)}, {1.0}});
  const Vec<Complex> br = lie_bracket(X, Y, c);
  REQUIRE(br.size() == L.size());
  CHECK(br[0] == Complex(1.0));
  for (std::size_t i = 1; i < br.size(); ++i) CHECK(br[i] == Complex(0.0));
}
