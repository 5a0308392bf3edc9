#include <doctest.h>

#include <sstream>

#include "algebroid/catalog.hpp"
#include "algebroid/scenario.hpp"
#include "algebroid/spray.hpp"
#include "support.hpp"

using namespace algebroid;

namespace {

Expression full(const std::string& t, int n, int m) { return parse(t, VariableContext::full(n, m)); }

SprayField from(const AlgebroidSpec& a, const std::vector<std::string>& G) {
  std::vector<Expression> g;
  for (const auto& t : G) g.push_back(full(t, a.n, a.m));
  return SprayField::from_expressions(a, g);
}

}  // namespace

TEST_CASE("canonical spray closed form on the trivial algebroid") {
  const auto& a = catalog_entry("trivial").spec;
  const Expression L = full("z1*zb1*u1*ub1", 1, 1);
  CHECK(std::abs(canonical_spray(a, L, nullptr, WPoint{{1.0}, {2.0}})[0] - 2.0) < 1e-10);
  CHECK(std::abs(canonical_spray(a, L, nullptr, WPoint{{Complex(0, 2)}, {1.0}})[0] - Complex(0, -0.25)) < 1e-10);
  CHECK(canonical_spray(a, full("u1*ub1", 1, 1), nullptr, WPoint{{Complex(1, 1)}, {3.0}})[0] == Complex(0.0));

  gen::Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const WPoint p = rng.point(1, 1);
    const Complex expect = p.u[0] * p.u[0] / (2.0 * p.z[0]);
    CHECK(std::abs(canonical_spray(a, L, nullptr, p)[0] - expect) < 1e-10 * (1 + std::abs(expect)));
  }
}

TEST_CASE("canonical spray of a z-dependent metric on the scaled algebroid") {
  // L = (1 + |z|^2)|u|^2, rho = z:  G = z zb z u^2 / (2 (1 + |z|^2))
  const auto& a = catalog_entry("scaled").spec;
  const Expression L = full("(1 + z1*zb1)*u1*ub1", 1, 1);
  gen::Rng rng(52);
  for (int i = 0; i < 30; ++i) {
    const WPoint p = rng.point(1, 1);
    const Complex z = p.z[0], u = p.u[0];
    const Complex expect = std::conj(z) * z * u * u / (2.0 * (1.0 + std::norm(z)));
    CHECK(std::abs(canonical_spray(a, L, nullptr, p)[0] - expect) < 1e-12 * (1 + std::abs(expect)));
  }
}

TEST_CASE("lagrangian preconditions") {
  const auto& a = catalog_entry("trivial").spec;
  CHECK_THROWS_AS(canonical_spray(a, full("i*u1*ub1", 1, 1), nullptr, WPoint{{1.0}, {1.0}}), RealityCheckFailed);
  CHECK_THROWS_AS(canonical_spray(a, full("z1*zb1", 1, 1), nullptr, WPoint{{1.0}, {1.0}}), SingularMetric);
}

TEST_CASE("homogeneity residual") {
  const auto& a = catalog_entry("trivial").spec;
  const WPoint p{{Complex(0.5, 1)}, {Complex(1, -1)}};
  CHECK(homogeneity_residual(from(a, {"u1^2"}), p) == 0.0);
  CHECK(homogeneity_residual(from(a, {"u1"}), p) >= std::abs(2.0 - 4.0) * std::abs(p.u[0]) - 1e-12);
  CHECK(homogeneity_residual(SprayField::canonical(a, full("z1*zb1*u1*ub1", 1, 1)), p) <= 1e-10);
}

TEST_CASE("liouville bracket reproduces a spray") {
  const auto& a = catalog_entry("submersion").spec;
  const SprayField S = SprayField::canonical(a, full(catalog_entry("submersion").lagrangian_E, 1, 2));
  gen::Rng rng(53);
  for (int i = 0; i < 20; ++i) CHECK(liouville_bracket_residual(S, rng.point(1, 2)) <= 1e-9);
  CHECK(liouville_bracket_residual(from(catalog_entry("trivial").spec, {"u1"}), WPoint{{1.0}, {2.0}}) > 0.1);
  // G = u^3:  [L, S]^u = -4 u^3, deviation from S^u = -2 u^3 is 2 |u|^3
  CHECK(std::abs(liouville_bracket_residual(from(catalog_entry("trivial").spec, {"u1^3"}), WPoint{{1.0}, {2.0}}) - 16.0) <
        1e-12);
  CHECK(liouville_bracket_residual(from(catalog_entry("scaled").spec, {"0"}), WPoint{{Complex(1, 1)}, {2.0}}) == 0.0);
}

TEST_CASE("semispray covariance") {
  const auto& e = catalog_entry("twochart");
  const AlgebroidSpec& a = e.spec;
  const ChartData& ch = a.charts.front();
  SamplingSpec s;
  s.points = 50;
  const auto pts = sample_points(a, s);
  const Expression L = full(e.lagrangian_E, 1, 1);
  const SprayField SA = SprayField::canonical(a, L);
  const SprayField SB = SprayField::canonical(transported(a, ch), transport_lagrangian(L, ch, 1));
  const ResidualReport r = semispray_change_residual(SA, SB, ch, pts);
  CHECK(r.all_pass());
  CHECK(r.check("semispray.transformation_law").max_residual <= 1e-8);

  ChartData id;
  id.zmap = {parse("z1", VariableContext::base(1))};
  id.M = {{parse("1", VariableContext::base(1))}};
  id.zinv = std::vector<Expression>{parse("z1", VariableContext::base(1))};
  CHECK(semispray_change_residual(SA, SA, id, pts).max_residual() == 0.0);

  const SprayField C = from(a, {"1"});
  const SprayField CB = from(transported(a, ch), {"1"});
  CHECK(semispray_change_residual(C, CB, ch, pts).check("semispray.transformation_law").max_residual > 0.1);
}

TEST_CASE("straight lines for the zero spray") {
  const auto& a = catalog_entry("trivial").spec;
  const SprayField S = from(a, {"0"});
  const WPoint x0{{Complex(0.5, -0.25)}, {Complex(1, 2)}};
  const Trajectory t = integrate(S, x0, 1.0, 1e-3);
  REQUIRE_FALSE(t.aborted);
  double err = 0;
  for (const auto& s : t.samples) {
    err = std::max(err, std::abs(s.z[0] - (x0.z[0] + s.t * x0.u[0])));
    err = std::max(err, std::abs(s.u[0] - x0.u[0]));
  }
  CHECK(err <= 1e-10);
  CHECK(std::abs(t.samples.back().t - 1.0) < 1e-12);
}

TEST_CASE("integral curves are admissible on every catalog entry") {
  SamplingSpec s;
  s.points = 4;
  for (const auto& e : catalog()) {
    const SprayField S = SprayField::canonical(e.spec, full(e.lagrangian_E, e.spec.n, e.spec.m));
    for (const auto& p : sample_points(e.spec, s)) {
      const Trajectory t = integrate(S, p, 0.5, 1e-3);
      CHECK_MESSAGE(admissibility_residual(S, t) <= 1e-6, e.spec.name);
    }
  }
}

TEST_CASE("trajectory export") {
  const auto& a = catalog_entry("submersion").spec;
  const SprayField S = from(a, {"0", "0"});
  const Trajectory t = integrate(S, WPoint{{1.0}, {1.0, 0.5}}, 0.01, 1e-3);
  std::ostringstream os;
  t.write_csv(os);
  const std::string text = os.str();
  CHECK(text.rfind("t,re_z1,im_z1,re_u1,im_u1,re_u2,im_u2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(t.samples.size()) + 1);
}

TEST_CASE("integration rejects bad steps") {
  const SprayField S = from(catalog_entry("trivial").spec, {"0"});
  CHECK_THROWS_AS(integrate(S, WPoint{{1.0}, {1.0}}, 1.0, 0.0), UnsupportedInput);
  CHECK_THROWS_AS(integrate(S, WPoint{{1.0}, {1.0, 1.0}}, 1.0, 0.1), DimensionMismatch);
}
