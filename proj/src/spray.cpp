#include "algebroid/spray.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "algebroid/parallel.hpp"

namespace algebroid {

SprayField SprayField::from_expressions(const AlgebroidSpec& a, const std::vector<Expression>& G) {
  if (G.size() != static_cast<std::size_t>(a.m)) throw DimensionMismatch("spray needs m components");
  const Layout L = a.layout();
  for (const auto& e : G)
    for (Var v : free_variables(e))
      if (!L.contains(v)) throw UndeclaredVariable(v.name());
  return {a, Field::from_expressions(G, L)};
}

SprayField SprayField::canonical(const AlgebroidSpec& a, const Expression& L, const ChartData* chart) {
  const Layout layout = a.layout();
  for (Var v : free_variables(L))
    if (!layout.contains(v)) throw UndeclaredVariable(v.name());
  std::optional<ChartData> ch;
  if (chart != nullptr) ch = *chart;
  Field G = Field::make<3>(layout, static_cast<std::size_t>(a.m), [a, L, ch](const auto& c) {
    return canonical_spray_at(a, L, ch ? &*ch : nullptr, c);
  });
  return {a, std::move(G)};
}

void check_lagrangian_real(const Expression& L, const WPoint& p) {
  const Complex v = evaluate<Complex>(L, to_coords(p), p.layout());
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
    throw RealityCheckFailed("Lagrangian '" + print(L) + "' is not real at the point (imaginary part " +
                             std::to_string(v.imag()) + ")");
}

CVector canonical_spray(const AlgebroidSpec& a, const Expression& L, const ChartData* chart, const WPoint& p) {
  if (p.layout() != a.layout()) throw DimensionMismatch("point does not match the algebroid dimensions");
  check_lagrangian_real(L, p);
  return canonical_spray_at(a, L, chart, to_coords(p));
}

ResidualReport semispray_change_residual(const SprayField& SA, const SprayField& SB, const ChartData& chart,
                                         const std::vector<WPoint>& points, const Tolerances& tol) {
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const AlgebroidSpec& a = SA.algebroid;
  auto kernel = [&](const WPoint& p) {
    const Layout L = p.layout();
    const Vec<Complex> c = to_coords(p);
    const CMatrix J = zmap_jacobian(chart, c, L);
    if (std::abs(determinant(J)) <= 1e-10) throw SingularJacobian("chart Jacobian is singular at a sample point");
    const WPoint q = chart_point(chart, p);
    const Vec<Complex> cq = to_coords(q);
    const CMatrix M = M_at(chart, c, L);
    const auto dM = grid_dz(chart.M, c, L);
    const CVector eta = eta_at(a, c, L);
    const CVector G = SA.G(c);
    const CVector Gt = SB.G(cq);
    double vert = 0;
    for (int al = 0; al < L.m; ++al) {
      Complex r = Gt[al];
      for (int be = 0; be < L.m; ++be) {
        r -= M(al, be) * G[be];
        for (int k = 0; k < L.n; ++k) r += 0.5 * dM[k](al, be) * p.u[be] * eta[k];
      }
      vert = std::max(vert, std::abs(r));
    }
    const CVector eta_t = eta_at(SB.algebroid, cq, L);
    const CVector eta_j = J * eta;
    double horiz = 0;
    for (int k = 0; k < L.n; ++k) horiz = std::max(horiz, std::abs(eta_t[k] - eta_j[k]));
    return std::vector<double>{horiz, vert};
  };
  record_batch(report, {"semispray.anchor_part_law", "semispray.transformation_law"}, {tol.ad, tol.metric}, points,
               kernel);
  return report;
}

const std::vector<Complex>& default_lambdas() {
  static const std::vector<Complex> l = {Complex{2.0, 0.0}, Complex{0.0, 1.0}, Complex{1.0, 1.0}, Complex{0.5, 0.0}};
  return l;
}

double homogeneity_residual(const SprayField& S, const WPoint& p, const std::vector<Complex>& lambdas) {
  const CVector G = S.at(p);
  double worst = 0;
  for (const Complex& lam : lambdas) {
    WPoint q = p;
    for (auto& v : q.u) v *= lam;
    const CVector Gl = S.at(q);
    for (std::size_t a = 0; a < G.size(); ++a) worst = std::max(worst, std::abs(Gl[a] - lam * lam * G[a]));
  }
  return worst;
}

double liouville_bracket_residual(const SprayField& S, const WPoint& p) {
  const AlgebroidSpec& a = S.algebroid;
  const Layout L = a.layout();
  if (p.layout() != L) throw DimensionMismatch("point does not match the algebroid dimensions");
  const std::size_t uoff = 2 * static_cast<std::size_t>(L.n);
  auto liouville = [&](const auto& c) {
    using T = typename std::decay_t<decltype(c)>::value_type;
    Vec<T> v(c.size(), T(Complex{}));
    for (int al = 0; al < L.m; ++al) v[uoff + al] = c[uoff + al];
    return v;
  };
  auto spray = [&](const auto& c) {
    using T = typename std::decay_t<decltype(c)>::value_type;
    Vec<T> v(c.size(), T(Complex{}));
    const Vec<T> eta = eta_at(a, c, L);
    for (int k = 0; k < L.n; ++k) v[k] = eta[k];
    const Vec<T> G = S.G(c);
    for (int al = 0; al < L.m; ++al) v[uoff + al] = T(Complex{-2.0, 0.0}) * G[al];
    return v;
  };
  const Vec<Complex> c = to_coords(p);
  const Vec<Complex> br = lie_bracket(liouville, spray, c);
  const Vec<Complex> sv = spray(c);
  double worst = 0;
  for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(br[i] - sv[i]));
  return worst;
}

namespace {

struct State {
  CVector z;
  CVector u;
};

State rhs(const SprayField& S, const State& s) {
  const WPoint p{s.z, s.u};
  const Vec<Complex> c = to_coords(p);
  State d;
  d.z = eta_at(S.algebroid, c, p.layout());
  const CVector G = S.G(c);
  d.u.resize(G.size());
  for (std::size_t a = 0; a < G.size(); ++a) d.u[a] = -2.0 * G[a];
  return d;
}

State axpy(const State& s, double h, const State& d) {
  State out = s;
  for (std::size_t i = 0; i < s.z.size(); ++i) out.z[i] += h * d.z[i];
  for (std::size_t i = 0; i < s.u.size(); ++i) out.u[i] += h * d.u[i];
  return out;
}

bool finite_state(const State& s) {
  for (const auto& v : s.z)
    if (!all_finite(v)) return false;
  for (const auto& v : s.u)
    if (!all_finite(v)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const SprayField& S, const WPoint& x0, double t_end, double step, const IntegrateOptions& opt) {
  if (!(step > 0) || !(t_end > 0)) throw UnsupportedInput("integration needs step > 0 and t_end > 0");
  if (x0.layout() != S.algebroid.layout()) throw DimensionMismatch("initial point does not match the algebroid");
  const auto steps = static_cast<long>(std::max(1.0, std::round(t_end / step)));
  const double h = t_end / static_cast<double>(steps);

  auto near_singular = [&](const State& s) {
    for (const auto& loc : S.algebroid.singular)
      if (std::abs(s.z[static_cast<std::size_t>(loc.coord)] - loc.value) < opt.singular_radius) return true;
    return false;
  };

  Trajectory traj;
  traj.step = h;
  State s{x0.z, x0.u};
  traj.samples.push_back({0.0, s.z, s.u});
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    State next;
    try {
      const State k1 = rhs(S, s);
      const State k2 = rhs(S, axpy(s, h / 2, k1));
      const State k3 = rhs(S, axpy(s, h / 2, k2));
      const State k4 = rhs(S, axpy(s, h, k3));
      next = s;
      for (std::size_t j = 0; j < s.z.size(); ++j) next.z[j] += h / 6 * (k1.z[j] + 2.0 * k2.z[j] + 2.0 * k3.z[j] + k4.z[j]);
      for (std::size_t j = 0; j < s.u.size(); ++j) next.u[j] += h / 6 * (k1.u[j] + 2.0 * k2.u[j] + 2.0 * k3.u[j] + k4.u[j]);
    } catch (const Error& e) {
      traj.aborted = true;
      traj.message = std::string("evaluation failed after t = ") + std::to_string(t) + ": " + e.what();
      return traj;
    }
    if (!finite_state(next)) {
      traj.aborted = true;
      traj.message = "non-finite state; last valid t = " + std::to_string(t);
      return traj;
    }
    if (near_singular(next)) {
      traj.aborted = true;
      traj.message = "entered a singular locus ball; last valid t = " + std::to_string(t);
      return traj;
    }
    s = std::move(next);
    traj.samples.push_back({i + 1 == steps ? t_end : static_cast<double>(i + 1) * h, s.z, s.u});
  }
  return traj;
}

double admissibility_residual(const SprayField& S, const Trajectory& traj) {
  const auto& smp = traj.samples;
  if (smp.size() < 5) return 0.0;
  const double h = traj.step;
  const Layout L = S.algebroid.layout();
  double worst = 0;
  for (std::size_t i = 2; i + 2 < smp.size(); ++i) {
    const CVector eta = eta_at(S.algebroid, to_coords(WPoint{smp[i].z, smp[i].u}), L);
    for (std::size_t k = 0; k < smp[i].z.size(); ++k) {
      const Complex dz =
          (smp[i - 2].z[k] - 8.0 * smp[i - 1].z[k] + 8.0 * smp[i + 1].z[k] - smp[i + 2].z[k]) / (12.0 * h);
      worst = std::max(worst, std::abs(dz - eta[k]));
    }
  }
  return worst;
}

namespace {

void put(std::ostream& os, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, ptr - buf);
}

}  // namespace

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  if (!samples.empty()) {
    for (std::size_t k = 0; k < samples.front().z.size(); ++k) os << ",re_z" << k + 1 << ",im_z" << k + 1;
    for (std::size_t a = 0; a < samples.front().u.size(); ++a) os << ",re_u" << a + 1 << ",im_u" << a + 1;
  }
  os << '\n';
  for (const auto& s : samples) {
    put(os, s.t);
    for (const auto& v : s.z) {
      os << ',';
      put(os, v.real());
      os << ',';
      put(os, v.imag());
    }
    for (const auto& v : s.u) {
      os << ',';
      put(os, v.real());
      os << ',';
      put(os, v.imag());
    }
    os << '\n';
  }
}

}  // namespace algebroid
