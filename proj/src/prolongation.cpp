#include "algebroid/prolongation.hpp"

#include <algorithm>
#include <cmath>

#include "algebroid/parallel.hpp"

namespace algebroid {

namespace {

void require_section(const AlgebroidSpec& a, const SectionExpr& s) {
  if (s.components.size() != static_cast<std::size_t>(a.m))
    throw DimensionMismatch("section must have m = " + std::to_string(a.m) + " components");
  const Layout L = a.layout();
  for (const auto& e : s.components)
    for (Var v : free_variables(e))
      if (!L.contains(v) || v.cls == VarClass::U || v.cls == VarClass::UB)
        throw UndeclaredVariable("section depends on " + v.name());
}

// Components of a section of E as a generic function of the coordinates.
auto section_fn(const SectionExpr& s, const Layout& L) {
  return [&s, L](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    Vec<S> out;
    out.reserve(s.components.size());
    for (const auto& e : s.components) out.push_back(evaluate<S>(e, c, L));
    return out;
  };
}

// [s1, s2]_E for generic section functions.
template <class F1, class F2>
auto bracket_fn(const AlgebroidSpec& a, F1 s1, F2 s2) {
  return [&a, s1, s2](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    const Layout L = a.layout();
    const std::size_t m = static_cast<std::size_t>(a.m);
    const Vec<S> z1 = s1(c);
    const Vec<S> z2 = s2(c);
    const Matrix<S> r = rho_at(a, c, L);
    const Vec<S> C = C_at(a, c, L);
    Vec<S> out(m, S(Complex{}));
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t be = 0; be < m; ++be)
        for (std::size_t g = 0; g < m; ++g)
          out[g] = out[g] + z1[al] * z2[be] * C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
    for (int k = 0; k < a.n; ++k) {
      const Vec<S> d1 = partial(s1, c, static_cast<std::size_t>(k));
      const Vec<S> d2 = partial(s2, c, static_cast<std::size_t>(k));
      for (std::size_t al = 0; al < m; ++al)
        for (std::size_t g = 0; g < m; ++g) out[g] = out[g] + r(al, k) * (z1[al] * d2[g] - z2[al] * d1[g]);
    }
    return out;
  };
}

template <class F>
auto vertical_fn(const AlgebroidSpec& a, F s) {
  return [&a, s](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    const std::size_t m = static_cast<std::size_t>(a.m);
    const Vec<S> z = s(c);
    Vec<S> out(2 * m, S(Complex{}));
    for (std::size_t al = 0; al < m; ++al) out[m + al] = z[al];
    return out;
  };
}

template <class F>
auto complete_fn(const AlgebroidSpec& a, F s) {
  return [&a, s](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    const Layout L = a.layout();
    const std::size_t n = static_cast<std::size_t>(a.n);
    const std::size_t m = static_cast<std::size_t>(a.m);
    const Vec<S> z = s(c);
    const Matrix<S> r = rho_at(a, c, L);
    const Vec<S> C = C_at(a, c, L);
    std::vector<Vec<S>> dz;
    for (std::size_t k = 0; k < n; ++k) dz.push_back(partial(s, c, k));
    Vec<S> out(2 * m, S(Complex{}));
    for (std::size_t al = 0; al < m; ++al) {
      out[al] = z[al];
      for (std::size_t be = 0; be < m; ++be) {
        S coef(Complex{});
        for (std::size_t k = 0; k < n; ++k) coef = coef + r(be, k) * dz[k][al];
        for (std::size_t g = 0; g < m; ++g)
          coef = coef - z[g] * C[a.cidx(static_cast<int>(al), static_cast<int>(g), static_cast<int>(be))];
        out[m + al] = out[m + al] + coef * c[2 * n + be];
      }
    }
    return out;
  };
}

// Basis sections Z_a (vertical == false) and V_a.
auto basis_fn(const AlgebroidSpec& a, std::size_t idx, bool vertical) {
  return [&a, idx, vertical](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    const std::size_t m = static_cast<std::size_t>(a.m);
    (void)c;
    Vec<S> out(2 * m, S(Complex{}));
    out[vertical ? m + idx : idx] = S(Complex{1.0, 0.0});
    return out;
  };
}

double max_diff(const Vec<Complex>& x, const Vec<Complex>& y) {
  double w = 0;
  for (std::size_t i = 0; i < x.size(); ++i) w = std::max(w, std::abs(x[i] - y[i]));
  return w;
}

ProlongVector split(const Vec<Complex>& w, std::size_t m, const WPoint& p) {
  return {CVector(w.begin(), w.begin() + static_cast<long>(m)), CVector(w.begin() + static_cast<long>(m), w.end()), p};
}

void require_point(const AlgebroidSpec& a, const WPoint& p) {
  if (p.layout() != a.layout()) throw DimensionMismatch("point does not match the algebroid dimensions");
}

}  // namespace

ProlongVector vertical_lift(const SectionExpr& s, const WPoint& p) {
  const Layout L = p.layout();
  if (s.components.size() != static_cast<std::size_t>(L.m)) throw DimensionMismatch("section must have m components");
  const Vec<Complex> c = to_coords(p);
  ProlongVector w{CVector(static_cast<std::size_t>(L.m)), CVector(), p};
  for (const auto& e : s.components) w.V.push_back(evaluate<Complex>(e, c, L));
  return w;
}

ProlongVector complete_lift(const AlgebroidSpec& a, const SectionExpr& s, const WPoint& p) {
  require_section(a, s);
  require_point(a, p);
  const auto f = complete_fn(a, section_fn(s, a.layout()));
  return split(f(to_coords(p)), static_cast<std::size_t>(a.m), p);
}

ResidualReport lift_bracket_residuals(const AlgebroidSpec& a, const SectionExpr& s1, const SectionExpr& s2,
                                      const std::vector<WPoint>& points, const Tolerances& tol) {
  require_section(a, s1);
  require_section(a, s2);
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const Layout L = a.layout();
  const auto f1 = section_fn(s1, L);
  const auto f2 = section_fn(s2, L);
  const auto br = bracket_fn(a, f1, f2);
  const auto v1 = vertical_fn(a, f1);
  const auto v2 = vertical_fn(a, f2);
  const auto c1 = complete_fn(a, f1);
  const auto c2 = complete_fn(a, f2);
  const auto vbr = vertical_fn(a, br);
  const auto cbr = complete_fn(a, br);

  auto kernel = [&](const WPoint& p) {
    require_point(a, p);
    const Vec<Complex> c = to_coords(p);
    auto anchor = [&](const auto& W) {
      return [&a, &W](const auto& cc) { return prolong_anchor(a, W, cc); };
    };
    const double vv = max_abs(prolong_bracket(a, v1, v2, c));
    const double vc = max_diff(prolong_bracket(a, v1, c2, c), vbr(c));
    const double cc = max_diff(prolong_bracket(a, c1, c2, c), cbr(c));
    const double vv_a = max_abs(lie_bracket(anchor(v1), anchor(v2), c));
    const double vc_a = max_diff(lie_bracket(anchor(v1), anchor(c2), c), prolong_anchor(a, vbr, c));
    const double cc_a = max_diff(lie_bracket(anchor(c1), anchor(c2), c), prolong_anchor(a, cbr, c));
    return std::vector<double>{vv, vc, cc, vv_a, vc_a, cc_a};
  };
  record_batch(report,
               {"lift.vertical_vertical", "lift.vertical_complete", "lift.complete_complete",
                "lift.vertical_vertical.anchor", "lift.vertical_complete.anchor", "lift.complete_complete.anchor"},
               {tol.ad, tol.ad, tol.ad, tol.ad, tol.ad, tol.ad}, points, kernel);
  return report;
}

ResidualReport basis_bracket_residuals(const AlgebroidSpec& a, const std::vector<WPoint>& points,
                                       const Tolerances& tol) {
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const std::size_t m = static_cast<std::size_t>(a.m);
  const Layout L = a.layout();
  auto kernel = [&](const WPoint& p) {
    require_point(a, p);
    const Vec<Complex> c = to_coords(p);
    const CVector C = C_at(a, c, L);
    auto anchor_of = [&](std::size_t idx, bool vertical) {
      return [&a, idx, vertical](const auto& cc) { return prolong_anchor(a, basis_fn(a, idx, vertical), cc); };
    };
    double zz = 0, zv = 0, vv = 0, zz_T = 0;
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t be = 0; be < m; ++be) {
        Vec<Complex> expect(c.size());
        for (std::size_t g = 0; g < m; ++g) {
          const Vec<Complex> zg = anchor_of(g, false)(c);
          const Complex cg = C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
          for (std::size_t i = 0; i < c.size(); ++i) expect[i] += cg * zg[i];
        }
        zz = std::max(zz, max_diff(lie_bracket(anchor_of(al, false), anchor_of(be, false), c), expect));
        zv = std::max(zv, max_abs(lie_bracket(anchor_of(al, false), anchor_of(be, true), c)));
        vv = std::max(vv, max_abs(lie_bracket(anchor_of(al, true), anchor_of(be, true), c)));
        Vec<Complex> coeff(2 * m);
        for (std::size_t g = 0; g < m; ++g)
          coeff[g] = C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
        zz_T = std::max(zz_T, max_diff(prolong_bracket(a, basis_fn(a, al, false), basis_fn(a, be, false), c), coeff));
      }
    return std::vector<double>{zz, zv, vv, zz_T};
  };
  record_batch(report,
               {"prolongation.basis.ZZ", "prolongation.basis.ZV", "prolongation.basis.VV",
                "prolongation.basis.ZZ.coefficients"},
               {tol.ad, 1e-12, 1e-12, tol.ad}, points, kernel);
  return report;
}

ProlongVector tangent_structure_apply(const ProlongVector& w) {
  return {CVector(w.Z.size()), w.Z, w.at};
}

ProlongVector liouville_section(const WPoint& p) { return {CVector(p.u.size()), p.u, p}; }

ProlongVector semispray_section(const SprayField& S, const WPoint& p) {
  const CVector G = S.at(p);
  ProlongVector w{p.u, CVector(G.size()), p};
  for (std::size_t al = 0; al < G.size(); ++al) w.V[al] = -2.0 * G[al];
  return w;
}

double liouville_tangent_bracket_residual(const AlgebroidSpec& a, const WPoint& p) {
  require_point(a, p);
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  auto liouville = [&](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    Vec<S> out(2 * m, S(Complex{}));
    for (std::size_t al = 0; al < m; ++al) out[m + al] = c[2 * n + al];
    return out;
  };
  auto T = [m](const Vec<Complex>& w) {
    Vec<Complex> out(2 * m);
    for (std::size_t al = 0; al < m; ++al) out[m + al] = w[al];
    return out;
  };
  const Vec<Complex> c = to_coords(p);
  double worst = 0;
  for (std::size_t al = 0; al < m; ++al)
    for (bool vertical : {false, true}) {
      const auto X = basis_fn(a, al, vertical);
      const Vec<Complex> TX = T(X(c));
      // T X has constant coefficients, so it is again a basis section (or zero).
      const Vec<Complex> lhs =
          vertical ? Vec<Complex>(2 * m) : prolong_bracket(a, liouville, basis_fn(a, al, true), c);
      const Vec<Complex> rhs = T(prolong_bracket(a, liouville, X, c));
      for (std::size_t i = 0; i < 2 * m; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i] + TX[i]));
    }
  return worst;
}

ConnectionField nlc_from_base(const AlgebroidSpec& a, const ConnectionField& N) {
  if (N.kind != ConnectionKind::OnTE) throw UnsupportedInput("nlc_from_base needs a connection on T'E");
  if (N.field.layout() != a.layout()) throw DimensionMismatch("connection layout differs from the algebroid");
  const std::size_t m = static_cast<std::size_t>(a.m);
  ConnectionField out;
  out.kind = ConnectionKind::OnProlongation;
  out.rows = m;
  out.cols = m;
  out.field = Field::make<4>(a.layout(), m * m, [a, N](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    const std::size_t mm = static_cast<std::size_t>(a.m);
    const Matrix<S> r = rho_at(a, c, a.layout());
    const Matrix<S> Nv = N.at(c);
    Vec<S> flat(mm * mm, S(Complex{}));
    for (std::size_t be = 0; be < mm; ++be)
      for (std::size_t al = 0; al < mm; ++al)
        for (int k = 0; k < a.n; ++k) flat[be * mm + al] = flat[be * mm + al] + r(al, k) * Nv(be, k);
    return flat;
  });
  return out;
}

ResidualReport base_frame_residual(const AlgebroidSpec& a, const ConnectionField& N, const ConnectionField& Np,
                                   const std::vector<WPoint>& points, const Tolerances& tol) {
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  auto kernel = [&](const WPoint& p) {
    require_point(a, p);
    const Vec<Complex> c = to_coords(p);
    const CMatrix r = rho_at(a, c, a.layout());
    const CMatrix Nk = N.at(c);
    double worst = 0;
    for (std::size_t al = 0; al < m; ++al) {
      auto delta = [&](const auto& cc) {
        using S = typename std::decay_t<decltype(cc)>::value_type;
        const Matrix<S> Nv = Np.at(cc);
        Vec<S> out(2 * m, S(Complex{}));
        out[al] = S(Complex{1.0, 0.0});
        for (std::size_t be = 0; be < m; ++be) out[m + be] = S(Complex{}) - Nv(be, al);
        return out;
      };
      const Vec<Complex> lhs = prolong_anchor(a, delta, c);
      Vec<Complex> rhs(c.size());
      for (std::size_t k = 0; k < n; ++k) {
        rhs[k] += r(al, k);
        for (std::size_t be = 0; be < m; ++be) rhs[2 * n + be] -= r(al, k) * Nk(be, k);
      }
      worst = std::max(worst, max_diff(lhs, rhs));
    }
    return std::vector<double>{worst};
  };
  record_batch(report, {"prolongation.adapted_frame_anchor"}, {std::min(tol.ad, 1e-10)}, points, kernel);
  return report;
}

namespace {

template <class S>
Matrix<S> spray_connection_at(const SprayField& Sp, const std::optional<ChartData>& chart, const Vec<S>& c) {
  const AlgebroidSpec& a = Sp.algebroid;
  const Layout L = a.layout();
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  Matrix<S> N(m, m);
  for (std::size_t al = 0; al < m; ++al) {
    const Vec<S> dG = partial(Sp.G, c, 2 * n + al);
    for (std::size_t be = 0; be < m; ++be) N(be, al) = dG[be];
  }
  if (chart) {
    const Matrix<S> r = rho_at(a, c, L);
    const Matrix<S> W = W_at(*chart, c, L);
    const auto dM = grid_dz(chart->M, c, L);
    const Vec<S> eta = eta_at(a, c, L);
    const S quarter(Complex{0.25, 0.0});
    // dMu[k](g) = dM^g_d/dz^k u^d
    std::vector<Vec<S>> dMu(n, Vec<S>(m, S(Complex{})));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t g = 0; g < m; ++g)
        for (std::size_t d = 0; d < m; ++d) dMu[k][g] = dMu[k][g] + dM[k](g, d) * c[2 * n + d];
    for (std::size_t be = 0; be < m; ++be)
      for (std::size_t al = 0; al < m; ++al) {
        S s(Complex{});
        for (std::size_t g = 0; g < m; ++g) {
          S inner(Complex{});
          for (std::size_t k = 0; k < n; ++k) inner = inner + r(al, k) * dMu[k][g] - dM[k](g, al) * eta[k];
          s = s + W(be, g) * inner;
        }
        N(be, al) = N(be, al) + quarter * s;
      }
  }
  return N;
}

}  // namespace

ConnectionField nlc_from_spray(const SprayField& S, const ChartData* chart) {
  const std::size_t m = static_cast<std::size_t>(S.algebroid.m);
  std::optional<ChartData> ch;
  if (chart != nullptr) ch = *chart;
  ConnectionField out;
  out.kind = ConnectionKind::OnProlongation;
  out.rows = m;
  out.cols = m;
  out.field = Field::make<3>(S.algebroid.layout(), m * m, [S, ch](const auto& c) {
    using T = typename std::decay_t<decltype(c)>::value_type;
    const Matrix<T> N = spray_connection_at(S, ch, c);
    Vec<T> flat;
    flat.reserve(N.rows() * N.cols());
    for (std::size_t i = 0; i < N.rows(); ++i)
      for (std::size_t j = 0; j < N.cols(); ++j) flat.push_back(N(i, j));
    return flat;
  });
  return out;
}

CMatrix nlc_from_spray_at(const SprayField& S, const ChartData* chart, const WPoint& p) {
  require_point(S.algebroid, p);
  std::optional<ChartData> ch;
  if (chart != nullptr) ch = *chart;
  return spray_connection_at(S, ch, to_coords(p));
}

ResidualReport prolong_change_residual(const AlgebroidSpec& a, const ConnectionField& NA, const ConnectionField& NB,
                                       const ChartData& chart, const std::vector<WPoint>& points,
                                       const Tolerances& tol) {
  if (NA.kind != ConnectionKind::OnProlongation || NB.kind != ConnectionKind::OnProlongation)
    throw UnsupportedInput("transformation law applies to connections on the prolongation");
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  auto kernel = [&](const WPoint& p) {
    require_point(a, p);
    const Layout L = p.layout();
    const Vec<Complex> c = to_coords(p);
    const CMatrix J = zmap_jacobian(chart, c, L);
    if (std::abs(determinant(J)) <= 1e-10) throw SingularJacobian("chart Jacobian is singular at a sample point");
    const CMatrix r = rho_at(a, c, L);
    const CMatrix M = M_at(chart, c, L);
    const auto dM = grid_dz(chart.M, c, L);
    const CMatrix Na = NA.at(c);
    const CMatrix Nb = NB.at(to_coords(chart_point(chart, p)));
    double worst = 0;
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t al = 0; al < m; ++al) {
        Complex v;
        for (std::size_t be = 0; be < m; ++be) {
          v += M(be, al) * Nb(g, be) - M(g, be) * Na(be, al);
          for (std::size_t k = 0; k < n; ++k) v += r(al, k) * dM[k](g, be) * p.u[be];
        }
        worst = std::max(worst, std::abs(v));
      }
    return std::vector<double>{worst};
  };
  record_batch(report, {"prolongation.transformation_law"}, {tol.metric}, points, kernel);
  return report;
}

TensorTable prolong_curvature(const AlgebroidSpec& a, const ConnectionField& Np, const WPoint& p) {
  if (Np.kind != ConnectionKind::OnProlongation) throw UnsupportedInput("curvature needs a connection on the prolongation");
  require_point(a, p);
  const Layout L = a.layout();
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  const Vec<Complex> c = to_coords(p);
  const CMatrix r = rho_at(a, c, L);
  const CVector C = C_at(a, c, L);
  const CMatrix Nv = Np.at(c);
  auto reshape = [&](const Vec<Complex>& flat) {
    CMatrix out(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) out(i, j) = flat[i * m + j];
    return out;
  };
  std::vector<CMatrix> dNz, dNu;
  for (std::size_t k = 0; k < n; ++k) dNz.push_back(reshape(partial(Np.field, c, k)));
  for (std::size_t e = 0; e < m; ++e) dNu.push_back(reshape(partial(Np.field, c, 2 * n + e)));
  auto cc = [&](std::size_t g, std::size_t al, std::size_t be) {
    return C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
  };

  TensorTable t;
  TensorBlock& R = t.add("R", TensorBlock({"g", "a", "b"}, {m, m, m}, std::make_pair(1, 2)));
  TensorBlock& HV = t.add("dN_du", TensorBlock({"g", "a", "b"}, {m, m, m}));
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t be = 0; be < m; ++be) {
        Complex v;
        for (std::size_t e = 0; e < m; ++e) v += cc(e, al, be) * Nv(g, e);
        for (std::size_t k = 0; k < n; ++k) v += r(be, k) * dNz[k](g, al) - r(al, k) * dNz[k](g, be);
        for (std::size_t e = 0; e < m; ++e) v += Nv(e, al) * dNu[e](g, be) - Nv(e, be) * dNu[e](g, al);
        R.at({g, al, be}) = v;
        HV.at({g, al, be}) = dNu[be](g, al);
      }

  auto delta = [&](std::size_t al) {
    return [&, al](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::value_type;
      const Matrix<S> N = Np.at(x);
      Vec<S> out(2 * m, S(Complex{}));
      out[al] = S(Complex{1.0, 0.0});
      for (std::size_t g = 0; g < m; ++g) out[m + g] = S(Complex{}) - N(g, al);
      return out;
    };
  };
  double hh = 0, hv = 0, vv = 0;
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t be = 0; be < m; ++be) {
      Vec<Complex> expect(2 * m);
      for (std::size_t g = 0; g < m; ++g) {
        expect[g] = cc(g, al, be);
        Complex v = R.at({g, al, be});
        for (std::size_t e = 0; e < m; ++e) v -= cc(e, al, be) * Nv(g, e);
        expect[m + g] = v;
      }
      hh = std::max(hh, max_diff(prolong_bracket(a, delta(al), delta(be), c), expect));
      Vec<Complex> ev(2 * m);
      for (std::size_t g = 0; g < m; ++g) ev[m + g] = HV.at({g, al, be});
      hv = std::max(hv, max_diff(prolong_bracket(a, delta(al), basis_fn(a, be, true), c), ev));
      vv = std::max(vv, max_abs(prolong_bracket(a, basis_fn(a, al, true), basis_fn(a, be, true), c)));
    }
  t.diagnostics["adapted_bracket_vs_R"] = hh;
  t.diagnostics["horizontal_vertical_vs_dN_du"] = hv;
  t.diagnostics["vertical_bracket"] = vv;
  t.diagnostics["R.antisymmetry"] = R.antisymmetry_defect();
  t.notes.push_back("[delta_a, V_b] is reported as (dN^g_a/du^b) V_g");
  return t;
}

ResidualReport prolong_differential_check(const AlgebroidSpec& a, const std::vector<WPoint>& points,
                                          const Tolerances& tol) {
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  const Layout L = a.layout();
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  auto kernel = [&](const WPoint& p) {
    require_point(a, p);
    const Vec<Complex> c = to_coords(p);
    const CMatrix r = rho_at(a, c, L);
    const auto dr = grid_dz(a.rho, c, L);
    const CVector C = C_at(a, c, L);
    // d_T z^k = rho^k_g Z^g;  d_T(rho^k_g) ^ Z^g + rho^k_a d_T Z^a, coefficient of Z^b ^ Z^g (b < g).
    double worst = 0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t be = 0; be < m; ++be)
        for (std::size_t g = be + 1; g < m; ++g) {
          Complex v;
          for (std::size_t h = 0; h < n; ++h) v += r(be, h) * dr[h](g, k) - r(g, h) * dr[h](be, k);
          for (std::size_t al = 0; al < m; ++al)
            v -= r(al, k) * C[a.cidx(static_cast<int>(al), static_cast<int>(be), static_cast<int>(g))];
          worst = std::max(worst, std::abs(v));
        }
    return std::vector<double>{worst};
  };
  record_batch(report, {"prolongation.differential_squared"}, {tol.ad}, points, kernel);
  report.note("d_T^2 u^a = d_T V^a = 0 holds identically");
  return report;
}

}  // namespace algebroid
