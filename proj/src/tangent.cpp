#include "algebroid/tangent.hpp"

#include <algorithm>
#include <cmath>

#include "algebroid/parallel.hpp"

namespace algebroid {

namespace {

std::pair<std::size_t, std::size_t> shape_of(ConnectionKind kind, const Layout& layout) {
  const auto n = static_cast<std::size_t>(layout.n);
  const auto m = static_cast<std::size_t>(layout.m);
  switch (kind) {
    case ConnectionKind::OnTE: return {m, n};
    case ConnectionKind::OnProlongation: return {m, m};
    case ConnectionKind::OnTM: return {n, n};
  }
  return {0, 0};
}

Vec<Complex> dfield(const Field& f, const Vec<Complex>& c, std::size_t slot) { return partial(f, c, slot); }

}  // namespace

ConnectionField ConnectionField::from_expressions(ConnectionKind kind, const ExprGrid& grid, const Layout& layout) {
  if (kind == ConnectionKind::OnTM && layout.n != layout.m)
    throw DimensionMismatch("a connection on T'M needs the layout {n, n}");
  const auto [rows, cols] = shape_of(kind, layout);
  if (grid.size() != rows) throw DimensionMismatch("connection grid has the wrong number of rows");
  std::vector<Expression> flat;
  for (const auto& r : grid) {
    if (r.size() != cols) throw DimensionMismatch("connection grid has the wrong number of columns");
    for (const auto& e : r) {
      for (Var v : free_variables(e))
        if (!layout.contains(v)) throw UndeclaredVariable(v.name());
      flat.push_back(e);
    }
  }
  ConnectionField N;
  N.kind = kind;
  N.rows = rows;
  N.cols = cols;
  N.field = Field::from_expressions(flat, layout);
  return N;
}

ConnectionField ConnectionField::zero(ConnectionKind kind, int n, int m) {
  const Layout layout = kind == ConnectionKind::OnTM ? Layout{n, n} : Layout{n, m};
  const auto [rows, cols] = shape_of(kind, layout);
  return from_expressions(kind, ExprGrid(rows, std::vector<Expression>(cols)), layout);
}

LinearConnectionCoeffs LinearConnectionCoeffs::from_entries(int n, int m, const std::vector<Entry>& L_ijk,
                                                            const std::vector<Entry>& L_ijg,
                                                            const std::vector<Entry>& L_abk,
                                                            const std::vector<Entry>& C_abg) {
  const Layout layout{n, m};
  auto build = [&](const std::vector<Entry>& entries, int d0, int d1, int d2, const char* what) {
    std::vector<Expression> flat(static_cast<std::size_t>(d0 * d1 * d2));
    for (const auto& e : entries) {
      if (e.i < 0 || e.i >= d0 || e.j < 0 || e.j >= d1 || e.k < 0 || e.k >= d2)
        throw ConfigError(std::string("index out of range in ") + what);
      for (Var v : free_variables(e.expr))
        if (!layout.contains(v)) throw UndeclaredVariable(v.name());
      flat[static_cast<std::size_t>((e.i * d1 + e.j) * d2 + e.k)] = e.expr;
    }
    return Field::from_expressions(flat, layout);
  };
  LinearConnectionCoeffs D;
  D.n = n;
  D.m = m;
  D.L_ijk = build(L_ijk, n, n, n, "L_ijk");
  D.L_ijg = build(L_ijg, n, n, m, "L_ijg");
  D.L_abk = build(L_abk, m, m, n, "L_abk");
  D.C_abg = build(C_abg, m, m, m, "C_abg");
  return D;
}

CVector induced_eta(const AlgebroidSpec& a, const WPoint& p) {
  if (p.layout() != a.layout()) throw DimensionMismatch("point does not match the algebroid dimensions");
  return eta_at(a, to_coords(p), p.layout());
}

TangentTM tangent_pushforward(const AlgebroidSpec& a, const WPoint& p, const CVector& Z, const CVector& V) {
  if (p.layout() != a.layout()) throw DimensionMismatch("point does not match the algebroid dimensions");
  if (Z.size() != static_cast<std::size_t>(a.n) || V.size() != static_cast<std::size_t>(a.m))
    throw DimensionMismatch("tangent vector components do not match (n, m)");
  const Layout L = p.layout();
  const Vec<Complex> c = to_coords(p);
  const CMatrix r = rho_at(a, c, L);
  const auto dr = grid_dz(a.rho, c, L);
  TangentTM out{Z, CVector(static_cast<std::size_t>(a.n))};
  for (int h = 0; h < a.n; ++h) {
    Complex v;
    for (int k = 0; k < a.n; ++k)
      for (int al = 0; al < a.m; ++al) v += Z[k] * p.u[al] * dr[k](al, h);
    for (int al = 0; al < a.m; ++al) v += V[al] * r(al, h);
    out.eta[h] = v;
  }
  return out;
}

CovectorE dual_pullback(const AlgebroidSpec& a, const WPoint& p, const CVector& a_dz, const CVector& b_deta) {
  if (p.layout() != a.layout()) throw DimensionMismatch("point does not match the algebroid dimensions");
  const Layout L = p.layout();
  const Vec<Complex> c = to_coords(p);
  const CMatrix r = rho_at(a, c, L);
  const auto dr = grid_dz(a.rho, c, L);
  CovectorE out{a_dz, CVector(static_cast<std::size_t>(a.m))};
  for (int h = 0; h < a.n; ++h)
    for (int k = 0; k < a.n; ++k)
      for (int al = 0; al < a.m; ++al) out.dz[h] += b_deta[k] * p.u[al] * dr[h](al, k);
  for (int al = 0; al < a.m; ++al)
    for (int k = 0; k < a.n; ++k) out.du[al] += b_deta[k] * r(al, k);
  return out;
}

CVector adapted_frame_apply(const ConnectionField& N, const Expression& f, const WPoint& p) {
  if (N.kind != ConnectionKind::OnTE) throw UnsupportedInput("adapted frame needs a connection on T'E");
  const Layout L = N.field.layout();
  if (p.layout() != L) throw DimensionMismatch("point does not match the connection layout");
  const Vec<Complex> c = to_coords(p);
  const CMatrix Nv = N.at(c);
  const auto fn = expr_fn(f, L);
  CVector out(static_cast<std::size_t>(L.n));
  CVector du(static_cast<std::size_t>(L.m));
  for (int al = 0; al < L.m; ++al) du[al] = partial(fn, c, static_cast<std::size_t>(2 * L.n + al));
  for (int k = 0; k < L.n; ++k) {
    Complex v = partial(fn, c, static_cast<std::size_t>(k));
    for (int al = 0; al < L.m; ++al) v -= Nv(al, k) * du[al];
    out[k] = v;
  }
  return out;
}

ResidualReport nlc_change_residual(const ConnectionField& NA, const ConnectionField& NB, const ChartData& chart,
                                   const std::vector<WPoint>& points, const Tolerances& tol) {
  if (NA.kind != ConnectionKind::OnTE || NB.kind != ConnectionKind::OnTE)
    throw UnsupportedInput("transformation law applies to connections on T'E");
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;
  auto kernel = [&](const WPoint& p) {
    const Layout L = p.layout();
    const Vec<Complex> c = to_coords(p);
    const CMatrix J = zmap_jacobian(chart, c, L);
    if (std::abs(determinant(J)) <= 1e-10) throw SingularJacobian("chart Jacobian is singular at a sample point");
    const CMatrix M = M_at(chart, c, L);
    const auto dM = grid_dz(chart.M, c, L);
    const CMatrix Na = NA.at(c);
    const CMatrix Nb = NB.at(to_coords(chart_point(chart, p)));
    double worst = 0;
    for (int al = 0; al < L.m; ++al)
      for (int h = 0; h < L.n; ++h) {
        Complex r;
        for (int k = 0; k < L.n; ++k) r += J(k, h) * Nb(al, k);
        for (int be = 0; be < L.m; ++be) r += -M(al, be) * Na(be, h) + dM[h](al, be) * p.u[be];
        worst = std::max(worst, std::abs(r));
      }
    return std::vector<double>{worst};
  };
  record_batch(report, {"connection.transformation_law"}, {tol.ad}, points, kernel);
  return report;
}

TensorTable adapted_bracket_coeffs(const ConnectionField& N, const WPoint& p) {
  if (N.kind != ConnectionKind::OnTE) throw UnsupportedInput("adapted frame needs a connection on T'E");
  const Layout L = N.field.layout();
  if (p.layout() != L) throw DimensionMismatch("point does not match the connection layout");
  const std::size_t n = static_cast<std::size_t>(L.n);
  const std::size_t m = static_cast<std::size_t>(L.m);
  const std::size_t uoff = 2 * n;
  const Vec<Complex> c = to_coords(p);
  const CMatrix Nv = N.at(c);
  std::vector<CMatrix> dNz, dNu;
  auto reshape = [&](const Vec<Complex>& flat) {
    CMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = flat[i * n + j];
    return out;
  };
  for (std::size_t k = 0; k < n; ++k) dNz.push_back(reshape(dfield(N.field, c, k)));
  for (std::size_t b = 0; b < m; ++b) dNu.push_back(reshape(dfield(N.field, c, uoff + b)));

  TensorTable t;
  TensorBlock& K = t.add("K", TensorBlock({"a", "k", "h"}, {m, n, n}, std::make_pair(1, 2)));
  TensorBlock& Ka = t.add("K_adapted", TensorBlock({"a", "k", "h"}, {m, n, n}, std::make_pair(1, 2)));
  TensorBlock& HV = t.add("dN_du", TensorBlock({"a", "k", "b"}, {m, n, m}));
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t h = 0; h < n; ++h) {
        K.at({al, k, h}) = dNz[h](al, k) - dNz[k](al, h);
        Complex dh = dNz[h](al, k);
        Complex dk = dNz[k](al, h);
        for (std::size_t be = 0; be < m; ++be) {
          dh -= Nv(be, h) * dNu[be](al, k);
          dk -= Nv(be, k) * dNu[be](al, h);
        }
        Ka.at({al, k, h}) = dh - dk;
      }
      for (std::size_t be = 0; be < m; ++be) HV.at({al, k, be}) = dNu[be](al, k);
    }

  // Adapted frame as coordinate vector fields.
  auto delta = [&](std::size_t k) {
    return [&, k](const auto& cc) {
      using S = typename std::decay_t<decltype(cc)>::value_type;
      const Matrix<S> Nc = N.at(cc);
      Vec<S> v(cc.size(), S(Complex{}));
      v[k] = S(Complex{1.0, 0.0});
      for (std::size_t al = 0; al < m; ++al) v[uoff + al] = -Nc(al, k);
      return v;
    };
  };
  auto vert = [&](std::size_t b) {
    return [&, b](const auto& cc) {
      using S = typename std::decay_t<decltype(cc)>::value_type;
      Vec<S> v(cc.size(), S(Complex{}));
      v[uoff + b] = S(Complex{1.0, 0.0});
      return v;
    };
  };
  // Test functions z^j, u^a, z^j u^a.
  std::vector<std::pair<long, long>> tests;
  for (std::size_t j = 0; j < n; ++j) tests.emplace_back(static_cast<long>(j), -1);
  for (std::size_t al = 0; al < m; ++al) tests.emplace_back(-1, static_cast<long>(uoff + al));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t al = 0; al < m; ++al) tests.emplace_back(static_cast<long>(j), static_cast<long>(uoff + al));

  auto apply_bracket = [&](auto X, auto Y, const std::pair<long, long>& tf) {
    auto f = [tf](const auto& cc) {
      using S = typename std::decay_t<decltype(cc)>::value_type;
      S v(Complex{1.0, 0.0});
      if (tf.first >= 0) v = v * cc[static_cast<std::size_t>(tf.first)];
      if (tf.second >= 0) v = v * cc[static_cast<std::size_t>(tf.second)];
      return v;
    };
    auto Xf = [&](const auto& cc) { return directional(f, cc, X(cc)); };
    auto Yf = [&](const auto& cc) { return directional(f, cc, Y(cc)); };
    return directional(Yf, c, X(c)) - directional(Xf, c, Y(c));
  };
  auto du_f = [&](const std::pair<long, long>& tf, std::size_t al) -> Complex {
    // d/du^al of the test function at c
    const long slot = static_cast<long>(uoff + al);
    if (tf.second == slot) return tf.first >= 0 ? c[static_cast<std::size_t>(tf.first)] : Complex{1.0, 0.0};
    return Complex{};
  };

  double hh_adapted = 0, hh_K = 0, hv = 0, hv_corr = 0, vv = 0;
  for (const auto& tf : tests) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t h = 0; h < n; ++h) {
        const Complex br = apply_bracket(delta(k), delta(h), tf);
        Complex ea, ek;
        for (std::size_t al = 0; al < m; ++al) {
          ea += Ka.at({al, k, h}) * du_f(tf, al);
          ek += K.at({al, k, h}) * du_f(tf, al);
        }
        hh_adapted = std::max(hh_adapted, std::abs(br - ea));
        hh_K = std::max(hh_K, std::abs(br - ek));
      }
      for (std::size_t be = 0; be < m; ++be) {
        const Complex br = apply_bracket(delta(k), vert(be), tf);
        Complex e;
        for (std::size_t al = 0; al < m; ++al) e += HV.at({al, k, be}) * du_f(tf, al);
        hv = std::max(hv, std::abs(br));
        hv_corr = std::max(hv_corr, std::abs(br - e));
      }
    }
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t be = 0; be < m; ++be) vv = std::max(vv, std::abs(apply_bracket(vert(al), vert(be), tf)));
  }
  t.diagnostics["horizontal_bracket_vs_K_adapted"] = hh_adapted;
  t.diagnostics["horizontal_bracket_vs_K"] = hh_K;
  t.diagnostics["horizontal_vertical_bracket"] = hv;
  t.diagnostics["horizontal_vertical_vs_dN_du"] = hv_corr;
  t.diagnostics["vertical_bracket"] = vv;
  t.diagnostics["K_antisymmetry"] = K.antisymmetry_defect();
  if (HV.max_abs() > 0)
    t.notes.push_back("connection depends on u: [delta_k, d/du^b] = (dN^a_k/du^b) d/du^a is not zero and "
                      "[delta_k, delta_h] carries the K_adapted coefficients");
  return t;
}

namespace {

struct DValues {
  std::size_t n, m;
  Vec<Complex> Lijk, Lijg, Labk, Cabg;
  std::vector<Vec<Complex>> dLijk, dLijg, dLabk, dCabg;  // per z^k
  std::vector<CMatrix> dN;                               // per z^k, N^a_h as (a, h)

  Complex lijk(std::size_t i, std::size_t j, std::size_t k) const { return Lijk[(i * n + j) * n + k]; }
  Complex lijg(std::size_t i, std::size_t j, std::size_t g) const { return Lijg[(i * n + j) * m + g]; }
  Complex labk(std::size_t a, std::size_t b, std::size_t k) const { return Labk[(a * m + b) * n + k]; }
  Complex cabg(std::size_t a, std::size_t b, std::size_t g) const { return Cabg[(a * m + b) * m + g]; }
  Complex d_lijk(std::size_t d, std::size_t i, std::size_t j, std::size_t k) const {
    return dLijk[d][(i * n + j) * n + k];
  }
  Complex d_lijg(std::size_t d, std::size_t i, std::size_t j, std::size_t g) const {
    return dLijg[d][(i * n + j) * m + g];
  }
  Complex d_labk(std::size_t d, std::size_t a, std::size_t b, std::size_t k) const {
    return dLabk[d][(a * m + b) * n + k];
  }
  Complex d_cabg(std::size_t d, std::size_t a, std::size_t b, std::size_t g) const {
    return dCabg[d][(a * m + b) * m + g];
  }
};

DValues gather(const LinearConnectionCoeffs& D, const ConnectionField& N, const WPoint& p) {
  if (N.kind != ConnectionKind::OnTE) throw UnsupportedInput("torsion and curvature need a connection on T'E");
  const Layout L{D.n, D.m};
  if (p.layout() != L || N.field.layout() != L) throw DimensionMismatch("point, D and N layouts differ");
  const Vec<Complex> c = to_coords(p);
  DValues v{static_cast<std::size_t>(D.n), static_cast<std::size_t>(D.m), D.L_ijk(c), D.L_ijg(c), D.L_abk(c),
            D.C_abg(c), {}, {}, {}, {}, {}};
  for (std::size_t k = 0; k < v.n; ++k) {
    v.dLijk.push_back(dfield(D.L_ijk, c, k));
    v.dLijg.push_back(dfield(D.L_ijg, c, k));
    v.dLabk.push_back(dfield(D.L_abk, c, k));
    v.dCabg.push_back(dfield(D.C_abg, c, k));
    const Vec<Complex> flat = dfield(N.field, c, k);
    CMatrix d(v.m, v.n);
    for (std::size_t a = 0; a < v.m; ++a)
      for (std::size_t h = 0; h < v.n; ++h) d(a, h) = flat[a * v.n + h];
    v.dN.push_back(std::move(d));
  }
  return v;
}

}  // namespace

TensorTable torsion_table(const LinearConnectionCoeffs& D, const ConnectionField& N, const WPoint& p) {
  const DValues v = gather(D, N, p);
  const std::size_t n = v.n;
  const std::size_t m = v.m;
  TensorTable t;
  TensorBlock& Tihk = t.add("T^i_hk", TensorBlock({"i", "h", "k"}, {n, n, n}, std::make_pair(1, 2)));
  TensorBlock& Tahk = t.add("T^a_hk", TensorBlock({"a", "h", "k"}, {m, n, n}, std::make_pair(1, 2)));
  TensorBlock& Tiha = t.add("T^i_ha", TensorBlock({"i", "h", "a"}, {n, n, m}));
  TensorBlock& Tbha = t.add("T^b_ha", TensorBlock({"b", "h", "a"}, {m, n, m}));
  TensorBlock& Tcab = t.add("T^c_ab", TensorBlock({"c", "a", "b"}, {m, m, m}, std::make_pair(1, 2)));
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) Tihk.at({i, h, k}) = v.lijk(i, k, h) - v.lijk(i, h, k);
      for (std::size_t a = 0; a < m; ++a) Tahk.at({a, h, k}) = v.dN[k](a, h) - v.dN[h](a, k);
    }
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t i = 0; i < n; ++i) Tiha.at({i, h, a}) = -v.lijg(i, h, a);
      for (std::size_t b = 0; b < m; ++b) Tbha.at({b, h, a}) = v.labk(b, a, h);
    }
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) Tcab.at({g, a, b}) = v.cabg(g, a, b) - v.cabg(g, b, a);
  return t;
}

TensorTable curvature_table(const LinearConnectionCoeffs& D, const ConnectionField& N, const WPoint& p) {
  const DValues v = gather(D, N, p);
  const std::size_t n = v.n;
  const std::size_t m = v.m;
  TensorTable t;
  auto& R1 = t.add("R^i_jhk", TensorBlock({"i", "j", "h", "k"}, {n, n, n, n}, std::make_pair(2, 3)));
  auto& R2 = t.add("R^a_bhk", TensorBlock({"a", "b", "h", "k"}, {m, m, n, n}));
  auto& R2v = t.add("R^a_bhk.variant", TensorBlock({"a", "b", "h", "k"}, {m, m, n, n}, std::make_pair(2, 3)));
  auto& R3 = t.add("R^a_gkb", TensorBlock({"a", "g", "k", "b"}, {m, m, n, m}));
  auto& R4 = t.add("R^i_hkb", TensorBlock({"i", "h", "k", "b"}, {n, n, n, m}));
  auto& R5 = t.add("R^i_kab", TensorBlock({"i", "k", "a", "b"}, {n, n, m, m}));
  auto& R5v = t.add("R^i_kab.variant", TensorBlock({"i", "k", "a", "b"}, {n, n, m, m}, std::make_pair(2, 3)));
  auto& R6 = t.add("R^s_gab", TensorBlock({"s", "g", "a", "b"}, {m, m, m, m}, std::make_pair(2, 3)));

  // dN^a_k/dz^h - dN^a_h/dz^k
  auto bracketN = [&](std::size_t a, std::size_t h, std::size_t k) { return v.dN[h](a, k) - v.dN[k](a, h); };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t h = 0; h < n; ++h)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex A = v.d_lijk(k, i, j, h) - v.d_lijk(h, i, j, k);
          Complex P, Q, E;
          for (std::size_t l = 0; l < n; ++l) {
            P += v.lijk(l, j, h) * v.lijk(i, l, k);
            Q += v.lijk(l, j, k) * v.lijk(i, l, h);
          }
          for (std::size_t a = 0; a < m; ++a) E += bracketN(a, h, k) * v.lijg(i, j, a);
          R1.at({i, j, h, k}) = (A + (P - Q)) - E;
        }

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t h = 0; h < n; ++h)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex A = v.d_labk(h, a, b, k) - v.d_labk(k, a, b, h);
          Complex P, Q, E;
          for (std::size_t g = 0; g < m; ++g) {
            P += v.labk(g, b, k) * v.labk(a, g, h);
            Q += v.labk(g, b, h) * v.labk(a, g, k);
            E += bracketN(g, h, k) * v.cabg(a, g, b);
          }
          R2.at({a, b, h, k}) = (A + (P + Q)) - E;
          R2v.at({a, b, h, k}) = (A + (P - Q)) - E;
        }

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < m; ++b) {
          Complex s = v.d_cabg(k, a, g, b);
          for (std::size_t sg = 0; sg < m; ++sg)
            s += v.cabg(sg, g, b) * v.labk(a, sg, k) - v.labk(sg, g, k) * v.cabg(a, sg, b);
          R3.at({a, g, k, b}) = s;
        }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < m; ++b) {
          Complex s = v.d_lijg(k, i, h, b);
          for (std::size_t j = 0; j < n; ++j) s += v.lijg(j, h, b) * v.lijk(i, j, k) - v.lijk(j, h, k) * v.lijg(i, j, b);
          R4.at({i, h, k, b}) = s;
        }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          Complex verbatim_first, variant_first, second;
          for (std::size_t j = 0; j < n; ++j) {
            verbatim_first += v.lijg(j, k, b) * v.lijg(i, j, b);
            variant_first += v.lijg(j, k, b) * v.lijg(i, j, a);
            second += v.lijg(j, k, a) * v.lijg(i, j, b);
          }
          R5.at({i, k, a, b}) = verbatim_first - second;
          R5v.at({i, k, a, b}) = variant_first - second;
        }
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t g = 0; g < m; ++g)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          Complex x, y;
          for (std::size_t tau = 0; tau < m; ++tau) {
            x += v.cabg(tau, g, b) * v.cabg(s, tau, a);
            y += v.cabg(tau, g, a) * v.cabg(s, tau, b);
          }
          R6.at({s, g, a, b}) = x - y;
        }

  for (const auto& [name, b] : t.blocks)
    if (b.antisymmetric) t.diagnostics[name + ".antisymmetry"] = b.antisymmetry_defect();
  t.notes.push_back("R^a_bhk and R^i_kab are given as written and as the antisymmetric variant");
  return t;
}

}  // namespace algebroid
