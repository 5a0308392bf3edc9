#include "algebroid/algebroid.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "algebroid/parallel.hpp"

namespace algebroid {

namespace {

void require_base_only(const Expression& e, int n, const std::string& where) {
  for (Var v : free_variables(e)) {
    if (v.cls == VarClass::ZB || v.cls == VarClass::UB) throw HolomorphyViolation(v.name() + " in " + where);
    if (v.cls != VarClass::Z || v.index >= n) throw UndeclaredVariable(v.name() + " in " + where);
  }
}

void require_grid(const ExprGrid& g, std::size_t rows, std::size_t cols, const std::string& what) {
  if (g.size() != rows) throw DimensionMismatch(what + " must have " + std::to_string(rows) + " rows");
  for (const auto& r : g)
    if (r.size() != cols) throw DimensionMismatch(what + " must have " + std::to_string(cols) + " columns");
}

Expression sum_of(const std::vector<Expression>& terms) {
  Expression s;
  for (const auto& t : terms) s = plus(s, t);
  return s;
}

template <class S>
Matrix<S> grid_partial(const ExprGrid& g, const Vec<S>& c, const Layout& layout, std::size_t slot) {
  Matrix<S> d(g.size(), g.empty() ? 0 : g.front().size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j)
      if (!g[i][j].is_zero_constant()) d(i, j) = partial(expr_fn(g[i][j], layout), c, slot);
  return d;
}

ExprGrid conjugate_grid(const ExprGrid& g) {
  ExprGrid out = g;
  for (auto& r : out)
    for (auto& e : r) e = conjugate(e);
  return out;
}

// Residuals of the six identities for the complexified algebroid at one
// point, mixed structure functions taken as zero.
std::vector<double> identity_residuals(const AlgebroidSpec& a, const ExprGrid& rho_bar,
                                       const std::vector<Expression>& C_bar, const Vec<Complex>& c) {
  const Layout L = a.layout();
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  const CMatrix r = rho_at(a, c, L);
  const CMatrix rb = grid_at(rho_bar, c, L);
  const CVector C = C_at(a, c, L);
  CVector Cb(C_bar.size());
  for (std::size_t i = 0; i < C_bar.size(); ++i) Cb[i] = evaluate<Complex>(C_bar[i], c, L);

  std::vector<CMatrix> dr_z, dr_zb, drb_z, drb_zb;
  for (std::size_t j = 0; j < n; ++j) {
    dr_z.push_back(grid_partial(a.rho, c, L, j));
    dr_zb.push_back(grid_partial(a.rho, c, L, n + j));
    drb_z.push_back(grid_partial(rho_bar, c, L, j));
    drb_zb.push_back(grid_partial(rho_bar, c, L, n + j));
  }

  std::vector<double> res(6, 0.0);
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t be = 0; be < m; ++be)
      for (std::size_t i = 0; i < n; ++i) {
        Complex t1, t2, t3, t4, t5, t6;
        for (std::size_t j = 0; j < n; ++j) {
          t1 += r(al, j) * dr_z[j](be, i) - r(be, j) * dr_z[j](al, i);
          t2 += rb(be, j) * dr_zb[j](al, i);
          t3 -= r(al, j) * drb_z[j](be, i);
          t4 += rb(al, j) * drb_zb[j](be, i) - rb(be, j) * drb_zb[j](al, i);
          t5 += r(be, j) * drb_z[j](al, i);
          t6 -= rb(al, j) * dr_zb[j](be, i);
        }
        for (std::size_t g = 0; g < m; ++g) {
          t1 -= r(g, i) * C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
          t4 -= rb(g, i) * Cb[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
        }
        const Complex t[] = {t1, t2, t3, t4, t5, t6};
        for (std::size_t q = 0; q < 6; ++q) res[q] = std::max(res[q], std::abs(t[q]));
      }
  return res;
}

double jacobi_residual(const AlgebroidSpec& a, const Vec<Complex>& c) {
  const Layout L = a.layout();
  const int m = a.m;
  const CMatrix r = rho_at(a, c, L);
  const CVector C = C_at(a, c, L);
  std::vector<CVector> dC;
  for (int k = 0; k < a.n; ++k) {
    CVector d(a.C.size());
    for (std::size_t i = 0; i < a.C.size(); ++i)
      if (!a.C[i].is_zero_constant()) d[i] = partial(expr_fn(a.C[i], L), c, static_cast<std::size_t>(k));
    dC.push_back(std::move(d));
  }
  // [[e_a,e_b],e_g]^e = C^d_ab C^e_dg - rho^k_g dC^e_ab/dz^k
  auto term = [&](int al, int be, int ga, int ep) {
    Complex t;
    for (int de = 0; de < m; ++de) t += C[a.cidx(de, al, be)] * C[a.cidx(ep, de, ga)];
    for (int k = 0; k < a.n; ++k) t -= r(ga, k) * dC[k][a.cidx(ep, al, be)];
    return t;
  };
  double res = 0;
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be)
      for (int ga = 0; ga < m; ++ga)
        for (int ep = 0; ep < m; ++ep) {
          const Complex j = term(al, be, ga, ep) + term(be, ga, al, ep) + term(ga, al, be, ep);
          res = std::max(res, std::abs(j));
        }
  return res;
}

const std::vector<std::string> kIdentityNames = {
    "structure.anchor_bracket",       "structure.mixed_anchor_zbar",      "structure.mixed_conj_anchor_z",
    "structure.conj_anchor_bracket",  "structure.mixed_conj_anchor_z_rev", "structure.mixed_anchor_zbar_rev",
};

}  // namespace

AlgebroidSpec AlgebroidSpec::make(std::string name, int n, int m, ExprGrid rho, const std::vector<StructureTerm>& C,
                                  std::vector<ChartData> charts, std::vector<SingularLocus> singular,
                                  std::optional<int> generic_rank) {
  if (n < 1 || m < 1) throw ConfigError("algebroid dimensions must satisfy n >= 1 and m >= 1");
  AlgebroidSpec a;
  a.name = std::move(name);
  a.n = n;
  a.m = m;
  require_grid(rho, static_cast<std::size_t>(m), static_cast<std::size_t>(n), "rho");
  for (const auto& row : rho)
    for (const auto& e : row) require_base_only(e, n, "rho");
  a.rho = std::move(rho);

  a.C.assign(static_cast<std::size_t>(m * m * m), Expression{});
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& t : C) {
    if (t.gamma < 0 || t.gamma >= m || t.alpha < 0 || t.alpha >= m || t.beta < 0 || t.beta >= m)
      throw ConfigError("structure function index out of range");
    require_base_only(t.expr, n, "C");
    if (t.alpha == t.beta) {
      if (!t.expr.is_zero_constant())
        throw ConfigError("structure function C with equal lower indices must vanish");
      continue;
    }
    const int lo = std::min(t.alpha, t.beta);
    const int hi = std::max(t.alpha, t.beta);
    if (!seen.insert({t.gamma, lo, hi}).second)
      throw ConfigError("structure function C^" + std::to_string(t.gamma + 1) + "_" + std::to_string(lo + 1) +
                        std::to_string(hi + 1) + " given twice");
    a.C[a.cidx(t.gamma, t.alpha, t.beta)] = t.expr;
    a.C[a.cidx(t.gamma, t.beta, t.alpha)] = -t.expr;
  }

  for (const auto& ch : charts) {
    if (ch.zmap.size() != static_cast<std::size_t>(n)) throw DimensionMismatch("chart zmap must have n entries");
    for (const auto& e : ch.zmap) require_base_only(e, n, "chart zmap");
    require_grid(ch.M, static_cast<std::size_t>(m), static_cast<std::size_t>(m), "chart M");
    for (const auto& r : ch.M)
      for (const auto& e : r) require_base_only(e, n, "chart M");
    if (ch.W) {
      require_grid(*ch.W, static_cast<std::size_t>(m), static_cast<std::size_t>(m), "chart W");
      for (const auto& r : *ch.W)
        for (const auto& e : r) require_base_only(e, n, "chart W");
    }
    if (ch.zinv) {
      if (ch.zinv->size() != static_cast<std::size_t>(n)) throw DimensionMismatch("chart zinv must have n entries");
      for (const auto& e : *ch.zinv) require_base_only(e, n, "chart zinv");
    }
    for (const auto& s : ch.singular)
      if (s.coord < 0 || s.coord >= n) throw ConfigError("singular locus coordinate out of range");
  }
  for (const auto& s : singular)
    if (s.coord < 0 || s.coord >= n) throw ConfigError("singular locus coordinate out of range");
  a.charts = std::move(charts);
  a.singular = std::move(singular);
  a.generic_rank = generic_rank.value_or(std::min(n, m));
  return a;
}

SectionExpr basis_section(int m, int alpha) {
  SectionExpr s;
  for (int i = 0; i < m; ++i) s.components.push_back(Expression::constant(i == alpha ? 1.0 : 0.0));
  return s;
}

namespace {

void require_section(const AlgebroidSpec& a, const SectionExpr& s) {
  if (s.components.size() != static_cast<std::size_t>(a.m))
    throw DimensionMismatch("section must have m = " + std::to_string(a.m) + " components");
  for (const auto& e : s.components) require_base_only(e, a.n, "section");
}

}  // namespace

CVector anchor_apply(const AlgebroidSpec& a, const SectionExpr& s, const WPoint& p) {
  require_section(a, s);
  const Layout L = p.layout();
  if (L.n != a.n) throw DimensionMismatch("point dimension differs from the algebroid base");
  const Vec<Complex> c = to_coords(p);
  const CMatrix r = rho_at(a, c, L);
  CVector v(static_cast<std::size_t>(a.n));
  for (int al = 0; al < a.m; ++al) {
    const Complex z = evaluate<Complex>(s.components[al], c, L);
    for (int k = 0; k < a.n; ++k) v[k] += z * r(al, k);
  }
  return v;
}

CVector bracket_sections(const AlgebroidSpec& a, const SectionExpr& s1, const SectionExpr& s2, const WPoint& p) {
  require_section(a, s1);
  require_section(a, s2);
  const Layout L = p.layout();
  if (L.n != a.n) throw DimensionMismatch("point dimension differs from the algebroid base");
  const Vec<Complex> c = to_coords(p);
  const CMatrix r = rho_at(a, c, L);
  const CVector C = C_at(a, c, L);
  const std::size_t m = static_cast<std::size_t>(a.m);
  CVector z1(m), z2(m);
  for (std::size_t i = 0; i < m; ++i) {
    z1[i] = evaluate<Complex>(s1.components[i], c, L);
    z2[i] = evaluate<Complex>(s2.components[i], c, L);
  }
  CVector out(m);
  for (int g = 0; g < a.m; ++g) {
    Complex v;
    for (int al = 0; al < a.m; ++al)
      for (int be = 0; be < a.m; ++be) v += z1[al] * z2[be] * C[a.cidx(g, al, be)];
    for (int k = 0; k < a.n; ++k) {
      const Complex d2 = partial(expr_fn(s2.components[g], L), c, static_cast<std::size_t>(k));
      const Complex d1 = partial(expr_fn(s1.components[g], L), c, static_cast<std::size_t>(k));
      for (int al = 0; al < a.m; ++al) v += r(al, k) * (z1[al] * d2 - z2[al] * d1);
    }
    out[g] = v;
  }
  return out;
}

WPoint chart_point(const ChartData& chart, const WPoint& p) {
  const Layout L = p.layout();
  const Vec<Complex> c = to_coords(p);
  WPoint q;
  for (const auto& e : chart.zmap) q.z.push_back(evaluate<Complex>(e, c, L));
  q.u = M_at(chart, c, L) * p.u;
  return q;
}

ChartChange change_chart(const AlgebroidSpec& a, const ChartData& chart, const WPoint& p) {
  const Layout L = p.layout();
  if (L.n != a.n || L.m != a.m) throw DimensionMismatch("point does not match the algebroid dimensions");
  const Vec<Complex> c = to_coords(p);
  ChartChange out;
  out.dzt_dz = zmap_jacobian(chart, c, L);
  const Complex det = determinant(out.dzt_dz);
  if (std::abs(det) <= 1e-10) throw SingularJacobian("chart Jacobian is singular at the point");
  out.M = M_at(chart, c, L);
  out.W = W_at(chart, c, L);
  const CMatrix r = rho_at(a, c, L);
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  out.rho_tilde = CMatrix(m, n);
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t k = 0; k < n; ++k) {
      Complex v;
      for (std::size_t be = 0; be < m; ++be)
        for (std::size_t h = 0; h < n; ++h) v += out.W(be, al) * r(be, h) * out.dzt_dz(k, h);
      out.rho_tilde(al, k) = v;
    }
  const auto dM = grid_dz(chart.M, c, L);
  out.dM_u = CMatrix(m, n);
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t h = 0; h < n; ++h) {
      Complex v;
      for (std::size_t be = 0; be < m; ++be) v += dM[h](al, be) * p.u[be];
      out.dM_u(al, h) = v;
    }
  out.jacobi = CMatrix(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.jacobi(i, j) = out.dzt_dz(i, j);
  for (std::size_t al = 0; al < m; ++al) {
    for (std::size_t h = 0; h < n; ++h) out.jacobi(n + al, h) = out.dM_u(al, h);
    for (std::size_t be = 0; be < m; ++be) out.jacobi(n + al, n + be) = out.M(al, be);
  }
  return out;
}

ExprGrid W_expressions(const ChartData& chart) {
  if (chart.W) return *chart.W;
  if (chart.M.size() == 1) return {{Expression::constant(1.0) / chart.M[0][0]}};
  throw UnsupportedInput("chart needs an explicit W to be expressed symbolically");
}

Expression in_chart(const Expression& e, const ChartData& chart) {
  if (!chart.zinv) throw UnsupportedInput("chart has no inverse coordinate map");
  std::map<Var, Expression> sub;
  for (std::size_t k = 0; k < chart.zinv->size(); ++k) {
    sub[Var::z(static_cast<int>(k))] = (*chart.zinv)[k];
    sub[Var::zb(static_cast<int>(k))] = conjugate((*chart.zinv)[k]);
  }
  return substitute(e, sub);
}

namespace {

ExprGrid grid_in_chart(const ExprGrid& g, const ChartData& chart) {
  ExprGrid out = g;
  for (auto& r : out)
    for (auto& e : r) e = in_chart(e, chart);
  return out;
}

}  // namespace

ChartData reverse_chart(const ChartData& chart) {
  if (!chart.zinv) throw UnsupportedInput("chart has no inverse coordinate map");
  ChartData r;
  r.zmap = *chart.zinv;
  r.zinv = chart.zmap;
  r.M = grid_in_chart(W_expressions(chart), chart);
  r.W = grid_in_chart(chart.M, chart);
  return r;
}

AlgebroidSpec transported(const AlgebroidSpec& a, const ChartData& chart) {
  const ExprGrid W = W_expressions(chart);
  const int n = a.n;
  const int m = a.m;
  ExprGrid rho(static_cast<std::size_t>(m), std::vector<Expression>(static_cast<std::size_t>(n)));
  for (int al = 0; al < m; ++al)
    for (int k = 0; k < n; ++k) {
      std::vector<Expression> terms;
      for (int be = 0; be < m; ++be)
        for (int h = 0; h < n; ++h)
          terms.push_back(times(times(W[be][al], a.rho[be][h]), differentiate(chart.zmap[k], Var::z(h))));
      rho[al][k] = in_chart(sum_of(terms), chart);
    }

  std::vector<StructureTerm> C;
  for (int g = 0; g < m; ++g)
    for (int al = 0; al < m; ++al)
      for (int be = al + 1; be < m; ++be) {
        std::vector<Expression> outer;
        for (int s = 0; s < m; ++s) {
          std::vector<Expression> inner;
          for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu)
              inner.push_back(times(times(W[mu][al], W[nu][be]), a.c(s, mu, nu)));
          for (int mu = 0; mu < m; ++mu)
            for (int k = 0; k < n; ++k) {
              inner.push_back(times(times(W[mu][al], a.rho[mu][k]), differentiate(W[s][be], Var::z(k))));
              inner.push_back(-times(times(W[mu][be], a.rho[mu][k]), differentiate(W[s][al], Var::z(k))));
            }
          outer.push_back(times(chart.M[g][s], sum_of(inner)));
        }
        C.push_back({g, al, be, in_chart(sum_of(outer), chart)});
      }

  std::vector<ChartData> charts;
  charts.push_back(reverse_chart(chart));
  AlgebroidSpec out = AlgebroidSpec::make(a.name + "~", n, m, std::move(rho), C, std::move(charts), {}, a.generic_rank);
  return out;
}

Expression transport_lagrangian(const Expression& L, const ChartData& chart, int m) {
  const ExprGrid W = grid_in_chart(W_expressions(chart), chart);
  std::map<Var, Expression> sub;
  for (std::size_t k = 0; k < chart.zinv->size(); ++k) {
    sub[Var::z(static_cast<int>(k))] = (*chart.zinv)[k];
    sub[Var::zb(static_cast<int>(k))] = conjugate((*chart.zinv)[k]);
  }
  for (int al = 0; al < m; ++al) {
    Expression u;
    for (int be = 0; be < m; ++be) u = plus(u, times(W[al][be], Expression::variable(Var::u(be))));
    sub[Var::u(al)] = u;
    sub[Var::ub(al)] = conjugate(u);
  }
  return substitute(L, sub);
}

int anchor_rank(const AlgebroidSpec& a, const WPoint& p, double tol) {
  return rank(rho_at(a, to_coords(p), p.layout()), tol);
}

ResidualReport validate_structure(const AlgebroidSpec& a, const std::vector<WPoint>& points, const Tolerances& tol) {
  ResidualReport report;
  report.points = points.size();
  report.tolerances = tol;

  const ExprGrid rho_bar = conjugate_grid(a.rho);
  std::vector<Expression> C_bar;
  for (const auto& e : a.C) C_bar.push_back(conjugate(e));

  std::vector<std::string> names = kIdentityNames;
  names.push_back("structure.jacobi");

  struct ChartCtx {
    const ChartData* chart;
    std::optional<AlgebroidSpec> tilde;
    ExprGrid tilde_rho_bar;
    std::vector<Expression> tilde_C_bar;
  };
  std::vector<ChartCtx> ctxs;
  for (std::size_t ci = 0; ci < a.charts.size(); ++ci) {
    const ChartData& ch = a.charts[ci];
    const std::string pre = "chart" + std::to_string(ci + 1) + ".";
    names.push_back(pre + "M_W_identity");
    ChartCtx ctx{&ch, std::nullopt, {}, {}};
    if (ch.zinv) {
      ctx.tilde = transported(a, ch);
      ctx.tilde_rho_bar = conjugate_grid(ctx.tilde->rho);
      for (const auto& e : ctx.tilde->C) ctx.tilde_C_bar.push_back(conjugate(e));
      names.push_back(pre + "zinv_roundtrip");
      names.push_back(pre + "anchor_transition");
      names.push_back(pre + "structure.anchor_bracket");
      names.push_back(pre + "structure.jacobi");
    } else {
      report.note("chart " + std::to_string(ci + 1) + " of " + a.name +
                  " has no inverse map; only the M W = I consistency is checked there");
    }
    ctxs.push_back(std::move(ctx));
  }

  auto kernel = [&](const WPoint& p) {
    const Vec<Complex> c = to_coords(p);
    std::vector<double> r = identity_residuals(a, rho_bar, C_bar, c);
    r.push_back(jacobi_residual(a, c));
    for (const auto& ctx : ctxs) {
      const ChartData& ch = *ctx.chart;
      const Layout L = p.layout();
      const CMatrix M = M_at(ch, c, L);
      const CMatrix W = W_at(ch, c, L);
      r.push_back(max_abs(M * W - CMatrix::identity(M.rows())));
      if (!ctx.tilde) continue;
      const WPoint q = chart_point(ch, p);
      const Vec<Complex> cq = to_coords(q);
      double rt = 0;
      for (std::size_t k = 0; k < ch.zinv->size(); ++k)
        rt = std::max(rt, std::abs(evaluate<Complex>((*ch.zinv)[k], cq, L) - p.z[k]));
      r.push_back(rt);
      const ChartChange cc = change_chart(a, ch, p);
      r.push_back(max_abs(rho_at(*ctx.tilde, cq, L) - cc.rho_tilde));
      r.push_back(identity_residuals(*ctx.tilde, ctx.tilde_rho_bar, ctx.tilde_C_bar, cq)[0]);
      r.push_back(jacobi_residual(*ctx.tilde, cq));
    }
    return r;
  };
  std::vector<double> tols(names.size(), tol.ad);
  record_batch(report, names, tols, points, kernel);

  std::size_t off_rank = 0;
  for (const auto& p : points)
    if (anchor_rank(a, p) != a.generic_rank) ++off_rank;
  if (off_rank > 0)
    report.note("rank of rho differs from the declared generic rank " + std::to_string(a.generic_rank) + " at " +
                std::to_string(off_rank) + " sample point(s) of " + a.name);
  report.note("mixed structure functions are taken as zero; the mixed identities are checked as holomorphy of rho");
  return report;
}

}  // namespace algebroid
