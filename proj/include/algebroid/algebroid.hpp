#pragma once

// Local data of a holomorphic Lie algebroid and its structural identities.

#include <optional>
#include <string>
#include <vector>

#include "algebroid/linalg.hpp"
#include "algebroid/report.hpp"
#include "algebroid/wirtinger.hpp"

namespace algebroid {

using ExprGrid = std::vector<std::vector<Expression>>;

/// The hyperplane z_{coord} = value (coord zero-based).
struct SingularLocus {
  int coord = 0;
  Complex value;
};

/// Transition from the reference chart A to a chart B:
///   zt = zmap(z),  ut^a = M^a_b(z) u^b.
struct ChartData {
  std::vector<Expression> zmap;
  ExprGrid M;                               // M[a][b]
  std::optional<ExprGrid> W;                // inverse of M, numeric inversion if absent
  std::optional<std::vector<Expression>> zinv;  // z(zt), needed to express data in chart B
  std::vector<SingularLocus> singular;      // loci in chart A where the transition breaks down
};

struct StructureTerm {
  int gamma = 0;
  int alpha = 0;
  int beta = 0;
  Expression expr;
};

struct AlgebroidSpec {
  std::string name;
  int n = 1;
  int m = 1;
  ExprGrid rho;                // rho[alpha][k], m x n
  std::vector<Expression> C;   // flat [gamma][alpha][beta], antisymmetric in (alpha, beta)
  std::vector<ChartData> charts;
  std::vector<SingularLocus> singular;
  int generic_rank = 0;

  /// Validates shapes and context, expands C by antisymmetry.
  static AlgebroidSpec make(std::string name, int n, int m, ExprGrid rho, const std::vector<StructureTerm>& C,
                            std::vector<ChartData> charts = {}, std::vector<SingularLocus> singular = {},
                            std::optional<int> generic_rank = std::nullopt);

  std::size_t cidx(int g, int a, int b) const {
    return (static_cast<std::size_t>(g) * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)) *
               static_cast<std::size_t>(m) +
           static_cast<std::size_t>(b);
  }
  const Expression& c(int g, int a, int b) const { return C[cidx(g, a, b)]; }
  Layout layout() const { return {n, m}; }
};

struct SectionExpr {
  std::vector<Expression> components;  // Z^alpha(z)
};

SectionExpr basis_section(int m, int alpha);

// ---------------------------------------------------------------- evaluators

template <class S>
Matrix<S> rho_at(const AlgebroidSpec& a, const Vec<S>& c, const Layout& layout) {
  Matrix<S> r(static_cast<std::size_t>(a.m), static_cast<std::size_t>(a.n));
  for (int al = 0; al < a.m; ++al)
    for (int k = 0; k < a.n; ++k) r(al, k) = evaluate<S>(a.rho[al][k], c, layout);
  return r;
}

template <class S>
Vec<S> C_at(const AlgebroidSpec& a, const Vec<S>& c, const Layout& layout) {
  Vec<S> out(a.C.size(), S(Complex{}));
  for (std::size_t i = 0; i < a.C.size(); ++i)
    if (!a.C[i].is_zero_constant()) out[i] = evaluate<S>(a.C[i], c, layout);
  return out;
}

/// eta^k = rho^k_a u^a, reading u from the coordinate vector.
template <class S>
Vec<S> eta_at(const AlgebroidSpec& a, const Vec<S>& c, const Layout& layout) {
  const Matrix<S> r = rho_at(a, c, layout);
  Vec<S> eta(static_cast<std::size_t>(a.n), S(Complex{}));
  for (int k = 0; k < a.n; ++k)
    for (int al = 0; al < a.m; ++al) eta[k] = eta[k] + r(al, k) * c[2 * layout.n + al];
  return eta;
}

template <class S>
Matrix<S> grid_at(const ExprGrid& g, const Vec<S>& c, const Layout& layout) {
  Matrix<S> out(g.size(), g.empty() ? 0 : g.front().size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) out(i, j) = evaluate<S>(g[i][j], c, layout);
  return out;
}

template <class S>
Matrix<S> M_at(const ChartData& ch, const Vec<S>& c, const Layout& layout) {
  return grid_at(ch.M, c, layout);
}

template <class S>
Matrix<S> W_at(const ChartData& ch, const Vec<S>& c, const Layout& layout) {
  if (ch.W) return grid_at(*ch.W, c, layout);
  return inverse<SingularMatrix>(M_at(ch, c, layout), 1e-12);
}

/// d/dz^h of a grid, one matrix per h.
template <class S>
std::vector<Matrix<S>> grid_dz(const ExprGrid& g, const Vec<S>& c, const Layout& layout) {
  std::vector<Matrix<S>> out;
  for (int h = 0; h < layout.n; ++h) {
    Matrix<S> d(g.size(), g.empty() ? 0 : g.front().size());
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g[i].size(); ++j)
        if (!g[i][j].is_zero_constant()) d(i, j) = partial(expr_fn(g[i][j], layout), c, static_cast<std::size_t>(h));
    out.push_back(std::move(d));
  }
  return out;
}

/// d(zt^k)/d(z^h) as J(k, h).
template <class S>
Matrix<S> zmap_jacobian(const ChartData& ch, const Vec<S>& c, const Layout& layout) {
  const std::size_t n = ch.zmap.size();
  Matrix<S> j(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t h = 0; h < n; ++h) j(k, h) = partial(expr_fn(ch.zmap[k], layout), c, h);
  return j;
}

// ---------------------------------------------------------------- operations

/// v^k = Z^a(z) rho^k_a(z)
CVector anchor_apply(const AlgebroidSpec& a, const SectionExpr& s, const WPoint& p);

/// [s1,s2]^g = Z1^a Z2^b C^g_ab + rho^k_a Z1^a dZ2^g/dz^k - rho^k_b Z2^b dZ1^g/dz^k
CVector bracket_sections(const AlgebroidSpec& a, const SectionExpr& s1, const SectionExpr& s2, const WPoint& p);

ResidualReport validate_structure(const AlgebroidSpec& a, const std::vector<WPoint>& points,
                                  const Tolerances& tol = {});

struct ChartChange {
  CMatrix rho_tilde;  // m x n, rho~[a][k]
  CMatrix dzt_dz;     // n x n, (k, h) = d zt^k / d z^h
  CMatrix M;
  CMatrix W;
  CMatrix dM_u;       // m x n, (a, h) = dM^a_b/dz^h u^b
  /// Jacobi matrix of (z, u) -> (zt, ut): [[dzt/dz, 0], [dM u, M]]
  CMatrix jacobi;
};

ChartChange change_chart(const AlgebroidSpec& a, const ChartData& chart, const WPoint& p);

/// (zt, ut) for a point of chart A.
WPoint chart_point(const ChartData& chart, const WPoint& p);

/// Symbolic inverse of M when W is absent and m = 1; otherwise W itself.
ExprGrid W_expressions(const ChartData& chart);

/// Substitute z -> zinv(zt) (and zb -> conj) in a chart-A expression.
Expression in_chart(const Expression& e, const ChartData& chart);

/// The reverse transition B -> A (requires zinv).
ChartData reverse_chart(const ChartData& chart);

/// The algebroid data expressed in chart B (requires zinv).
AlgebroidSpec transported(const AlgebroidSpec& a, const ChartData& chart);

/// L~(zt, ut) = L(zinv(zt), W ut) for a Lagrangian on E.
Expression transport_lagrangian(const Expression& L, const ChartData& chart, int m);

/// Numerical rank of rho at p.
int anchor_rank(const AlgebroidSpec& a, const WPoint& p, double tol = 1e-10);

}  // namespace algebroid
