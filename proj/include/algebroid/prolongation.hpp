#pragma once

// The prolongation T'E -> E: lifts of sections, the bracket of prolongation
// sections, Liouville section, tangent structure, nonlinear connections on
// T'E and their curvature.

#include <functional>
#include <vector>

#include "algebroid/spray.hpp"
#include "algebroid/tangent.hpp"

namespace algebroid {

/// W = Z^a Z_a + V^a V_a at a point of E.
struct ProlongVector {
  CVector Z;
  CVector V;
  WPoint at;
};

/// Coefficients of a section of T'E as a function of the coordinates; the
/// result stacks [Z (m), V (m)].
template <class S>
using ProlongFn = std::function<Vec<S>(const Vec<S>&)>;

/// rho_T(W) as a coordinate vector field on E (zb and ub slots zero).
template <class S, class F>
Vec<S> prolong_anchor(const AlgebroidSpec& a, F&& W, const Vec<S>& c) {
  const Layout L = a.layout();
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  const Vec<S> w = W(c);
  const Matrix<S> r = rho_at(a, c, L);
  Vec<S> v(c.size(), S(Complex{}));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t al = 0; al < m; ++al) v[k] = v[k] + r(al, k) * w[al];
  for (std::size_t al = 0; al < m; ++al) v[2 * n + al] = w[m + al];
  return v;
}

/// [W1, W2]_T:  Z^g = Z1^a Z2^b C^g_ab + rho_T(W1) Z2^g - rho_T(W2) Z1^g,
///              V^g = rho_T(W1) V2^g - rho_T(W2) V1^g.
template <class S, class F1, class F2>
Vec<S> prolong_bracket(const AlgebroidSpec& a, F1&& W1, F2&& W2, const Vec<S>& c) {
  const Layout L = a.layout();
  const std::size_t m = static_cast<std::size_t>(a.m);
  const Vec<S> w1 = W1(c);
  const Vec<S> w2 = W2(c);
  const Vec<S> d2 = directional(W2, c, prolong_anchor(a, W1, c));
  const Vec<S> d1 = directional(W1, c, prolong_anchor(a, W2, c));
  const Vec<S> C = C_at(a, c, L);
  Vec<S> out(2 * m, S(Complex{}));
  for (std::size_t i = 0; i < 2 * m; ++i) out[i] = d2[i] - d1[i];
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t be = 0; be < m; ++be)
        out[g] = out[g] + w1[al] * w2[be] * C[a.cidx(static_cast<int>(g), static_cast<int>(al), static_cast<int>(be))];
  return out;
}

/// Z = 0, V^a = s^a(z)
ProlongVector vertical_lift(const SectionExpr& s, const WPoint& p);

/// Z^a = s^a(z), V^a = (rho^k_b ds^a/dz^k - s^g C^a_gb) u^b
ProlongVector complete_lift(const AlgebroidSpec& a, const SectionExpr& s, const WPoint& p);

/// [s1^V, s2^V] = 0, [s1^V, s2^C] = [s1, s2]^V, [s1^C, s2^C] = [s1, s2]^C.
ResidualReport lift_bracket_residuals(const AlgebroidSpec& a, const SectionExpr& s1, const SectionExpr& s2,
                                      const std::vector<WPoint>& points, const Tolerances& tol = {});

/// Brackets of the basis {Z_a, V_a} and rho_T as a bracket morphism on it.
ResidualReport basis_bracket_residuals(const AlgebroidSpec& a, const std::vector<WPoint>& points,
                                       const Tolerances& tol = {});

/// T(Z, V) = (0, Z)
ProlongVector tangent_structure_apply(const ProlongVector& w);

/// u^a V_a
ProlongVector liouville_section(const WPoint& p);

/// u^a Z_a - 2 G^a V_a
ProlongVector semispray_section(const SprayField& S, const WPoint& p);

/// max over the basis X of |[L, T X] - T [L, X] + T X|
double liouville_tangent_bracket_residual(const AlgebroidSpec& a, const WPoint& p);

/// N^b_a = rho^k_a N^b_k, as a connection of kind OnProlongation.
ConnectionField nlc_from_base(const AlgebroidSpec& a, const ConnectionField& N);

/// rho_T(delta_a) = rho^k_a delta/delta z^k checked on the coordinate functions.
ResidualReport base_frame_residual(const AlgebroidSpec& a, const ConnectionField& N, const ConnectionField& Np,
                                   const std::vector<WPoint>& points, const Tolerances& tol = {});

/// N^b_a = dG^b/du^a + P^b_a, P^b_a = 1/4 W^b_g (rho^k_a dM^g_d/dz^k u^d - dM^g_a/dz^k rho^k_d u^d).
/// P is dropped when chart is null.
ConnectionField nlc_from_spray(const SprayField& S, const ChartData* chart = nullptr);
CMatrix nlc_from_spray_at(const SprayField& S, const ChartData* chart, const WPoint& p);

/// Residual of  M^b_a Nt^g_b - M^g_b N^b_a + rho^k_a dM^g_b/dz^k u^b  with NA in
/// chart A and NB the same connection in chart B.
ResidualReport prolong_change_residual(const AlgebroidSpec& a, const ConnectionField& NA, const ConnectionField& NB,
                                       const ChartData& chart, const std::vector<WPoint>& points,
                                       const Tolerances& tol = {});

/// Blocks "R"[g][a][b] and "dN_du"[g][a][b] = dN^g_a/du^b, plus the adapted
/// frame brackets recomputed through prolong_bracket as diagnostics.
TensorTable prolong_curvature(const AlgebroidSpec& a, const ConnectionField& Np, const WPoint& p);

/// d_T^2 z^k = 0 expanded in Z^b ^ Z^g; d_T^2 u^a = 0 holds identically.
ResidualReport prolong_differential_check(const AlgebroidSpec& a, const std::vector<WPoint>& points,
                                          const Tolerances& tol = {});

}  // namespace algebroid
