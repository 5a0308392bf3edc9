#pragma once

// Lagrange structures on T'M and on E, the Chern-Lagrange connection, and
// the transport of connections between them in the three rank cases
//   I   m = n = rank rho
//   II  rank rho = m < n
//   III rank rho = n < m
// Points of E are (z, u); the matching point of T'M is (z, eta = rho u).

#include <map>
#include <string>
#include <vector>

#include "algebroid/tangent.hpp"

namespace algebroid {

struct MetricInfo {
  CMatrix g;     // g(i, j) = d2L / d eta^i d etab^j
  CMatrix ginv;  // inverse of g, ginv(j, i) = g^{jb i}
  double hermitian_defect = 0;
  double condition = 0;
  int rank = 0;
};

/// Fiber metric of L at p (u read as eta on T'M).  SingularMetric when |det| < 1e-12.
MetricInfo metric_from_lagrangian(const Expression& L, const WPoint& p);

/// N^i_k = g^{jb i} d2L/dz^k detab^j as N(i, k); p = (z, eta).
CMatrix chern_lagrange_on_TM(const Expression& L, const WPoint& p);

/// N^a_k = g^{bb a} d2L/dz^k dub^b as N(a, k).
CMatrix chern_lagrange_on_E(const Expression& L, const WPoint& p);

/// Chern-Lagrange connection as a field; kind OnTE (layout {n, m}) or OnTM (layout {n, n}).
ConnectionField chern_lagrange_connection(const Expression& L, ConnectionKind kind, int n, int m);

/// L*(z, u) = L(z, rho u) for L on T'M.
Expression pullback_lagrangian(const AlgebroidSpec& a, const Expression& L_TM);

/// eta = rho u at a point of E.
WPoint tm_point(const AlgebroidSpec& a, const WPoint& p);

// ---------------------------------------------------------------- case I

struct Case1Pullback {
  Expression L_star;
  Complex L_value;
  CMatrix g;             // d2L*/du^a dub^b
  CMatrix g_contracted;  // rho^i_a conj(rho^j_b) g_ij
  CMatrix N;             // Chern-Lagrange of (E, L*), N(a, k)
  CMatrix N_transported; // Chern-Lagrange of (T'M, L) moved to E
};

Case1Pullback case1_pullback(const AlgebroidSpec& a, const Expression& L_TM, const WPoint& p);

enum class Direction { EToTM, TMToE };

/// E -> TM:  N*^h_k = rho^h_a N^a_k - drho^h_a/dz^k u^a           (N given at (z, u))
/// TM -> E:  N*^a_k = rho^a_h N^h_k - drho^a_h/dz^k eta^h           (N given at (z, eta))
CMatrix transport_E_to_TM(const AlgebroidSpec& a, const CMatrix& N_E, const WPoint& p);
CMatrix transport_TM_to_E(const AlgebroidSpec& a, const CMatrix& N_TM, const WPoint& p);
CMatrix case1_connection_transport(const AlgebroidSpec& a, const ConnectionField& N, Direction dir, const WPoint& p);

ResidualReport case1_report(const AlgebroidSpec& a, const Expression& L_TM, const std::vector<WPoint>& points,
                            const Tolerances& tol = {});

// ---------------------------------------------------------------- completions

/// Orthonormal completion of the image of rho at one point.
///   case II:  frame (n x n) has columns [rho^i_a | Y^i_a]; frame_inverse rows [rho^a_i ; Y^a_i]
///   case III: frame (m x m) has rows [rho^k_a ; Y^a_a]; frame_inverse columns [rho^a_k | Y^a_a]
struct FrameCompletion {
  CMatrix Y;         // II: Y(i, a)      III: Y(a, alpha)
  CMatrix Y_dual;    // II: Y(a, i)      III: Y(alpha, a)
  CMatrix rho_inv;   // rho^a_i as (a, i): left inverse in II, right inverse in III
  CMatrix frame;
  CMatrix frame_inverse;
  std::map<std::string, double> invariants;
};

/// seed: order in which standard basis vectors are tried; empty means 0, 1, 2, ...
FrameCompletion case2_completion(const AlgebroidSpec& a, const Expression& L_TM, const WPoint& p,
                                 const std::vector<int>& seed = {});
FrameCompletion case3_completion(const AlgebroidSpec& a, const Expression& L_E, const WPoint& p,
                                 const std::vector<int>& seed = {});

struct Case2Result {
  CMatrix N;  // N(a, h)
  FrameCompletion completion;
  std::map<std::string, double> relations;
  double relation_ii_printed = 0;  // residual of the relation with the projector on the lower index
};

Case2Result case2_induced_connection(const AlgebroidSpec& a, const Expression& L_TM, const ConnectionField& N_TM,
                                     const WPoint& p, const std::vector<int>& seed = {});

struct Case3Result {
  CMatrix N;        // N(k, h) on T'M at (z, rho u)
  CMatrix coframe;  // dv^k = rho^k_a du^a as (k, a)
  FrameCompletion completion;
  std::map<std::string, double> relations;
};

Case3Result case3_induced_connection(const AlgebroidSpec& a, const Expression& L_E, const ConnectionField& N_E,
                                     const WPoint& p, const std::vector<int>& seed = {});

/// L*(z, eta) = L(z, u0 + Q0 (eta - rho(z) u0)) with Q0 = rho_inv at p: a lift
/// of T'M into E through p with rho U = eta to first order in z.
Expression case3_lifted_lagrangian(const AlgebroidSpec& a, const Expression& L_E, const WPoint& p,
                                   const CMatrix& Q0);

ResidualReport case2_report(const AlgebroidSpec& a, const Expression& L_TM, const std::vector<WPoint>& points,
                            const Tolerances& tol = {});

ResidualReport chern_lagrange_induction_suite(const AlgebroidSpec& a, const Expression& L_E,
                                              const std::vector<WPoint>& points, const Tolerances& tol = {});

}  // namespace algebroid
