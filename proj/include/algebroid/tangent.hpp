#pragma once

// Geometry of T'E: induced coordinates, the tangent anchor, nonlinear
// connections with their adapted frames, and torsion/curvature tables of a
// distinguished linear connection.

#include <string>
#include <vector>

#include "algebroid/algebroid.hpp"
#include "algebroid/tensor_table.hpp"

namespace algebroid {

enum class ConnectionKind { OnTE, OnProlongation, OnTM };

/// Nonlinear-connection coefficients as a field of flattened rows x cols.
///   OnTE:           N[a][k]  (m x n), layout {n, m}
///   OnProlongation: N[b][a]  (m x m), layout {n, m}
///   OnTM:           N[h][k]  (n x n), layout {n, n} with u read as eta
struct ConnectionField {
  ConnectionKind kind = ConnectionKind::OnTE;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Field field;

  static ConnectionField from_expressions(ConnectionKind kind, const ExprGrid& grid, const Layout& layout);
  static ConnectionField zero(ConnectionKind kind, int n, int m);

  template <class S>
  Matrix<S> at(const Vec<S>& c) const {
    const Vec<S> flat = field(c);
    Matrix<S> out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out(i, j) = flat[i * cols + j];
    return out;
  }

  CMatrix at(const WPoint& p) const { return at(to_coords(p)); }
};

/// Distinguished linear connection on T'E.
///   L_ijk[i][j][k] = L^i_{jk},  L_ijg[i][j][g] = L^i_{jg},
///   L_abk[a][b][k] = L^a_{bk},  C_abg[a][b][g] = C^a_{bg}
struct LinearConnectionCoeffs {
  int n = 1;
  int m = 1;
  Field L_ijk;
  Field L_ijg;
  Field L_abk;
  Field C_abg;

  struct Entry {
    int i, j, k;
    Expression expr;
  };
  /// Omitted entries are zero.
  static LinearConnectionCoeffs from_entries(int n, int m, const std::vector<Entry>& L_ijk,
                                             const std::vector<Entry>& L_ijg, const std::vector<Entry>& L_abk,
                                             const std::vector<Entry>& C_abg);
};

CVector induced_eta(const AlgebroidSpec& a, const WPoint& p);

struct TangentTM {
  CVector Z;    // d/dz^k components
  CVector eta;  // d/deta^h components
};

/// rho_*(Z^k d/dz^k + V^a d/du^a)
TangentTM tangent_pushforward(const AlgebroidSpec& a, const WPoint& p, const CVector& Z, const CVector& V);

struct CovectorE {
  CVector dz;  // coefficients of dz^h
  CVector du;  // coefficients of du^a
};

/// Pullback of a_k dz^k + b_k deta^k through the dual of rho_*.
CovectorE dual_pullback(const AlgebroidSpec& a, const WPoint& p, const CVector& a_dz, const CVector& b_deta);

/// (delta f / delta z^k)_k = df/dz^k - N^a_k df/du^a
CVector adapted_frame_apply(const ConnectionField& N, const Expression& f, const WPoint& p);

/// Residual of  dzt^k/dz^h Nt^a_k - M^a_b N^b_h + dM^a_b/dz^h u^b,  with NA
/// given in chart A and NB the same connection written in chart B.
ResidualReport nlc_change_residual(const ConnectionField& NA, const ConnectionField& NB, const ChartData& chart,
                                   const std::vector<WPoint>& points, const Tolerances& tol = {});

/// Block "K"[a][k][h] = dN^a_k/dz^h - dN^a_h/dz^k and bracket diagnostics
/// computed as derivations on {z^k, u^a, z^k u^a}.
TensorTable adapted_bracket_coeffs(const ConnectionField& N, const WPoint& p);

TensorTable torsion_table(const LinearConnectionCoeffs& D, const ConnectionField& N, const WPoint& p);

TensorTable curvature_table(const LinearConnectionCoeffs& D, const ConnectionField& N, const WPoint& p);

}  // namespace algebroid
