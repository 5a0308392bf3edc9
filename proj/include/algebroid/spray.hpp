#pragma once

// Semisprays and sprays on E: the canonical spray of a regular Lagrangian,
// transformation and homogeneity checks, and RK4 integral curves.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "algebroid/algebroid.hpp"

namespace algebroid {

/// A_ab = d2L/du^a dub^b and X_kb = d2L/dz^k dub^b at c.
template <class S>
void lagrangian_blocks(const Expression& L, const Layout& layout, const Vec<S>& c, Matrix<S>& A, Matrix<S>& X) {
  const auto f = expr_fn(L, layout);
  const std::size_t n = static_cast<std::size_t>(layout.n);
  const std::size_t m = static_cast<std::size_t>(layout.m);
  A = Matrix<S>(m, m);
  X = Matrix<S>(n, m);
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t ub = 2 * n + m + b;
    for (std::size_t a = 0; a < m; ++a) A(a, b) = partial2(f, c, 2 * n + a, ub);
    for (std::size_t k = 0; k < n; ++k) X(k, b) = partial2(f, c, k, ub);
  }
}

/// Value matrix (bottom complex parts) of a generic matrix.
template <class S>
CMatrix values_of(const Matrix<S>& a) {
  CMatrix v(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) v(i, j) = value_of(a(i, j));
  return v;
}

/// Inverse of the fiber metric; SingularMetric when |det| < 1e-12.
template <class S>
Matrix<S> metric_inverse(const Matrix<S>& A) {
  const Complex det = determinant(values_of(A));
  if (std::abs(det) < 1e-12) throw SingularMetric("metric determinant " + std::to_string(std::abs(det)) + " below 1e-12");
  return inverse<SingularMetric>(A, 0.0);
}

/// G^a = 1/2 ( g^{b a} d2L/dz^k dub^b + 1/2 W^a_e dM^e_b/dz^k u^b ) eta^k
template <class S>
Vec<S> canonical_spray_at(const AlgebroidSpec& a, const Expression& L, const ChartData* chart, const Vec<S>& c) {
  const Layout layout = a.layout();
  Matrix<S> A, X;
  lagrangian_blocks(L, layout, c, A, X);
  const Matrix<S> B = metric_inverse(A);
  const Vec<S> eta = eta_at(a, c, layout);
  const std::size_t n = static_cast<std::size_t>(a.n);
  const std::size_t m = static_cast<std::size_t>(a.m);
  const S half(Complex{0.5, 0.0});

  // Q(a, k) = g^{b a} X(k, b) [+ 1/2 W^a_e dM^e_b/dz^k u^b]
  Matrix<S> Q(m, n);
  for (std::size_t al = 0; al < m; ++al)
    for (std::size_t k = 0; k < n; ++k) {
      S s(Complex{});
      for (std::size_t be = 0; be < m; ++be) s = s + B(be, al) * X(k, be);
      Q(al, k) = s;
    }
  if (chart != nullptr) {
    const Matrix<S> W = W_at(*chart, c, layout);
    const auto dM = grid_dz(chart->M, c, layout);
    for (std::size_t al = 0; al < m; ++al)
      for (std::size_t k = 0; k < n; ++k) {
        S s(Complex{});
        for (std::size_t e = 0; e < m; ++e)
          for (std::size_t be = 0; be < m; ++be) s = s + W(al, e) * dM[k](e, be) * c[2 * n + be];
        Q(al, k) = Q(al, k) + half * s;
      }
  }
  Vec<S> G(m, S(Complex{}));
  for (std::size_t al = 0; al < m; ++al) {
    S s(Complex{});
    for (std::size_t k = 0; k < n; ++k) s = s + Q(al, k) * eta[k];
    G[al] = half * s;
  }
  return G;
}

/// S = rho^k_a u^a d/dz^k - 2 G^a d/du^a.  G is a field of dimension m on
/// the layout {n, m}.
struct SprayField {
  AlgebroidSpec algebroid;
  Field G;

  static SprayField from_expressions(const AlgebroidSpec& a, const std::vector<Expression>& G);
  /// Requires a real Lagrangian; the chart term is included when chart != nullptr.
  static SprayField canonical(const AlgebroidSpec& a, const Expression& L, const ChartData* chart = nullptr);

  CVector at(const WPoint& p) const { return G(to_coords(p)); }
};

/// Canonical spray at one point (reality check at p included).
CVector canonical_spray(const AlgebroidSpec& a, const Expression& L, const ChartData* chart, const WPoint& p);

/// |Im L| <= 1e-12 max(1, |L|)
void check_lagrangian_real(const Expression& L, const WPoint& p);

/// Residual of Gt^a - M^a_b G^b + 1/2 dM^a_b/dz^k u^b eta^k with SB the same
/// semispray in chart B; also the anchor part law.
ResidualReport semispray_change_residual(const SprayField& SA, const SprayField& SB, const ChartData& chart,
                                         const std::vector<WPoint>& points, const Tolerances& tol = {});

const std::vector<Complex>& default_lambdas();

/// max over lambda of |G(z, lambda u) - lambda^2 G(z, u)|
double homogeneity_residual(const SprayField& S, const WPoint& p, const std::vector<Complex>& lambdas = default_lambdas());

/// max component deviation of [Liouville, S] from S
double liouville_bracket_residual(const SprayField& S, const WPoint& p);

struct TrajectorySample {
  double t;
  CVector z;
  CVector u;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0;
  std::string method = "rk4";
  bool aborted = false;
  std::string message;

  void write_csv(std::ostream& os) const;
};

struct IntegrateOptions {
  double singular_radius = 0.05;
};

Trajectory integrate(const SprayField& S, const WPoint& x0, double t_end, double step, const IntegrateOptions& opt = {});

/// max over interior samples of |dz/dt - rho u| with dz/dt from a 5-point stencil.
double admissibility_residual(const SprayField& S, const Trajectory& traj);

}  // namespace algebroid
