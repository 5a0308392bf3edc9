#pragma once

// Forward-mode Wirtinger calculus on the formal coordinate vector
// [z, zb, u, ub].  Generic callables take a std::vector<S> of coordinates and
// return either a scalar S or a std::vector<S>; the helpers below seed one
// nilpotent direction per call.

#include <functional>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "algebroid/dual.hpp"
#include "algebroid/expr.hpp"

namespace algebroid {

using D1 = Dual<Complex>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

template <class S>
using Vec = std::vector<S>;

/// A point of E (or of T'M with u read as eta).  zb, ub are conj(z), conj(u).
struct WPoint {
  std::vector<Complex> z;
  std::vector<Complex> u;

  Layout layout() const { return {static_cast<int>(z.size()), static_cast<int>(u.size())}; }
  bool finite() const;
};

/// [z, conj z, u, conj u]
Vec<Complex> to_coords(const WPoint& p);
/// Inverse of to_coords (reads the holomorphic slots only).
WPoint from_coords(const Vec<Complex>& c, const Layout& layout);

// ---------------------------------------------------------------- seeding

template <class S>
Vec<Dual<S>> lift(const Vec<S>& c, std::size_t idx) {
  Vec<Dual<S>> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    out.emplace_back(c[i], i == idx ? S(Complex{1.0, 0.0}) : S(Complex{}));
  return out;
}

template <class S>
Vec<Dual<S>> lift_dir(const Vec<S>& c, const Vec<S>& dir) {
  if (dir.size() != c.size()) throw DimensionMismatch("direction and point differ in size");
  Vec<Dual<S>> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(c[i], dir[i]);
  return out;
}

template <class S>
Vec<Dual<S>> lift_const(const Vec<S>& c) {
  Vec<Dual<S>> out;
  out.reserve(c.size());
  for (const auto& x : c) out.emplace_back(x);
  return out;
}

template <class T>
T eps_of(const Dual<T>& d) {
  return d.eps;
}
template <class T>
Vec<T> eps_of(const Vec<Dual<T>>& v) {
  Vec<T> out;
  out.reserve(v.size());
  for (const auto& d : v) out.push_back(d.eps);
  return out;
}

template <class T>
T re_of(const Dual<T>& d) {
  return d.re;
}
template <class T>
Vec<T> re_of(const Vec<Dual<T>>& v) {
  Vec<T> out;
  out.reserve(v.size());
  for (const auto& d : v) out.push_back(d.re);
  return out;
}

/// d f / d c[idx]
template <class F, class S>
auto partial(F&& f, const Vec<S>& c, std::size_t idx) {
  return eps_of(f(lift(c, idx)));
}

/// d^2 f / d c[i] d c[j] (one level of nesting; symmetric by construction
/// because the inner and outer seeds commute in the dual algebra).
template <class F, class S>
auto partial2(F&& f, const Vec<S>& c, std::size_t i, std::size_t j) {
  auto inner = [&](const auto& cc) { return partial(f, cc, j); };
  return partial(inner, c, i);
}

/// Directional derivative f'(c)[dir].
template <class F, class S>
auto directional(F&& f, const Vec<S>& c, const Vec<S>& dir) {
  return eps_of(f(lift_dir(c, dir)));
}

/// Lie bracket of coordinate vector fields X, Y (generic callables returning
/// component vectors): [X,Y]^i = X(Y^i) - Y(X^i).
template <class FX, class FY, class S>
Vec<S> lie_bracket(FX&& X, FY&& Y, const Vec<S>& c) {
  const Vec<S> xv = X(c);
  const Vec<S> yv = Y(c);
  const Vec<S> xy = directional(Y, c, xv);
  const Vec<S> yx = directional(X, c, yv);
  Vec<S> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = xy[i] - yx[i];
  return out;
}

/// Generic evaluator of an expression on a fixed layout.
inline auto expr_fn(const Expression& e, const Layout& layout) {
  return [e, layout](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    return evaluate<S>(e, c, layout);
  };
}

template <class S>
S cval(Complex v) {
  return S(v);
}

template <class S>
Vec<S> promote(const Vec<Complex>& c) {
  Vec<S> out;
  out.reserve(c.size());
  for (const auto& x : c) out.push_back(S(x));
  return out;
}

// ---------------------------------------------------------------- fields

/// Type-erased vector-valued function of the coordinates, available at the
/// scalar levels Complex, D1..D4.  Derivatives of a field consume one level.
class Field {
 public:
  Field() = default;

  const Layout& layout() const { return layout_; }
  std::size_t dim() const { return dim_; }
  int depth() const { return depth_; }
  bool empty() const { return !f0_; }

  template <class S>
  Vec<S> operator()(const Vec<S>& c) const {
    if constexpr (std::is_same_v<S, Complex>) {
      return call(f0_, c);
    } else if constexpr (std::is_same_v<S, D1>) {
      return call(f1_, c);
    } else if constexpr (std::is_same_v<S, D2>) {
      return call(f2_, c);
    } else if constexpr (std::is_same_v<S, D3>) {
      return call(f3_, c);
    } else {
      static_assert(std::is_same_v<S, D4>, "unsupported scalar level");
      return call(f4_, c);
    }
  }

  template <int Depth = 4, class F>
  static Field make(const Layout& layout, std::size_t dim, F fn) {
    Field out;
    out.layout_ = layout;
    out.dim_ = dim;
    out.depth_ = Depth;
    out.f0_ = [fn](const Vec<Complex>& c) { return Vec<Complex>(fn(c)); };
    if constexpr (Depth >= 1) out.f1_ = [fn](const Vec<D1>& c) { return Vec<D1>(fn(c)); };
    if constexpr (Depth >= 2) out.f2_ = [fn](const Vec<D2>& c) { return Vec<D2>(fn(c)); };
    if constexpr (Depth >= 3) out.f3_ = [fn](const Vec<D3>& c) { return Vec<D3>(fn(c)); };
    if constexpr (Depth >= 4) out.f4_ = [fn](const Vec<D4>& c) { return Vec<D4>(fn(c)); };
    return out;
  }

  static Field from_expressions(const std::vector<Expression>& exprs, const Layout& layout);

  /// Partial derivative field with respect to coordinate slot idx.
  Field derivative(std::size_t idx) const;

 private:
  template <class S>
  Vec<S> call(const std::function<Vec<S>(const Vec<S>&)>& f, const Vec<S>& c) const {
    if (!f) throw UnsupportedInput("field evaluated beyond its differentiation depth");
    if (c.size() != layout_.size()) throw DimensionMismatch("field evaluated on a coordinate vector of wrong size");
    return f(c);
  }

  Layout layout_{};
  std::size_t dim_ = 0;
  int depth_ = -1;
  std::function<Vec<Complex>(const Vec<Complex>&)> f0_;
  std::function<Vec<D1>(const Vec<D1>&)> f1_;
  std::function<Vec<D2>(const Vec<D2>&)> f2_;
  std::function<Vec<D3>(const Vec<D3>&)> f3_;
  std::function<Vec<D4>(const Vec<D4>&)> f4_;
};

// ---------------------------------------------------------------- jets

struct JetRequest {
  std::vector<Var> first;
  std::vector<std::pair<Var, Var>> second;
};

struct WirtingerJet {
  Complex value;
  std::map<Var, Complex> d1;
  std::map<std::pair<Var, Var>, Complex> d2;
};

/// Exact Wirtinger partials of e at p.  An empty request asks for every
/// first partial (and, for order 2, every pair).
WirtingerJet jet(const Expression& e, const WPoint& p, int order, const JetRequest& wanted = {});

/// Central-difference Wirtinger derivative with zb slaved to conj(z).
Complex fd_oracle(const Expression& e, const WPoint& p, Var var, double h);

/// |Im e(p)| with zb := conj z, ub := conj u.
double reality_residual(const Expression& e, const WPoint& p);

/// Throws RealityCheckFailed when some point has |Im e| > tol.
void require_real(const Expression& e, const std::vector<WPoint>& points, double tol = 1e-12);

}  // namespace algebroid
