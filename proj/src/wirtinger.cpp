#include "algebroid/wirtinger.hpp"

#include <cmath>

namespace algebroid {

bool WPoint::finite() const {
  for (const auto& v : z)
    if (!all_finite(v)) return false;
  for (const auto& v : u)
    if (!all_finite(v)) return false;
  return true;
}

Vec<Complex> to_coords(const WPoint& p) {
  Vec<Complex> c;
  c.reserve(2 * (p.z.size() + p.u.size()));
  for (const auto& v : p.z) c.push_back(v);
  for (const auto& v : p.z) c.push_back(std::conj(v));
  for (const auto& v : p.u) c.push_back(v);
  for (const auto& v : p.u) c.push_back(std::conj(v));
  return c;
}

WPoint from_coords(const Vec<Complex>& c, const Layout& layout) {
  if (c.size() != layout.size()) throw DimensionMismatch("coordinate vector does not match layout");
  WPoint p;
  p.z.assign(c.begin(), c.begin() + layout.n);
  p.u.assign(c.begin() + 2 * layout.n, c.begin() + 2 * layout.n + layout.m);
  return p;
}

Field Field::from_expressions(const std::vector<Expression>& exprs, const Layout& layout) {
  return make(layout, exprs.size(), [exprs, layout](const auto& c) {
    using S = typename std::decay_t<decltype(c)>::value_type;
    Vec<S> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(evaluate<S>(e, c, layout));
    return out;
  });
}

Field Field::derivative(std::size_t idx) const {
  if (depth_ < 1) throw UnsupportedInput("field has no differentiation depth left");
  Field out;
  out.layout_ = layout_;
  out.dim_ = dim_;
  out.depth_ = depth_ - 1;
  const Field self = *this;
  out.f0_ = [self, idx](const Vec<Complex>& c) { return eps_of(self(lift(c, idx))); };
  if (depth_ >= 2) out.f1_ = [self, idx](const Vec<D1>& c) { return eps_of(self(lift(c, idx))); };
  if (depth_ >= 3) out.f2_ = [self, idx](const Vec<D2>& c) { return eps_of(self(lift(c, idx))); };
  if (depth_ >= 4) out.f3_ = [self, idx](const Vec<D3>& c) { return eps_of(self(lift(c, idx))); };
  return out;
}

WirtingerJet jet(const Expression& e, const WPoint& p, int order, const JetRequest& wanted) {
  if (order != 1 && order != 2) throw UnsupportedInput("jet order must be 1 or 2");
  const Layout layout = p.layout();
  const Vec<Complex> c = to_coords(p);
  for (Var v : free_variables(e))
    if (!layout.contains(v)) throw DimensionMismatch("variable " + v.name() + " not covered by the point");

  JetRequest req = wanted;
  if (req.first.empty() && req.second.empty()) {
    for (std::size_t i = 0; i < layout.size(); ++i) req.first.push_back(layout.var_at(i));
    if (order == 2)
      for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = i; j < layout.size(); ++j) req.second.emplace_back(layout.var_at(i), layout.var_at(j));
  }

  const auto f = expr_fn(e, layout);
  WirtingerJet out;
  out.value = f(c);
  for (Var v : req.first) {
    if (!layout.contains(v)) throw DimensionMismatch("requested variable outside the point layout");
    out.d1[v] = partial(f, c, layout.index(v));
  }
  if (order == 2) {
    for (const auto& [a, b] : req.second) {
      if (!layout.contains(a) || !layout.contains(b))
        throw DimensionMismatch("requested variable outside the point layout");
      const Complex val = partial2(f, c, layout.index(a), layout.index(b));
      out.d2[{a, b}] = val;
      out.d2[{b, a}] = val;
    }
  }
  return out;
}

Complex fd_oracle(const Expression& e, const WPoint& p, Var var, double h) {
  if (!(h > 0)) throw UnsupportedInput("finite-difference step must be positive");
  const Layout layout = p.layout();
  if (!layout.contains(var)) throw DimensionMismatch("variable outside the point layout");
  const bool base = var.cls == VarClass::Z || var.cls == VarClass::ZB;
  const bool conj_dir = var.cls == VarClass::ZB || var.cls == VarClass::UB;

  auto eval_shifted = [&](Complex delta) {
    WPoint q = p;
    auto& slot = base ? q.z[static_cast<std::size_t>(var.index)] : q.u[static_cast<std::size_t>(var.index)];
    slot += delta;
    return evaluate<Complex>(e, to_coords(q), layout);
  };

  const Complex I{0.0, 1.0};
  const Complex dx = (eval_shifted(h) - eval_shifted(-h)) / (2 * h);
  const Complex dy = (eval_shifted(I * h) - eval_shifted(-I * h)) / (2 * h);
  return conj_dir ? 0.5 * (dx + I * dy) : 0.5 * (dx - I * dy);
}

double reality_residual(const Expression& e, const WPoint& p) {
  return std::abs(evaluate<Complex>(e, to_coords(p), p.layout()).imag());
}

void require_real(const Expression& e, const std::vector<WPoint>& points, double tol) {
  for (const auto& p : points) {
    const double r = reality_residual(e, p);
    if (r > tol)
      throw RealityCheckFailed("Lagrangian '" + print(e) + "' has imaginary part " + std::to_string(r) +
                               " at a sample point");
  }
}

}  // namespace algebroid
