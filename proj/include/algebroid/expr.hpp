#pragma once

// Closed-form expressions in the coordinates z, zb, u, ub of a holomorphic
// vector bundle.  Conjugated coordinates are independent symbols; there is
// no conjugation operator.  Evaluation is generic over the scalar algebra so
// the same tree serves plain complex numbers and (nested) dual numbers.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algebroid/dual.hpp"
#include "algebroid/errors.hpp"

namespace algebroid {

enum class VarClass : std::uint8_t { Z, ZB, U, UB };

struct Var {
  VarClass cls = VarClass::Z;
  int index = 0;  // zero-based

  static Var z(int i) { return {VarClass::Z, i}; }
  static Var zb(int i) { return {VarClass::ZB, i}; }
  static Var u(int i) { return {VarClass::U, i}; }
  static Var ub(int i) { return {VarClass::UB, i}; }

  Var conjugate() const;
  std::string name() const;  // "z1", "ub3", ...

  friend auto operator<=>(const Var&, const Var&) = default;
};

/// Dimensions of the formal coordinate vector [z, zb, u, ub].
struct Layout {
  int n = 1;
  int m = 1;

  std::size_t size() const { return static_cast<std::size_t>(2 * (n + m)); }
  std::size_t index(Var v) const;
  Var var_at(std::size_t flat) const;
  bool contains(Var v) const;
  friend bool operator==(const Layout&, const Layout&) = default;
};

/// Declared coordinate classes and dimensions for parsing.
struct VariableContext {
  int n = 1;
  int m = 1;
  bool allow_z = true;
  bool allow_zb = false;
  bool allow_u = false;
  bool allow_ub = false;

  /// Only z1..zn.
  static VariableContext base(int n);
  /// z and u, no conjugates.
  static VariableContext holomorphic(int n, int m);
  /// All four classes.
  static VariableContext full(int n, int m);

  bool holomorphic_only() const { return !allow_zb && !allow_ub; }
  Layout layout() const { return {n, m}; }
};

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div };
enum class Func : std::uint8_t { Exp, Log, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct ConstNode {
  Complex value;
};
struct VarNode {
  Var var;
};
struct NegNode {
  NodePtr arg;
};
struct BinaryNode {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct PowNode {
  NodePtr base;
  int exponent;
};
struct FuncNode {
  Func func;
  NodePtr arg;
};

struct Node {
  std::variant<ConstNode, VarNode, NegNode, BinaryNode, PowNode, FuncNode> data;
};

/// Immutable expression tree.  Copies share structure.
class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  static Expression constant(Complex c);
  static Expression variable(Var v);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  bool is_zero_constant() const;
  std::string str() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  NodePtr root_;
};

Expression pow(const Expression& base, int exponent);
Expression apply(Func f, const Expression& arg);

Expression parse(std::string_view text, const VariableContext& ctx);

/// Text that parses back to a structurally identical tree.
std::string print(const Expression& e);

/// Swap z<->zb and u<->ub, conjugate every literal.  conj(f(z)) == conjugate(f)(zb).
Expression conjugate(const Expression& e);

/// Replace variables by expressions; unmapped variables stay.
Expression substitute(const Expression& e, const std::map<Var, Expression>& map);

/// Formal symbolic partial derivative (no simplification beyond dropping
/// zero and unit factors).  Used for chart transport only.
Expression differentiate(const Expression& e, Var v);

/// Builders that drop zero terms and unit factors.
Expression plus(const Expression& a, const Expression& b);
Expression minus(const Expression& a, const Expression& b);
Expression times(const Expression& a, const Expression& b);

/// Free variables in sorted order.
std::vector<Var> free_variables(const Expression& e);

bool depends_on(const Expression& e, Var v);

/// The scalar that evaluate() instantiates for a given algebra.
template <class S>
S make_scalar(Complex c) {
  return S(c);
}

namespace detail {

template <class S>
S ipow(S base, int exponent) {
  const bool invert = exponent < 0;
  unsigned k = static_cast<unsigned>(invert ? -exponent : exponent);
  S result = make_scalar<S>(Complex{1.0, 0.0});
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return invert ? make_scalar<S>(Complex{1.0, 0.0}) / result : result;
}

template <class S>
S evaluate_node(const Node& node, std::span<const S> coords, const Layout& layout) {
  using std::exp;
  using std::log;
  using std::sqrt;
  return std::visit(
      [&](const auto& n) -> S {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstNode>) {
          return make_scalar<S>(n.value);
        } else if constexpr (std::is_same_v<N, VarNode>) {
          if (!layout.contains(n.var))
            throw DimensionMismatch("variable " + n.var.name() + " outside the evaluation layout");
          return coords[layout.index(n.var)];
        } else if constexpr (std::is_same_v<N, NegNode>) {
          return -evaluate_node<S>(*n.arg, coords, layout);
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          const S a = evaluate_node<S>(*n.lhs, coords, layout);
          const S b = evaluate_node<S>(*n.rhs, coords, layout);
          switch (n.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
              if (value_of(b) == Complex{})
                throw DomainError("division by zero", print(Expression(n.rhs)));
              return a / b;
          }
          return a;
        } else if constexpr (std::is_same_v<N, PowNode>) {
          const S b = evaluate_node<S>(*n.base, coords, layout);
          if (n.exponent < 0 && value_of(b) == Complex{})
            throw DomainError("negative power of zero", print(Expression(n.base)));
          return ipow(b, n.exponent);
        } else {
          const S a = evaluate_node<S>(*n.arg, coords, layout);
          switch (n.func) {
            case Func::Exp: return exp(a);
            case Func::Log:
              if (value_of(a) == Complex{}) throw DomainError("log of zero", print(Expression(n.arg)));
              return log(a);
            case Func::Sqrt:
              if (value_of(a) == Complex{}) throw DomainError("sqrt at zero", print(Expression(n.arg)));
              return sqrt(a);
          }
          return a;
        }
      },
      node.data);
}

}  // namespace detail

/// Value of e with coordinates laid out as [z, zb, u, ub].
template <class S>
S evaluate(const Expression& e, std::span<const S> coords, const Layout& layout) {
  if (coords.size() != layout.size())
    throw DimensionMismatch("coordinate vector has " + std::to_string(coords.size()) +
                            " entries, layout needs " + std::to_string(layout.size()));
  return detail::evaluate_node<S>(e.root(), coords, layout);
}

template <class S>
S evaluate(const Expression& e, const std::vector<S>& coords, const Layout& layout) {
  return evaluate<S>(e, std::span<const S>(coords), layout);
}

/// Evaluate with an explicit variable -> value assignment (all other
/// coordinates are unused; missing free variables raise DimensionMismatch).
Complex evaluate(const Expression& e, const std::map<Var, Complex>& assignment);

}  // namespace algebroid
