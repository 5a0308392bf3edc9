#include "algebroid/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace algebroid {

// ---------------------------------------------------------------- variables

Var Var::conjugate() const {
  switch (cls) {
    case VarClass::Z: return {VarClass::ZB, index};
    case VarClass::ZB: return {VarClass::Z, index};
    case VarClass::U: return {VarClass::UB, index};
    case VarClass::UB: return {VarClass::U, index};
  }
  return *this;
}

std::string Var::name() const {
  static constexpr const char* prefix[] = {"z", "zb", "u", "ub"};
  return prefix[static_cast<int>(cls)] + std::to_string(index + 1);
}

std::size_t Layout::index(Var v) const {
  switch (v.cls) {
    case VarClass::Z: return static_cast<std::size_t>(v.index);
    case VarClass::ZB: return static_cast<std::size_t>(n + v.index);
    case VarClass::U: return static_cast<std::size_t>(2 * n + v.index);
    case VarClass::UB: return static_cast<std::size_t>(2 * n + m + v.index);
  }
  return 0;
}

Var Layout::var_at(std::size_t flat) const {
  const int i = static_cast<int>(flat);
  if (i < n) return Var::z(i);
  if (i < 2 * n) return Var::zb(i - n);
  if (i < 2 * n + m) return Var::u(i - 2 * n);
  return Var::ub(i - 2 * n - m);
}

bool Layout::contains(Var v) const {
  if (v.index < 0) return false;
  const bool base = v.cls == VarClass::Z || v.cls == VarClass::ZB;
  return v.index < (base ? n : m);
}

VariableContext VariableContext::base(int n) { return {n, 1, true, false, false, false}; }
VariableContext VariableContext::holomorphic(int n, int m) { return {n, m, true, false, true, false}; }
VariableContext VariableContext::full(int n, int m) { return {n, m, true, true, true, true}; }

// ---------------------------------------------------------------- construction

namespace {

template <class T>
NodePtr make(T&& d) {
  return std::make_shared<const Node>(Node{std::forward<T>(d)});
}

}  // namespace

Expression::Expression() : root_(make(ConstNode{Complex{}})) {}

Expression Expression::constant(Complex c) { return Expression(make(ConstNode{c})); }
Expression Expression::variable(Var v) { return Expression(make(VarNode{v})); }

bool Expression::is_zero_constant() const {
  const auto* c = std::get_if<ConstNode>(&root_->data);
  return c != nullptr && c->value == Complex{};
}

std::string Expression::str() const { return print(*this); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(make(BinaryNode{BinaryOp::Add, a.root_ptr(), b.root_ptr()}));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(make(BinaryNode{BinaryOp::Sub, a.root_ptr(), b.root_ptr()}));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(make(BinaryNode{BinaryOp::Mul, a.root_ptr(), b.root_ptr()}));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(make(BinaryNode{BinaryOp::Div, a.root_ptr(), b.root_ptr()}));
}
Expression operator-(const Expression& a) { return Expression(make(NegNode{a.root_ptr()})); }

Expression pow(const Expression& base, int exponent) {
  return Expression(make(PowNode{base.root_ptr(), exponent}));
}

Expression apply(Func f, const Expression& arg) { return Expression(make(FuncNode{f, arg.root_ptr()})); }

namespace {

bool nodes_equal(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const auto& y = std::get<N>(b.data);
        if constexpr (std::is_same_v<N, ConstNode>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<N, VarNode>) {
          return x.var == y.var;
        } else if constexpr (std::is_same_v<N, NegNode>) {
          return nodes_equal(*x.arg, *y.arg);
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          return x.op == y.op && nodes_equal(*x.lhs, *y.lhs) && nodes_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<N, PowNode>) {
          return x.exponent == y.exponent && nodes_equal(*x.base, *y.base);
        } else {
          return x.func == y.func && nodes_equal(*x.arg, *y.arg);
        }
      },
      a.data);
}

}  // namespace

bool operator==(const Expression& a, const Expression& b) { return nodes_equal(a.root(), b.root()); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VariableContext& ctx) : text_(text), ctx_(ctx) {}

  Expression run() {
    Expression e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  const VariableContext& ctx_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = atom();
    if (!accept('^')) return base;
    skip_ws();
    bool paren = accept('(');
    skip_ws();
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("integer exponent expected after '^'");
    int k = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (paren && !accept(')')) fail("')' expected after exponent");
    return pow(base, negative ? -k : k);
  }

  // Scans a real literal at pos_ without consuming leading whitespace.
  bool scan_number(double& out) {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    auto digit = [&](std::size_t q) { return q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q])); };
    bool any = false;
    while (digit(p)) ++p, any = true;
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (digit(p)) ++p, any = true;
    }
    if (!any) return false;
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (digit(q)) {
        while (digit(q)) ++q;
        p = q;
      }
    }
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + p, out);
    if (ec != std::errc{}) return false;
    pos_ = p;
    return true;
  }

  bool at_imag_suffix() const {
    if (pos_ >= text_.size() || text_[pos_] != 'i') return false;
    const std::size_t q = pos_ + 1;
    return q >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[q])) || text_[q] == '_');
  }

  // '(' [-] NUMBER [ ('+'|'-') [NUMBER] 'i' | 'i' ] ')' as a single literal.
  bool try_complex_literal(Expression& out) {
    const std::size_t save = pos_;
    auto restore = [&] {
      pos_ = save;
      return false;
    };
    ++pos_;  // '('
    skip_ws();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
      skip_ws();
    }
    double first = 0;
    if (!scan_number(first)) return restore();
    if (neg) first = -first;
    double re = first;
    double im = 0;
    if (at_imag_suffix()) {
      ++pos_;
      re = 0;
      im = first;
    } else {
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        const bool minus = text_[pos_] == '-';
        ++pos_;
        skip_ws();
        double mag = 1;
        if (!at_imag_suffix() && !scan_number(mag)) return restore();
        if (!at_imag_suffix()) return restore();
        ++pos_;
        im = minus ? -mag : mag;
      }
    }
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') return restore();
    ++pos_;
    out = Expression::constant(Complex{re, im});
    return true;
  }

  Expression atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      Expression lit;
      if (try_complex_literal(lit)) return lit;
      ++pos_;
      Expression inner = expr();
      if (!accept(')')) fail("')' expected");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      if (!scan_number(v)) fail("malformed number");
      if (at_imag_suffix()) {
        ++pos_;
        return Expression::constant(Complex{0.0, v});
      }
      return Expression::constant(Complex{v, 0.0});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string word(text_.substr(start, pos_ - start));
    const std::size_t digits_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string digits(text_.substr(digits_start, pos_ - digits_start));

    if (digits.empty()) {
      if (word == "i") return Expression::constant(Complex{0.0, 1.0});
      Func f{};
      if (word == "exp") f = Func::Exp;
      else if (word == "log") f = Func::Log;
      else if (word == "sqrt") f = Func::Sqrt;
      else {
        pos_ = start;
        throw UndeclaredVariable(word);
      }
      if (!accept('(')) fail("'(' expected after " + word);
      Expression arg = expr();
      if (!accept(')')) fail("')' expected");
      return apply(f, arg);
    }

    const std::string token = word + digits;
    VarClass cls{};
    if (word == "z") cls = VarClass::Z;
    else if (word == "zb") cls = VarClass::ZB;
    else if (word == "u" || word == "eta") cls = VarClass::U;
    else if (word == "ub" || word == "etab") cls = VarClass::UB;
    else {
      pos_ = start;
      throw UndeclaredVariable(token);
    }

    int idx = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    const int limit = (cls == VarClass::Z || cls == VarClass::ZB) ? ctx_.n : ctx_.m;
    if (ec != std::errc{} || idx < 1 || idx > limit) throw UndeclaredVariable(token);

    const bool conj_class = cls == VarClass::ZB || cls == VarClass::UB;
    const bool allowed = (cls == VarClass::Z && ctx_.allow_z) || (cls == VarClass::ZB && ctx_.allow_zb) ||
                         (cls == VarClass::U && ctx_.allow_u) || (cls == VarClass::UB && ctx_.allow_ub);
    if (!allowed) {
      const bool base_allowed = cls == VarClass::ZB ? ctx_.allow_z : ctx_.allow_u;
      if (conj_class && ctx_.holomorphic_only() && base_allowed) throw HolomorphyViolation(token);
      throw UndeclaredVariable(token);
    }
    return Expression::variable(Var{cls, idx - 1});
  }
};

}  // namespace

Expression parse(std::string_view text, const VariableContext& ctx) { return Parser(text, ctx).run(); }

// ---------------------------------------------------------------- printer

namespace {

std::string number_text(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string constant_text(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0 && !std::signbit(re)) return number_text(re);
  if (re == 0.0 && !std::signbit(re) && im > 0.0) return number_text(im) + "i";
  if (im == 0.0) return "(" + number_text(re) + ")";
  return "(" + number_text(re) + (std::signbit(im) ? "-" : "+") + number_text(std::abs(im)) + "i)";
}

int precedence(const Node& n) {
  if (const auto* b = std::get_if<BinaryNode>(&n.data))
    return (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) ? 1 : 2;
  if (std::holds_alternative<NegNode>(n.data)) return 3;
  if (std::holds_alternative<PowNode>(n.data)) return 4;
  return 5;
}

void print_node(const Node& node, std::string& out);

void print_wrapped(const Node& node, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_node(node, out);
  if (wrap) out += ')';
}

void print_node(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstNode>) {
          out += constant_text(n.value);
        } else if constexpr (std::is_same_v<N, VarNode>) {
          out += n.var.name();
        } else if constexpr (std::is_same_v<N, NegNode>) {
          out += '-';
          const bool wrap = std::holds_alternative<ConstNode>(n.arg->data) || precedence(*n.arg) < 3;
          print_wrapped(*n.arg, wrap, out);
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          static constexpr char sym[] = {'+', '-', '*', '/'};
          const int p = precedence(node);
          print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
          out += sym[static_cast<int>(n.op)];
          print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
        } else if constexpr (std::is_same_v<N, PowNode>) {
          // A bare non-negative constant base prints as a plain atom.
          print_wrapped(*n.base, precedence(*n.base) < 5, out);
          out += '^';
          out += std::to_string(n.exponent);
        } else {
          static constexpr const char* fname[] = {"exp", "log", "sqrt"};
          out += fname[static_cast<int>(n.func)];
          out += '(';
          print_node(*n.arg, out);
          out += ')';
        }
      },
      node.data);
}

}  // namespace

std::string print(const Expression& e) {
  std::string out;
  print_node(e.root(), out);
  return out;
}

// ---------------------------------------------------------------- transforms

namespace {

template <class F>
NodePtr rebuild(const NodePtr& node, F&& leaf) {
  return std::visit(
      [&](const auto& n) -> NodePtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstNode> || std::is_same_v<N, VarNode>) {
          return leaf(n, node);
        } else if constexpr (std::is_same_v<N, NegNode>) {
          return make(NegNode{rebuild(n.arg, leaf)});
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          return make(BinaryNode{n.op, rebuild(n.lhs, leaf), rebuild(n.rhs, leaf)});
        } else if constexpr (std::is_same_v<N, PowNode>) {
          return make(PowNode{rebuild(n.base, leaf), n.exponent});
        } else {
          return make(FuncNode{n.func, rebuild(n.arg, leaf)});
        }
      },
      node->data);
}

}  // namespace

Expression conjugate(const Expression& e) {
  return Expression(rebuild(e.root_ptr(), [](const auto& leaf, const NodePtr&) -> NodePtr {
    using N = std::decay_t<decltype(leaf)>;
    if constexpr (std::is_same_v<N, ConstNode>) {
      return make(ConstNode{std::conj(leaf.value)});
    } else {
      return make(VarNode{leaf.var.conjugate()});
    }
  }));
}

Expression substitute(const Expression& e, const std::map<Var, Expression>& map) {
  return Expression(rebuild(e.root_ptr(), [&](const auto& leaf, const NodePtr& self) -> NodePtr {
    using N = std::decay_t<decltype(leaf)>;
    if constexpr (std::is_same_v<N, VarNode>) {
      if (auto it = map.find(leaf.var); it != map.end()) return it->second.root_ptr();
    }
    return self;
  }));
}

namespace {

bool is_const(const Expression& e, Complex v) {
  const auto* c = std::get_if<ConstNode>(&e.root().data);
  return c != nullptr && c->value == v;
}

Expression add(const Expression& a, const Expression& b) {
  if (a.is_zero_constant()) return b;
  if (b.is_zero_constant()) return a;
  return a + b;
}

Expression sub(const Expression& a, const Expression& b) {
  if (b.is_zero_constant()) return a;
  if (a.is_zero_constant()) return -b;
  return a - b;
}

Expression mul(const Expression& a, const Expression& b) {
  if (a.is_zero_constant() || b.is_zero_constant()) return Expression{};
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return a * b;
}

Expression d(const Expression& e, Var v) {
  return std::visit(
      [&](const auto& n) -> Expression {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ConstNode>) {
          return Expression{};
        } else if constexpr (std::is_same_v<N, VarNode>) {
          return Expression::constant(n.var == v ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<N, NegNode>) {
          Expression da = d(Expression(n.arg), v);
          return da.is_zero_constant() ? da : -da;
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          const Expression a(n.lhs);
          const Expression b(n.rhs);
          const Expression da = d(a, v);
          const Expression db = d(b, v);
          switch (n.op) {
            case BinaryOp::Add: return add(da, db);
            case BinaryOp::Sub: return sub(da, db);
            case BinaryOp::Mul: return add(mul(da, b), mul(a, db));
            case BinaryOp::Div: {
              Expression t1 = da.is_zero_constant() ? Expression{} : da / b;
              Expression t2 = db.is_zero_constant() ? Expression{} : mul(a, db) / pow(b, 2);
              return sub(t1, t2);
            }
          }
          return Expression{};
        } else if constexpr (std::is_same_v<N, PowNode>) {
          const Expression b(n.base);
          const Expression db = d(b, v);
          if (db.is_zero_constant() || n.exponent == 0) return Expression{};
          Expression lower = n.exponent == 2 ? b : pow(b, n.exponent - 1);
          return mul(mul(Expression::constant(static_cast<double>(n.exponent)), lower), db);
        } else {
          const Expression a(n.arg);
          const Expression da = d(a, v);
          if (da.is_zero_constant()) return Expression{};
          switch (n.func) {
            case Func::Exp: return mul(apply(Func::Exp, a), da);
            case Func::Log: return da / a;
            case Func::Sqrt: return da / (Expression::constant(2.0) * apply(Func::Sqrt, a));
          }
          return Expression{};
        }
      },
      e.root().data);
}

void collect(const Node& node, std::set<Var>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, VarNode>) {
          out.insert(n.var);
        } else if constexpr (std::is_same_v<N, NegNode> || std::is_same_v<N, FuncNode>) {
          collect(*n.arg, out);
        } else if constexpr (std::is_same_v<N, BinaryNode>) {
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        } else if constexpr (std::is_same_v<N, PowNode>) {
          collect(*n.base, out);
        }
      },
      node.data);
}

}  // namespace

Expression differentiate(const Expression& e, Var v) { return d(e, v); }

Expression plus(const Expression& a, const Expression& b) { return add(a, b); }
Expression minus(const Expression& a, const Expression& b) { return sub(a, b); }
Expression times(const Expression& a, const Expression& b) { return mul(a, b); }

std::vector<Var> free_variables(const Expression& e) {
  std::set<Var> vars;
  collect(e.root(), vars);
  return {vars.begin(), vars.end()};
}

bool depends_on(const Expression& e, Var v) {
  const auto vars = free_variables(e);
  return std::binary_search(vars.begin(), vars.end(), v);
}

Complex evaluate(const Expression& e, const std::map<Var, Complex>& assignment) {
  Layout layout{1, 1};
  auto grow = [&](Var v) {
    if (v.cls == VarClass::Z || v.cls == VarClass::ZB) layout.n = std::max(layout.n, v.index + 1);
    else layout.m = std::max(layout.m, v.index + 1);
  };
  for (const auto& [v, val] : assignment) grow(v);
  const auto vars = free_variables(e);
  for (Var v : vars) grow(v);
  std::vector<Complex> coords(layout.size());
  for (Var v : vars) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw DimensionMismatch("no value assigned to " + v.name());
    coords[layout.index(v)] = it->second;
  }
  return evaluate<Complex>(e, coords, layout);
}

}  // namespace algebroid
