#pragma once

// Seeded generators and small oracles shared by the test files.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "algebroid/linalg.hpp"
#include "algebroid/wirtinger.hpp"

namespace gen {

using algebroid::CMatrix;
using algebroid::Complex;
using algebroid::WPoint;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g_); }
  Complex annulus(double r0 = 0.3, double r1 = 2.0) { return std::polar(uniform(r0, r1), uniform(0.0, 6.283185307179586)); }
  Complex box(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

  WPoint point(int n, int m, double r0 = 0.3, double r1 = 2.0) {
    WPoint p;
    for (int k = 0; k < n; ++k) p.z.push_back(annulus(r0, r1));
    for (int a = 0; a < m; ++a) p.u.push_back(annulus(r0, r1));
    return p;
  }

  std::vector<WPoint> points(int n, int m, std::size_t count, double r0 = 0.3, double r1 = 2.0) {
    std::vector<WPoint> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(point(n, m, r0, r1));
    return out;
  }

  CMatrix matrix(std::size_t r, std::size_t c, double s = 1.0) {
    CMatrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out(i, j) = box(s);
    return out;
  }

  std::string coefficient() {
    const double re = std::round(uniform(-2, 2) * 4) / 4;
    const double im = std::round(uniform(-2, 2) * 4) / 4;
    return "(" + std::to_string(re) + (im < 0 ? "-" : "+") + std::to_string(std::abs(im)) + "i)";
  }

  // Random monomial-sum text over the declared variable names.
  std::string polynomial(const std::vector<std::string>& vars, int terms, int max_degree) {
    std::string s;
    for (int t = 0; t < terms; ++t) {
      if (t) s += " + ";
      s += coefficient();
      const int deg = integer(0, max_degree);
      for (int d = 0; d < deg; ++d) s += "*" + vars[static_cast<std::size_t>(integer(0, static_cast<int>(vars.size()) - 1))];
    }
    return s;
  }

  // Polynomial, optionally wrapped in exp or divided by a nonvanishing factor.
  std::string expression(const std::vector<std::string>& vars) {
    std::string p = polynomial(vars, integer(1, 4), 3);
    switch (integer(0, 3)) {
      case 0:
        return "exp(" + polynomial(vars, 2, 1) + "/4)*(" + p + ")";
      case 1:
        return "(" + p + ")/(5 + " + vars.front() + ")";
      case 2:
        return "(" + p + ")^2";
      default:
        return p;
    }
  }

 private:
  std::mt19937_64 g_;
};

inline std::vector<std::string> names(int n, int m, bool conj) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) {
    out.push_back("z" + std::to_string(k));
    if (conj) out.push_back("zb" + std::to_string(k));
  }
  for (int a = 1; a <= m; ++a) {
    out.push_back("u" + std::to_string(a));
    if (conj) out.push_back("ub" + std::to_string(a));
  }
  return out;
}

inline double diff(const CMatrix& a, const CMatrix& b) { return algebroid::max_abs(a - b); }

inline double diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double w = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

}  // namespace gen
