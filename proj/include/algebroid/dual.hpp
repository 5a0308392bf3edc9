#pragma once

// Forward-mode dual numbers over complex scalars.
//
// A Dual<T> is re + eps*E with E*E = 0 and one nilpotent generator per
// instance.  Nesting Dual<Dual<T>> gives a second, independent generator,
// which is how second-order (and, for derived evaluators, third-order)
// Wirtinger partials are obtained.  Conjugation never appears: z and zb are
// separate formal coordinates, so every operation here is complex-analytic.

#include <cmath>
#include <complex>
#include <concepts>
#include <type_traits>

namespace algebroid {

using Complex = std::complex<double>;

template <class T>
struct Dual;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

template <class T>
struct Dual {
  T re{};
  T eps{};

  Dual() = default;
  Dual(const T& r) : re(r), eps{} {}  // NOLINT(google-explicit-constructor)
  Dual(const T& r, const T& e) : re(r), eps(e) {}

  template <class U>
    requires(!std::same_as<U, T> && !is_dual_v<U> && std::constructible_from<T, U>)
  Dual(const U& v) : re(T(v)), eps{} {}  // NOLINT(google-explicit-constructor)

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.re + b.re, a.eps + b.eps}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.re - b.re, a.eps - b.eps}; }
  friend Dual operator-(const Dual& a) { return {-a.re, -a.eps}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.re * b.re, a.re * b.eps + a.eps * b.re};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T q = a.re / b.re;
    return {q, (a.eps - q * b.eps) / b.re};
  }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend bool operator==(const Dual& a, const Dual& b) { return a.re == b.re && a.eps == b.eps; }
};

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.re);
  return {e, a.eps * e};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.re), a.eps / a.re};
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.re);
  return {s, a.eps / (s + s)};
}

/// Complex value at the bottom of any nesting of duals.
inline Complex value_of(const Complex& v) { return v; }
template <class T>
Complex value_of(const Dual<T>& v) {
  return value_of(v.re);
}

/// True when every component of every nesting level is exactly zero.
inline bool is_exact_zero(const Complex& v) { return v == Complex{}; }
template <class T>
bool is_exact_zero(const Dual<T>& v) {
  return is_exact_zero(v.re) && is_exact_zero(v.eps);
}

inline bool all_finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class T>
bool all_finite(const Dual<T>& v) {
  return all_finite(v.re) && all_finite(v.eps);
}

}  // namespace algebroid
