#pragma once

/// \file
/// Minimal complex arithmetic over any real type with the usual operators.
/// std::complex is only specified for the built-in floating types, so the
/// extended rungs use this instead.

#include <cmath>
#include <complex>

#include "kleinzone/numeric/multi_double.hpp"

namespace kleinzone::num {

// Real-type helpers shared by double and MultiDouble<N>.
inline double to_double(double x) { return x; }
template <int N>
double to_double(const MultiDouble<N>& x) {
  return x.to_double();
}

template <class R>
struct RealTraits;

template <>
struct RealTraits<double> {
  static constexpr int bits = 53;
  static constexpr double epsilon() { return 0x1p-53; }
};

template <int N>
struct RealTraits<MultiDouble<N>> {
  static constexpr int bits = MultiDouble<N>::kBits;
  static constexpr double epsilon() { return MultiDouble<N>::epsilon(); }
};

template <class R>
inline R pi_value() {
  if constexpr (std::is_same_v<R, double>) {
    return M_PI;
  } else {
    return pi<R::kComponents>();
  }
}

inline double sqrt_r(double x) { return std::sqrt(x); }
template <int N>
MultiDouble<N> sqrt_r(const MultiDouble<N>& x) {
  return sqrt(x);
}

inline void sincos(double x, double& s, double& c) {
  s = std::sin(x);
  c = std::cos(x);
}

template <class R>
struct Complex {
  R re{};
  R im{};

  constexpr Complex() = default;
  constexpr Complex(R r) : re(r) {}  // NOLINT(implicit)
  constexpr Complex(R r, R i) : re(r), im(i) {}
  template <class T = R, class = std::enable_if_t<!std::is_same_v<T, double>>>
  Complex(double r) : re(r) {}  // NOLINT(implicit)

  static Complex from(std::complex<double> z) { return {R(z.real()), R(z.imag())}; }

  std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }

  Complex operator-() const { return {-re, -im}; }

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const R& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const R& s, const Complex& a) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const R& s) { return {a.re / s, a.im / s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }

  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }

  friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
  friend R norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
  /// Modulus evaluated in double; sufficient for error bookkeeping.
  friend double abs_d(const Complex& a) { return std::hypot(to_double(a.re), to_double(a.im)); }
};

/// e^{i theta}
template <class R>
Complex<R> expi(const R& theta) {
  R s, c;
  sincos(theta, s, c);
  return {c, s};
}

/// Widen a complex value from one rung to another (exact when widening).
template <class To, class From>
Complex<To> convert(const Complex<From>& z) {
  if constexpr (std::is_same_v<To, From>) {
    return z;
  } else {
    return {To(z.re), To(z.im)};
  }
}

}  // namespace kleinzone::num
