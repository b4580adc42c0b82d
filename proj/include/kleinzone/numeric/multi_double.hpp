#pragma once

/// \file
/// Floating-point expansions of N doubles (N = 1..4, i.e. 53..212 bits).
///
/// A value is the unevaluated sum c[0] + c[1] + ... + c[N-1] with the
/// components ordered by decreasing magnitude. All arithmetic is built from
/// the error-free transformations two_sum and two_prod and a renormalisation
/// pass; nothing here depends on FMA-free contraction, so the translation
/// units must not be compiled with -ffast-math.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace kleinzone::num {

namespace eft {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Collapse M roughly magnitude-ordered terms into an N-component expansion.
template <int N, std::size_t M>
inline std::array<double, N> renormalize(std::array<double, M> x) {
  static_assert(M >= 1);
  double s = x[M - 1];
  for (std::size_t i = M - 1; i-- > 0;) {
    two_sum(x[i], s, s, x[i + 1]);
  }
  x[0] = s;

  std::array<double, N> out{};
  int k = 0;
  s = x[0];
  for (std::size_t i = 1; i < M; ++i) {
    if (k == N - 1) {
      s += x[i];
      continue;
    }
    double hi, lo;
    two_sum(s, x[i], hi, lo);
    if (lo != 0.0) {
      out[k++] = hi;
      s = lo;
    } else {
      s = hi;
    }
  }
  out[k] = s;
  return out;
}

}  // namespace eft

template <int N>
class MultiDouble {
  static_assert(N >= 1 && N <= 4, "supported expansions: 1..4 doubles");

 public:
  static constexpr int kComponents = N;
  static constexpr int kBits = 53 * N;

  constexpr MultiDouble() = default;
  constexpr MultiDouble(double x) : c_{x} {}  // NOLINT(implicit)
  constexpr MultiDouble(int x) : c_{static_cast<double>(x)} {}  // NOLINT

  template <int M>
  explicit MultiDouble(const MultiDouble<M>& other) {
    if constexpr (M <= N) {
      for (int i = 0; i < M; ++i) c_[i] = other[i];
    } else {
      std::array<double, M> tmp{};
      for (int i = 0; i < M; ++i) tmp[i] = other[i];
      c_ = eft::renormalize<N, M>(tmp);
    }
  }

  static MultiDouble from_components(const std::array<double, N>& c) {
    MultiDouble r;
    r.c_ = eft::renormalize<N, N>(c);
    return r;
  }

  /// Relative rounding unit of the arithmetic (measured, slightly pessimistic).
  static constexpr double epsilon() {
    // 2^-(52N+1) for an ideal expansion; the sloppy renormalisation loses a
    // couple of bits per component beyond the first.
    return N == 1 ? 0x1p-53 : N == 2 ? 0x1p-104 : N == 3 ? 0x1p-154 : 0x1p-204;
  }

  double operator[](int i) const { return c_[i]; }
  const std::array<double, N>& components() const { return c_; }

  double to_double() const {
    if constexpr (N == 1) {
      return c_[0];
    } else {
      return c_[0] + c_[1];
    }
  }
  explicit operator double() const { return to_double(); }

  MultiDouble operator-() const {
    MultiDouble r;
    for (int i = 0; i < N; ++i) r.c_[i] = -c_[i];
    return r;
  }

  friend MultiDouble operator+(const MultiDouble& a, const MultiDouble& b) {
    // Two-way merge by magnitude keeps the input to renormalize ordered.
    std::array<double, 2 * N> t{};
    int i = 0, j = 0;
    for (int k = 0; k < 2 * N; ++k) {
      if (j >= N || (i < N && std::fabs(a.c_[i]) >= std::fabs(b.c_[j]))) {
        t[k] = a.c_[i++];
      } else {
        t[k] = b.c_[j++];
      }
    }
    MultiDouble r;
    r.c_ = eft::renormalize<N, 2 * N>(t);
    return r;
  }
  friend MultiDouble operator-(const MultiDouble& a, const MultiDouble& b) {
    return a + (-b);
  }

  friend MultiDouble operator*(const MultiDouble& a, const MultiDouble& b) {
    if constexpr (N == 1) {
      return MultiDouble(a.c_[0] * b.c_[0]);
    } else {
      constexpr std::size_t kTerms = N * (N + 1) + N - 1;
      std::array<double, kTerms> t{};
      std::array<double, N * (N + 1) / 2> carry{};
      std::size_t n = 0, nc = 0, prev_begin = 0;
      for (int level = 0; level <= N; ++level) {
        const std::size_t carry_begin = nc;
        if (level < N) {
          for (int i = 0; i <= level; ++i) {
            double p, e;
            eft::two_prod(a.c_[i], b.c_[level - i], p, e);
            t[n++] = p;
            carry[nc++] = e;
          }
        } else {
          for (int i = 1; i < N; ++i) t[n++] = a.c_[i] * b.c_[N - i];
        }
        for (std::size_t k = prev_begin; k < carry_begin; ++k) t[n++] = carry[k];
        prev_begin = carry_begin;
      }
      MultiDouble r;
      r.c_ = eft::renormalize<N, kTerms>(t);
      return r;
    }
  }

  friend MultiDouble operator*(const MultiDouble& a, double d) {
    if constexpr (N == 1) {
      return MultiDouble(a.c_[0] * d);
    } else {
      std::array<double, 2 * N> t{};
      for (int i = 0; i < N; ++i) eft::two_prod(a.c_[i], d, t[2 * i], t[2 * i + 1]);
      MultiDouble r;
      r.c_ = eft::renormalize<N, 2 * N>(t);
      return r;
    }
  }
  friend MultiDouble operator*(double d, const MultiDouble& a) { return a * d; }

  friend MultiDouble operator/(const MultiDouble& a, const MultiDouble& b) {
    if constexpr (N == 1) {
      return MultiDouble(a.c_[0] / b.c_[0]);
    } else {
      std::array<double, N + 1> q{};
      MultiDouble r = a;
      for (int k = 0; k <= N; ++k) {
        q[k] = r.c_[0] / b.c_[0];
        r = r - b * q[k];
      }
      MultiDouble out;
      out.c_ = eft::renormalize<N, N + 1>(q);
      return out;
    }
  }
  friend MultiDouble operator/(const MultiDouble& a, double d) {
    if constexpr (N == 1) {
      return MultiDouble(a.c_[0] / d);
    } else {
      std::array<double, N + 1> q{};
      MultiDouble r = a;
      for (int k = 0; k <= N; ++k) {
        q[k] = r.c_[0] / d;
        r = r - MultiDouble(d) * q[k];
      }
      MultiDouble out;
      out.c_ = eft::renormalize<N, N + 1>(q);
      return out;
    }
  }

  MultiDouble& operator+=(const MultiDouble& o) { return *this = *this + o; }
  MultiDouble& operator-=(const MultiDouble& o) { return *this = *this - o; }
  MultiDouble& operator*=(const MultiDouble& o) { return *this = *this * o; }
  MultiDouble& operator/=(const MultiDouble& o) { return *this = *this / o; }

  friend bool operator<(const MultiDouble& a, const MultiDouble& b) {
    return (a - b).c_[0] < 0.0;
  }
  friend bool operator>(const MultiDouble& a, const MultiDouble& b) { return b < a; }
  friend bool operator<=(const MultiDouble& a, const MultiDouble& b) { return !(b < a); }
  friend bool operator>=(const MultiDouble& a, const MultiDouble& b) { return !(a < b); }
  friend bool operator==(const MultiDouble& a, const MultiDouble& b) {
    return (a - b).c_[0] == 0.0;
  }

  friend MultiDouble abs(const MultiDouble& a) { return a.c_[0] < 0.0 ? -a : a; }

  friend MultiDouble ldexp(const MultiDouble& a, int e) {
    MultiDouble r;
    for (int i = 0; i < N; ++i) r.c_[i] = std::ldexp(a.c_[i], e);
    return r;
  }

  friend MultiDouble sqrt(const MultiDouble& a) {
    if (a.c_[0] <= 0.0) {
      return a.c_[0] == 0.0 ? MultiDouble(0.0)
                            : MultiDouble(std::numeric_limits<double>::quiet_NaN());
    }
    MultiDouble s(std::sqrt(a.c_[0]));
    constexpr int kIterations = N == 1 ? 0 : N == 2 ? 2 : 3;
    for (int it = 0; it < kIterations; ++it) s = ldexp(s + a / s, -1);
    return s;
  }

  friend bool isfinite(const MultiDouble& a) { return std::isfinite(a.c_[0]); }

 private:
  std::array<double, N> c_{};
};

namespace detail {

template <int N>
MultiDouble<N> atan_inverse_integer(double n) {
  // atan(1/n) = sum_k (-1)^k / ((2k+1) n^(2k+1))
  const double n2 = n * n;
  MultiDouble<N> power = MultiDouble<N>(1.0) / n;
  MultiDouble<N> sum = power;
  const double stop = MultiDouble<N>::epsilon() * 1e-3;
  for (int k = 1; std::fabs(power[0]) > stop; ++k) {
    power = power / n2;
    const MultiDouble<N> term = power / static_cast<double>(2 * k + 1);
    sum = (k % 2 != 0) ? sum - term : sum + term;
  }
  return sum;
}

}  // namespace detail

/// pi to the full width of the expansion (Machin's formula, computed once).
template <int N>
const MultiDouble<N>& pi() {
  static const MultiDouble<N> value =
      detail::atan_inverse_integer<N>(5.0) * 16.0 -
      detail::atan_inverse_integer<N>(239.0) * 4.0;
  return value;
}

/// Simultaneous sine and cosine. Accurate for |x| up to ~1e6.
template <int N>
void sincos(const MultiDouble<N>& x, MultiDouble<N>& s, MultiDouble<N>& c) {
  const MultiDouble<N> half_pi = ldexp(pi<N>(), -1);
  const double j = std::nearbyint(x.to_double() / half_pi.to_double());
  const MultiDouble<N> r = x - half_pi * j;
  const MultiDouble<N> r2 = r * r;
  const double stop = MultiDouble<N>::epsilon() * 1e-2;

  MultiDouble<N> term = r;
  MultiDouble<N> sr = r;
  for (int k = 1; std::fabs(term[0]) > stop; ++k) {
    term = -(term * r2) / static_cast<double>((2 * k) * (2 * k + 1));
    sr += term;
  }
  term = MultiDouble<N>(1.0);
  MultiDouble<N> cr = term;
  for (int k = 1; std::fabs(term[0]) > stop; ++k) {
    term = -(term * r2) / static_cast<double>((2 * k - 1) * (2 * k));
    cr += term;
  }

  long quadrant = static_cast<long>(j) % 4;
  if (quadrant < 0) quadrant += 4;
  switch (quadrant) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

}  // namespace kleinzone::num
