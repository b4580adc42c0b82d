#pragma once

/// \file
/// Kummer's confluent hypergeometric function Phi(alpha, beta; z) for complex
/// arguments, and the two ramp solutions f_E, g_E built from it.
///
/// Three evaluation routes:
///  - Taylor series around 0 for |z| <= series_switch_radius;
///  - the two-sector large-|z| expansion, truncated at its smallest term
///    (double only);
///  - Taylor continuation of Kummer's equation z w'' + (beta - z) w' - alpha w = 0
///    outward along the ray through z, used when the large-|z| expansion cannot
///    meet the tolerance (large |alpha| / |z|).
/// Series and continuation are evaluated on the precision rung of the policy
/// and climb the ladder until the running error estimate meets the tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "kleinzone/errors.hpp"
#include "kleinzone/kinematics.hpp"
#include "kleinzone/numeric/complex.hpp"
#include "kleinzone/numeric/precision.hpp"

namespace kleinzone {

enum class ChfMethod { Series, Asymptotic, Continuation };

inline const char* to_string(ChfMethod m) {
  switch (m) {
    case ChfMethod::Series: return "series";
    case ChfMethod::Asymptotic: return "asymptotic";
    default: return "continuation";
  }
}

struct ChfResult {
  WideComplex value;
  int bits = 53;                ///< rung that produced the value
  double relative_error = 0.0;  ///< running error estimate
  ChfMethod method = ChfMethod::Series;

  std::complex<double> to_complex() const { return value.to_std(); }
};

namespace detail {

template <class R>
struct ChfEval {
  num::Complex<R> value;
  num::Complex<R> derivative;
  double relative_error = 0.0;
  ChfMethod method = ChfMethod::Series;
};

inline bool is_nonpositive_integer(std::complex<double> b) {
  return b.imag() == 0.0 && b.real() <= 0.0 && b.real() == std::floor(b.real());
}

/// log Gamma(z) up to a multiple of 2 pi i; only exponentiated differences are used.
inline std::complex<double> log_gamma(std::complex<double> z) {
  using C = std::complex<double>;
  if (z.real() < 0.5) {
    // Reflection. Poles are filtered out by the callers.
    return std::log(M_PI) - std::log(std::sin(M_PI * z)) - log_gamma(1.0 - z);
  }
  C shift = 0.0;
  while (z.real() < 12.0 || std::abs(z) < 14.0) {
    shift += std::log(z);
    z += 1.0;
  }
  // Stirling series with B_2 .. B_16.
  static constexpr double kCoef[] = {1.0 / 12.0,       -1.0 / 360.0,       1.0 / 1260.0,
                                     -1.0 / 1680.0,    1.0 / 1188.0,       -691.0 / 360360.0,
                                     1.0 / 156.0,      -3617.0 / 122400.0};
  const C inv = 1.0 / z;
  const C inv2 = inv * inv;
  C term = inv;
  C series = 0.0;
  for (double c : kCoef) {
    series += c * term;
    term *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * M_PI) + series - shift;
}

/// Sum of a large-|z| series truncated just before its smallest term.
/// `ratio(s)` returns t_{s+1}/t_s. Returns {sum, |first omitted term|}.
template <class Ratio>
std::pair<std::complex<double>, double> superasymptotic_sum(Ratio ratio, int max_terms) {
  std::complex<double> sum = 1.0, term = 1.0;
  double prev = 1.0;
  for (int s = 0; s < max_terms; ++s) {
    const std::complex<double> next = term * ratio(s);
    const double mag = std::abs(next);
    if (mag == 0.0) return {sum, 0.0};
    if (mag >= prev) return {sum, mag};
    if (mag < 1e-18 * std::abs(sum)) return {sum + next, mag * 1e-2};
    sum += next;
    term = next;
    prev = mag;
  }
  return {sum, prev};
}

/// Large-|z| expansion of Phi (DLMF 13.7.2) in double.
inline ChfEval<double> chf_asymptotic(std::complex<double> a, std::complex<double> b,
                                      std::complex<double> z, int max_terms) {
  using C = std::complex<double>;
  const C logz = std::log(z);
  const C lgb = log_gamma(b);
  const C ba = b - a;

  C first = 0.0, second = 0.0;
  double err = 0.0, scale = 0.0;
  if (!is_nonpositive_integer(a)) {
    auto [s1, e1] = superasymptotic_sum(
        [&](int s) { return (1.0 - a + double(s)) * (ba + double(s)) / (double(s + 1) * z); },
        max_terms);
    const C pre = std::exp(lgb - log_gamma(a) + z + (a - b) * logz);
    first = pre * s1;
    err += std::abs(pre) * e1;
    scale += std::abs(first);
  }
  if (!is_nonpositive_integer(ba)) {
    auto [s2, e2] = superasymptotic_sum(
        [&](int s) { return (a + double(s)) * (1.0 - ba + double(s)) / (-double(s + 1) * z); },
        max_terms);
    const double sector = z.imag() >= 0.0 ? 1.0 : -1.0;
    const C pre = std::exp(lgb - log_gamma(ba) + C(0.0, sector * M_PI) * a - a * logz);
    second = pre * s2;
    err += std::abs(pre) * e2;
    scale += std::abs(second);
  }
  ChfEval<double> out;
  const C value = first + second;
  out.value = num::Complex<double>::from(value);
  const double mag = std::abs(value);
  out.relative_error = mag > 0.0 ? (err + 64.0 * 0x1p-53 * scale) / mag
                                 : std::numeric_limits<double>::infinity();
  out.method = ChfMethod::Asymptotic;
  return out;
}

/// Taylor series of Phi around 0 at the working precision of R, with Phi'(z).
template <class R>
ChfEval<R> chf_series(const num::Complex<R>& a, const num::Complex<R>& b, const num::Complex<R>& z,
                      int max_terms) {
  using C = num::Complex<R>;
  const double eps = num::RealTraits<R>::epsilon();
  const bool real_b = num::to_double(b.im) == 0.0;
  const double az = abs_d(z);
  C term(R(1.0));
  C sum(R(1.0));
  C dsum{};
  double bound = 2.0;  // sum of (3k+2)|t_k|
  int k = 0;
  for (;; ++k) {
    if (k >= max_terms) {
      throw PrecisionError("hypergeometric series did not converge within max_terms",
                           num::RealTraits<R>::bits, std::abs(abs_d(term)));
    }
    const R kk(static_cast<double>(k));
    const R k1(static_cast<double>(k + 1));
    C num_k = (a + C(kk)) * z;
    if (real_b) {
      term = term * num_k / ((b.re + kk) * k1);
    } else {
      term = term * num_k / ((b + C(kk)) * C(k1));
    }
    const double mag = abs_d(term);
    sum += term;
    dsum += term * k1;
    bound += (3.0 * (k + 1) + 2.0) * mag;
    if (mag == 0.0) break;
    const double smag = abs_d(sum);
    const double ratio =
        std::abs((a.to_std() + double(k + 1)) / (b.to_std() + double(k + 1))) * az / (k + 2);
    if (ratio < 0.5 && mag <= 0.1 * eps * smag) break;
  }
  ChfEval<R> out;
  out.value = sum;
  out.derivative = az == 0.0 ? a / b : dsum / z;
  const double smag = abs_d(sum);
  out.relative_error =
      smag > 0.0 ? eps * bound / smag : std::numeric_limits<double>::infinity();
  out.method = ChfMethod::Series;
  return out;
}

using Mat2 = std::array<std::complex<double>, 4>;  // row-major

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

inline double spectral_norm(const Mat2& m) {
  const double fro = std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
  const double det = std::abs(m[0] * m[3] - m[1] * m[2]);
  return std::sqrt(0.5 * (fro + std::sqrt(std::max(0.0, fro * fro - 4.0 * det * det))));
}

/// One-step map (w, w') -> (w(z0+h), w'(z0+h)) of Kummer's equation, from the
/// same Taylor recurrence in double. Used only for error bookkeeping.
inline Mat2 step_propagator(std::complex<double> a, std::complex<double> b,
                                   std::complex<double> z0, std::complex<double> step, int terms) {
  using Cd = std::complex<double>;
  const Cd hz = step / z0, h2z = step * step / z0;
  Cd col[2][2];
  for (int j = 0; j < 2; ++j) {
    Cd d0 = j == 0 ? 1.0 : 0.0;
    Cd d1 = j == 0 ? 0.0 : step;
    Cd val = d0 + d1, dval = d1;
    for (int k = 0; k < terms; ++k) {
      const Cd d2 = ((a + double(k)) * d0 * h2z - double(k + 1) * (double(k) + b - z0) * d1 * hz) /
                    double((k + 1) * (k + 2));
      val += d2;
      dval += d2 * double(k + 2);
      d0 = d1;
      d1 = d2;
    }
    col[j][0] = val;
    col[j][1] = dval / step;
  }
  return {col[0][0], col[1][0], col[0][1], col[1][1]};
}

/// Continue (w, w') from an interior point to z along the ray through z by
/// local Taylor steps of Kummer's equation.
template <class R>
ChfEval<R> chf_continue(const num::Complex<R>& a, const num::Complex<R>& b,
                        const num::Complex<R>& z, double start_radius, int max_terms) {
  using C = num::Complex<R>;
  const double eps = num::RealTraits<R>::epsilon();
  const std::complex<double> zd = z.to_std();
  const std::complex<double> ad = a.to_std(), bd = b.to_std();
  const double r = std::abs(zd);
  const std::complex<double> dir = zd / r;

  constexpr double kMaxStep = 4.0;
  double rc = std::min(start_radius, r);
  C z0 = C::from(dir * rc);
  ChfEval<R> start = chf_series(a, b, z0, max_terms);
  C w = start.value, dw = start.derivative;
  // Local errors of the pair (w, w') and the step maps, combined at the end as
  // sum_i |P_n ... P_{i+1}| delta_i.
  std::vector<double> local{start.relative_error * std::hypot(abs_d(w), abs_d(dw))};
  std::vector<Mat2> maps;

  while (true) {
    const double remaining = r - rc;
    if (remaining <= 0.0) break;
    const double h = std::min({kMaxStep, 0.5 * rc, remaining});
    const bool last = h == remaining;
    const C step = last ? z - z0 : C::from(dir * h);
    const double hmag = abs_d(step);

    const C hz = step / z0;
    const C h2z = step * step / z0;
    C d0 = w, d1 = dw * step;
    C val = d0 + d1, dval = d1;
    double bound = 2.0 * abs_d(d0) + 5.0 * abs_d(d1);
    double dbound = 5.0 * abs_d(d1);
    int k = 0;
    for (;; ++k) {
      if (k >= max_terms) {
        throw PrecisionError("hypergeometric continuation did not converge within max_terms",
                             num::RealTraits<R>::bits, 1.0);
      }
      const R kk(static_cast<double>(k));
      const R k1(static_cast<double>(k + 1));
      const R k2(static_cast<double>(k + 2));
      const C d2 = ((a + C(kk)) * d0 * h2z - C(k1) * (C(kk) + b - z0) * d1 * hz) / (k1 * k2);
      const double mag = abs_d(d2);
      val += d2;
      dval += d2 * k2;
      bound += (3.0 * (k + 2) + 2.0) * mag;
      dbound += (k + 2) * (3.0 * (k + 2) + 2.0) * mag;
      if (mag + abs_d(d1) <= 0.1 * eps * abs_d(val) && k >= 2) break;
      if (mag == 0.0 && abs_d(d1) == 0.0) break;
      d0 = d1;
      d1 = d2;
    }
    maps.push_back(step_propagator(ad, bd, z0.to_std(), step.to_std(), k + 1));
    local.push_back(eps * std::hypot(bound, dbound / hmag));
    w = val;
    dw = dval / step;
    z0 = z0 + step;
    if (last) break;
    rc += h;
  }
  double err = local.back();
  Mat2 tail{1.0, 0.0, 0.0, 1.0};
  for (std::size_t i = maps.size(); i-- > 0;) {
    tail = mat_mul(tail, maps[i]);
    err += spectral_norm(tail) * local[i];
  }
  ChfEval<R> out;
  out.value = w;
  out.derivative = dw;
  const double wmag = abs_d(w);
  out.relative_error = wmag > 0.0 ? err / wmag : std::numeric_limits<double>::infinity();
  out.method = ChfMethod::Continuation;
  return out;
}

/// Phi at the working precision of R; `tol` selects whether the large-|z|
/// expansion is good enough (double rung only).
template <class R>
ChfEval<R> chf_at(const num::Complex<R>& a, const num::Complex<R>& b, const num::Complex<R>& z,
                  const PrecisionPolicy& policy, double tol) {
  const double r = abs_d(z);
  if (r <= policy.series_switch_radius) return chf_series(a, b, z, policy.max_terms);
  if constexpr (std::is_same_v<R, double>) {
    ChfEval<double> asy = chf_asymptotic(a.to_std(), b.to_std(), z.to_std(), policy.max_terms);
    if (asy.relative_error <= tol) return asy;
  }
  return chf_continue(a, b, z, std::min(8.0, policy.series_switch_radius), policy.max_terms);
}

/// Run `attempt.template operator()<R>()` on successive rungs from `start_bits`
/// until its relative_error is within tol.
template <class F>
auto escalate(int start_bits, double tol, F&& attempt) {
  int bits = start_bits;
  for (;;) {
    auto result = with_rung(bits, attempt);
    if (result.relative_error <= tol) return result;
    const int next = next_rung(bits);
    if (next == 0) {
      throw PrecisionError("tolerance not reachable at " + std::to_string(bits) + " bits", bits,
                           result.relative_error);
    }
    bits = next;
  }
}

}  // namespace detail

/// Phi(alpha, beta; z) to relative error policy.tail_tolerance.
inline ChfResult chf(std::complex<double> alpha, std::complex<double> beta, std::complex<double> z,
                     const PrecisionPolicy& policy = {}) {
  policy.validate();
  if (detail::is_nonpositive_integer(beta)) {
    throw SingularError("pole of Phi: beta is a nonpositive integer");
  }
  const double tol = policy.tail_tolerance;
  return detail::escalate(policy.significand_bits, tol, [&]<class R>() {
    using C = num::Complex<R>;
    auto e = detail::chf_at<R>(C::from(alpha), C::from(beta), C::from(z), policy, tol);
    ChfResult out;
    out.value = to_wide(e.value);
    out.bits = num::RealTraits<R>::bits;
    out.relative_error = e.relative_error;
    out.method = e.method;
    return out;
  });
}

namespace detail {

inline void require_ramp(const PhysParams& params) {
  params.validate();
  if (params.ell == 0.0 || params.U == 0.0) {
    throw DomainError("degenerate ramp (ell = 0 or U = 0): use the rectangular-step path");
  }
}

template <class R>
R xi_argument(const R& x, const PhysParams& params) {
  const R U(params.U), ell(params.ell), E(params.E);
  return (U * x - E * ell) / num::sqrt_r(U * ell);
}

/// Sauter's (f, g) where f = e^{i xi^2/2} Phi(alpha, 1/2; -i xi^2) and
/// g = -m sqrt(ell/U) xi e^{i xi^2/2} Phi(alpha+1, 3/2; -i xi^2), alpha = i m^2 ell / (4U).
template <class R>
struct BasisEval {
  num::Complex<R> f, g;
  double relative_error = 0.0;
};

template <class R>
BasisEval<R> sauter_basis_at(const R& x, const PhysParams& params, const PrecisionPolicy& policy,
                             double tol) {
  using C = num::Complex<R>;
  const R m(params.m), U(params.U), ell(params.ell);
  const R xi = xi_argument(x, params);
  const R xi2 = xi * xi;
  const C alpha(R(0.0), m * m * ell / (U * R(4.0)));
  const C z(R(0.0), -xi2);
  const C phase = num::expi(xi2 / R(2.0));
  const auto phi1 = chf_at<R>(alpha, C(R(0.5)), z, policy, tol);
  const auto phi2 = chf_at<R>(alpha + C(R(1.0)), C(R(1.5)), z, policy, tol);
  BasisEval<R> out;
  out.f = phase * phi1.value;
  out.g = phase * phi2.value * (-(m * num::sqrt_r(ell / U) * xi));
  out.relative_error = phi1.relative_error + phi2.relative_error +
                       16.0 * num::RealTraits<R>::epsilon() * (1.0 + std::abs(num::to_double(xi2)));
  return out;
}

}  // namespace detail

/// xi(x) = sqrt(U/ell) (x - E ell / U).
inline double xi_argument(double x, const PhysParams& params) {
  detail::require_ramp(params);
  return detail::xi_argument(x, params);
}

struct SauterBasisValue {
  WideComplex f, g;
  double x = 0.0;
  int bits = 53;
  double relative_error = 0.0;

  std::complex<double> f_value() const { return f.to_std(); }
  std::complex<double> g_value() const { return g.to_std(); }
};

/// (f_E(x), g_E(x)) on the ramp 0 <= x <= ell.
inline SauterBasisValue sauter_basis(double x, const PhysParams& params,
                                     const PrecisionPolicy& policy = {}) {
  policy.validate();
  detail::require_ramp(params);
  if (!(x >= 0.0 && x <= params.ell)) throw DomainError("position outside the ramp [0, ell]");
  const double tol = policy.tail_tolerance;
  return detail::escalate(policy.significand_bits, tol, [&]<class R>() {
    auto e = detail::sauter_basis_at<R>(R(x), params, policy, tol);
    SauterBasisValue out;
    out.f = to_wide(e.f);
    out.g = to_wide(e.g);
    out.x = x;
    out.bits = num::RealTraits<R>::bits;
    out.relative_error = e.relative_error;
    return out;
  });
}

}  // namespace kleinzone
