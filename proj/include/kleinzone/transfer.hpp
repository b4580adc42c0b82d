#pragma once

/// \file
/// 2x2 transfer matrices for rectangular and linear-ramp (Sauter) steps and
/// the space-inversion-symmetric barrier built from two of them.
///
/// Convention: left of a step the solution is alpha u(p) e^{ipx} + beta u(-p) e^{-ipx},
/// right of it gamma u(q) e^{iqx} + delta u(-q) e^{-iqx}, with plane waves referred
/// to the global origin, and (gamma, delta) = M (alpha, beta). Charge conjugation
/// forces M = [[a, b], [b*, a*]], so only (a, b) is stored.
///
/// The step ramp occupies [0, ell]. The barrier rises on [-(ell+L), -L], is flat
/// on [-L, L] and falls on [L, L+ell].

#include <cmath>
#include <complex>
#include <limits>

#include "kleinzone/errors.hpp"
#include "kleinzone/kinematics.hpp"
#include "kleinzone/numeric/complex.hpp"
#include "kleinzone/numeric/precision.hpp"
#include "kleinzone/specfun.hpp"

namespace kleinzone {

enum class StepShape { Rect, Sauter };
enum class Engine { Analytic, Numeric };

inline const char* to_string(StepShape s) { return s == StepShape::Rect ? "rect" : "sauter"; }
inline const char* to_string(Engine e) { return e == Engine::Analytic ? "analytic" : "numeric"; }

struct StepMatrix {
  WideComplex a, b;
  Model model = Model::Dirac;
  PhysParams params;
  StepShape shape = StepShape::Rect;
  Engine engine = Engine::Analytic;
  int bits = 53;                ///< rung that produced (a, b)
  double relative_error = 0.0;  ///< estimate for a and b
  /// False when |a|^2 - |b|^2 is a cancellation below the attainable precision;
  /// (a, b) are still accurate componentwise.
  bool det_resolved = true;

  std::complex<double> a_value() const { return a.to_std(); }
  std::complex<double> b_value() const { return b.to_std(); }

  /// (p/q) D, the exact value of |a|^2 - |b|^2.
  double det() const {
    return momentum_p(params) / momentum_q(params) * d_ratio(params, model);
  }

  /// (|a|^2 - |b|^2 - det) / |det| evaluated in wide arithmetic.
  double det_residual() const {
    const auto mom = detail::momenta<Wide>(params, model);
    return ((norm(a) - norm(b) - mom.det) / abs(mom.det)).to_double();
  }
};

struct BarrierMatrix {
  WideComplex A, B;

  std::complex<double> A_value() const { return A.to_std(); }
  std::complex<double> B_value() const { return B.to_std(); }
  /// 1/|A|^2
  double transmission() const { return 1.0 / (1.0 + std::norm(B_value())); }
  double det_residual() const { return (norm(A) - norm(B) - Wide(1.0)).to_double(); }
};

struct PhasePair {
  double phi_a = 0.0;  ///< arg a in (-pi, pi]
  double phi_b = 0.0;  ///< arg b in (-pi, pi]
};

/// diag(e^{ik shift}, e^{-ik shift})
struct TranslationMatrix {
  std::complex<double> plus, minus;
};

inline TranslationMatrix translation_matrix(double k, double shift) {
  const double s = std::sin(k * shift), c = std::cos(k * shift);
  return {{c, s}, {c, -s}};
}

inline TranslationMatrix compose(const TranslationMatrix& x, const TranslationMatrix& y) {
  return {x.plus * y.plus, x.minus * y.minus};
}

/// a = (1 + (p/q) D)/2, b = (1 - (p/q) D)/2.
inline StepMatrix rect_step_matrix(const PhysParams& params, Model model) {
  require_klein_zone(params);
  const auto mom = detail::momenta<Wide>(params, model);
  StepMatrix out;
  out.a = WideComplex((Wide(1.0) + mom.det) * 0.5);
  out.b = WideComplex((Wide(1.0) - mom.det) * 0.5);
  out.model = model;
  out.params = params;
  out.shape = StepShape::Rect;
  out.bits = 212;
  out.relative_error = 4.0 * Wide::epsilon();
  return out;
}

namespace detail {

template <class R>
struct SauterAB {
  num::Complex<R> a, b;
  double relative_error = 0.0;
};

/// Closed-form (a, b) of the Dirac Sauter step at the working precision of R.
template <class R>
SauterAB<R> sauter_ab(const PhysParams& params, const PrecisionPolicy& policy, double tol) {
  using C = num::Complex<R>;
  const R E(params.E), U(params.U), m(params.m), ell(params.ell);
  const auto mom = momenta<R>(params, Model::Dirac);
  const auto b0 = sauter_basis_at<R>(R(0.0), params, policy, tol);
  const auto bl = sauter_basis_at<R>(ell, params, policy, tol);

  const C Rv = b0.f * conj(bl.f) - conj(b0.g) * bl.g;
  const C Sv = b0.f * conj(bl.g) - conj(b0.g) * bl.f;
  const R Pp = E + m + mom.p, Pm = E + m - mom.p;
  const R Qp = E - U + m + mom.q, Qm = E - U + m - mom.q;
  const C pre = num::expi(-(mom.q * ell)) / (R(4.0) * mom.q * (E + m));
  const C i(R(0.0), R(1.0));

  const C ta[4] = {Rv * (Pp * Qp), conj(Rv) * (Pm * Qm), i * Sv * (Pp * Qm), i * conj(Sv) * (Pm * Qp)};
  const C tb[4] = {Rv * (Pm * Qp), conj(Rv) * (Pp * Qm), i * Sv * (Pm * Qm), i * conj(Sv) * (Pp * Qp)};
  SauterAB<R> out;
  out.a = pre * (ta[0] - ta[1] + ta[2] + ta[3]);
  out.b = pre * (tb[0] - tb[1] + tb[2] + tb[3]);

  double sa = 0.0, sb = 0.0;
  for (int k = 0; k < 4; ++k) {
    sa += abs_d(ta[k]);
    sb += abs_d(tb[k]);
  }
  const double pre_mag = abs_d(pre);
  const double basis = 2.0 * (b0.relative_error + bl.relative_error);
  const double eps = 64.0 * num::RealTraits<R>::epsilon();
  out.relative_error = (basis + eps) * pre_mag * std::max(sa / abs_d(out.a), sb / abs_d(out.b));
  return out;
}

}  // namespace detail

/// Dirac step with a linear ramp of width ell.
///
/// (a, b) are evaluated to policy.tail_tolerance. With resolve_det, and when
/// reachable on the ladder, accuracy is raised until |a|^2 - |b|^2 is resolved
/// to the same relative tolerance; otherwise det_resolved is cleared.
/// Transmission only needs |a|, |b| and arg(ab), so it skips that.
inline StepMatrix sauter_step_matrix(const PhysParams& params, const PrecisionPolicy& policy = {},
                                     bool resolve_det = true) {
  policy.validate();
  require_klein_zone(params);
  if (params.ell == 0.0) return rect_step_matrix(params, Model::Dirac);
  const double kappa = params.m * params.m * params.ell / params.U;
  if (M_PI * kappa / 2.0 > 700.0) {
    throw OverflowError("Sauter step matrix elements exceed the double exponent range");
  }
  const double tol = policy.tail_tolerance;
  // Deepest accuracy the ladder can deliver for (a, b).
  constexpr double kFloor = 1e-58;
  const double det = std::fabs(momentum_p(params) / momentum_q(params) *
                               d_ratio(params, Model::Dirac));

  double target = tol;
  int bits = policy.significand_bits;
  for (;;) {
    StepMatrix out = with_rung(bits, [&]<class R>() {
      auto ab = detail::sauter_ab<R>(params, policy, target);
      StepMatrix sm;
      sm.a = to_wide(ab.a);
      sm.b = to_wide(ab.b);
      sm.relative_error = ab.relative_error;
      return sm;
    });
    const double scale = std::norm(out.a_value()) + std::norm(out.b_value());
    const double det_target = resolve_det ? tol * det / (2.0 * scale) : 0.0;
    const double want = det_target >= kFloor ? std::min(tol, det_target) : tol;
    out.model = Model::Dirac;
    out.params = params;
    out.shape = StepShape::Sauter;
    out.bits = bits;
    if (out.relative_error <= want) {
      out.det_resolved = out.relative_error <= det_target;
      return out;
    }
    target = want;
    const int next = next_rung(bits);
    if (next == 0) {
      if (out.relative_error <= tol) {
        out.det_resolved = false;
        return out;
      }
      throw PrecisionError("Sauter step matrix: tolerance not reachable", bits,
                           out.relative_error);
    }
    bits = next;
  }
}

inline StepMatrix step_matrix(const PhysParams& params, Model model, StepShape shape,
                              const PrecisionPolicy& policy = {}, bool resolve_det = true) {
  if (shape == StepShape::Rect || params.ell == 0.0) return rect_step_matrix(params, model);
  if (model == Model::KleinGordon) {
    throw UsageError(
        "no analytic Klein-Gordon ramp solution; use the numeric engine for this case");
  }
  return sauter_step_matrix(params, policy, resolve_det);
}

namespace detail {

inline void require_same_step(const StepMatrix& step, const PhysParams& params) {
  const PhysParams& s = step.params;
  if (s.m != params.m || s.E != params.E || s.U != params.U || s.ell != params.ell) {
    throw UsageError("barrier parameters do not match the step matrix");
  }
  if (!(params.L >= 0.0)) throw DomainError("barrier half-width must be non-negative");
}

}  // namespace detail

/// Closed-form barrier coefficients
///   A = [a^2 e^{2i(q-p)s} - b*^2 e^{-2i(q+p)s}] / det,
///   B = [a b e^{2iqs} - a* b* e^{-2iqs}] / det,   s = ell + L,
/// with det = (p/q) D taken from the kinematics rather than from |a|^2 - |b|^2.
inline BarrierMatrix barrier_matrix(const StepMatrix& step, const PhysParams& params) {
  detail::require_same_step(step, params);
  const auto mom = detail::momenta<Wide>(params, step.model);
  if (mom.det == Wide(0.0)) throw SingularError("singular step: |a|^2 - |b|^2 = 0");
  const Wide s = Wide(params.ell) + Wide(params.L);
  const Wide two(2.0);
  const WideComplex& a = step.a;
  const WideComplex& b = step.b;
  const WideComplex eq = num::expi(two * mom.q * s);
  const WideComplex ep = num::expi(-(two * mom.p * s));
  const WideComplex z = a * b * eq;
  BarrierMatrix out;
  out.A = (a * a * eq * ep - conj(b) * conj(b) * conj(eq) * ep) / mom.det;
  out.B = (z - conj(z)) / mom.det;
  return out;
}

/// Same coefficients from explicit products: M_bar = M_right M_left with
/// M_left = T_q(s) M T_p(-s) and M_right = T_p(-s) (sigma1 M^{-1} sigma1) T_q(s).
inline BarrierMatrix composed_barrier_matrix(const StepMatrix& step, const PhysParams& params) {
  detail::require_same_step(step, params);
  using M2 = std::array<WideComplex, 4>;
  auto mul = [](const M2& x, const M2& y) -> M2 {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
  };
  auto diag = [](const WideComplex& d) -> M2 { return {d, WideComplex(), WideComplex(), conj(d)}; };
  const auto mom = detail::momenta<Wide>(params, step.model);
  const Wide s = Wide(params.ell) + Wide(params.L);
  const WideComplex& a = step.a;
  const WideComplex& b = step.b;
  const M2 m = {a, b, conj(b), conj(a)};
  const Wide det = norm(a) - norm(b);
  // sigma1 M^{-1} sigma1 = [[a, -b*], [-b, a*]] / det
  const M2 n = {a / det, -conj(b) / det, -b / det, conj(a) / det};
  const M2 tq = diag(num::expi(mom.q * s));
  const M2 tp = diag(num::expi(-(mom.p * s)));
  const M2 left = mul(tq, mul(m, tp));
  const M2 right = mul(tp, mul(n, tq));
  const M2 bar = mul(right, left);
  return {bar[0], bar[1]};
}

/// Principal arguments of a and b.
inline PhasePair phases(const StepMatrix& step) {
  const auto a = step.a_value(), b = step.b_value();
  if (a == 0.0 || b == 0.0) {
    throw DomainError("undefined phase: zero modulus (use the direct 1/|A|^2 path)");
  }
  auto principal = [](std::complex<double> z) {
    const double t = std::arg(z);
    return t == -M_PI ? M_PI : t;  // -0 imaginary parts
  };
  return {principal(a), principal(b)};
}

}  // namespace kleinzone
