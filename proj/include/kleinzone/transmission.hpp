#pragma once

/// \file
/// Transmission coefficients of steps and symmetric barriers, the
/// sin^2 -> 1/2 energy average, the large-ell Sauter asymptotics and the
/// location of transmission resonances.
///
/// Every coefficient is carried both linearly and as log10 so that the
/// strongly suppressed ramp regime (T ~ 1e-90 and below) stays representable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "kleinzone/errors.hpp"
#include "kleinzone/kinematics.hpp"
#include "kleinzone/oracle.hpp"
#include "kleinzone/transfer.hpp"

namespace kleinzone {

enum class Structure { RectStep, SauterStep, RectBarrier, SauterBarrier };

inline const char* to_string(Structure s) {
  switch (s) {
    case Structure::RectStep: return "rect_step";
    case Structure::SauterStep: return "sauter_step";
    case Structure::RectBarrier: return "rect_barrier";
    case Structure::SauterBarrier: return "sauter_barrier";
  }
  return "?";
}

struct TransmissionOptions {
  PrecisionPolicy policy;
  Engine engine = Engine::Analytic;
  double oracle_tol = 1e-10;
  /// Largest m * ell the ODE engine accepts; longer ramps are opt-in.
  double oracle_max_ell = 10.0;
};

struct TransmissionPoint {
  double E = 0.0;
  double T = 0.0;        ///< 0 with an "underflow" flag when below the double range
  double log10_T = 0.0;  ///< always set
  std::optional<double> T_avg;
  std::optional<double> log10_T_avg;
  Model model = Model::Dirac;
  Structure shape = Structure::RectStep;
  Engine engine = Engine::Analytic;
  std::vector<std::string> flags;
};

namespace detail {

constexpr double kLog10Min = -307.0;

inline double from_log10(double lg) { return lg < kLog10Min ? 0.0 : std::pow(10.0, lg); }

inline void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

inline Structure structure(StepShape shape, double ell, bool barrier) {
  const bool rect = shape == StepShape::Rect || ell == 0.0;
  if (barrier) return rect ? Structure::RectBarrier : Structure::SauterBarrier;
  return rect ? Structure::RectStep : Structure::SauterStep;
}

/// The rectangular shape has no ramp whatever ell says.
inline PhysParams normalized(const PhysParams& params, StepShape shape) {
  PhysParams p = params;
  if (shape == StepShape::Rect) p.ell = 0.0;
  return p;
}

inline void require_oracle_range(const PhysParams& params, const TransmissionOptions& opt) {
  if (params.m * params.ell > opt.oracle_max_ell) {
    throw DomainError("ramp too long for the ODE engine (m*ell above oracle_max_ell)");
  }
}

/// Step matrix on the requested engine. The Klein-Gordon ramp always goes numeric.
inline StepMatrix step_for(const PhysParams& params, Model model, StepShape shape,
                           const TransmissionOptions& opt, std::vector<std::string>& flags) {
  require_klein_zone(params);
  const bool ramp = shape == StepShape::Sauter && params.ell > 0.0;
  if (opt.engine == Engine::Numeric || (ramp && model == Model::KleinGordon)) {
    if (opt.engine == Engine::Analytic) add_flag(flags, "numeric");
    require_oracle_range(params, opt);
    return numeric_step_matrix(params, model, opt.oracle_tol);
  }
  return step_matrix(params, model, shape, opt.policy, false);
}

/// T and R = 1 - T of a step, each accurate in the relative sense.
struct StepCoefficients {
  double log10_T = 0.0;
  double log10_R = 0.0;
};

inline StepCoefficients step_coefficients(const StepMatrix& step) {
  const double det = std::fabs(step.det());
  const double la = std::log10(std::abs(step.a_value()));
  const double lb = std::log10(std::abs(step.b_value()));
  StepCoefficients c;
  if (step.shape == StepShape::Rect && step.engine == Engine::Analytic) {
    // T = 4|d| / (1 + |d|)^2, R = ((1 - |d|) / (1 + |d|))^2
    c.log10_T = std::log10(4.0 * det) - 2.0 * std::log10(1.0 + det);
    c.log10_R = 2.0 * (std::log10(std::fabs(1.0 - det)) - std::log10(1.0 + det));
  } else if (step.model == Model::KleinGordon) {
    c.log10_T = std::log10(det) - 2.0 * la;
    c.log10_R = 2.0 * (lb - la);
  } else {
    c.log10_T = std::log10(det) - 2.0 * lb;
    c.log10_R = 2.0 * (la - lb);
  }
  c.log10_T = std::min(c.log10_T, 0.0);
  c.log10_R = std::min(c.log10_R, 0.0);
  return c;
}

/// log10 of 4 (1 - T) / T^2, the coefficient of the sin^2 term.
inline double log10_envelope(const StepCoefficients& c) {
  return std::log10(4.0) + c.log10_R - 2.0 * c.log10_T;
}

/// log10 of 1 / (1 + 10^lx).
inline double log10_inverse_one_plus(double lx) {
  if (lx > 30.0) return -lx;
  return -std::log1p(std::pow(10.0, lx)) / std::log(10.0);
}

inline void finish(TransmissionPoint& pt, double log10_T) {
  pt.log10_T = std::min(log10_T, 0.0);
  pt.T = from_log10(pt.log10_T);
  if (pt.T == 0.0) add_flag(pt.flags, "underflow");
}

inline double log10_averaged(const StepCoefficients& c) {
  return log10_inverse_one_plus(log10_envelope(c) - std::log10(2.0));
}

inline void set_average(TransmissionPoint& pt, const StepCoefficients& c) {
  pt.log10_T_avg = std::min(log10_averaged(c), 0.0);
  pt.T_avg = from_log10(*pt.log10_T_avg);
  if (*pt.T_avg == 0.0) add_flag(pt.flags, "underflow");
}

inline TransmissionPoint point(const PhysParams& params, Model model, Structure shape,
                               Engine engine) {
  TransmissionPoint pt;
  pt.E = params.E;
  pt.model = model;
  pt.shape = shape;
  pt.engine = engine;
  return pt;
}

inline TransmissionPoint analytic_barrier(const StepMatrix& step, const PhysParams& params,
                                          Structure st) {
  const BarrierMatrix bar = barrier_matrix(step, params);
  auto pt = point(params, step.model, st, Engine::Analytic);
  const double absB = std::abs(bar.B_value());
  finish(pt, absB == 0.0 ? 0.0 : log10_inverse_one_plus(2.0 * std::log10(absB)));
  return pt;
}

}  // namespace detail

/// Step transmission: (p/q)/|a|^2 for Klein-Gordon, -(p/q)D/|b|^2 for Dirac.
inline TransmissionPoint t_step(const PhysParams& raw, Model model, StepShape shape,
                                const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  std::vector<std::string> flags;
  const StepMatrix step = detail::step_for(params, model, shape, opt, flags);
  auto pt = detail::point(params, model, detail::structure(shape, params.ell, false), step.engine);
  pt.flags = std::move(flags);
  detail::finish(pt, detail::step_coefficients(step).log10_T);
  return pt;
}

/// Barrier transmission 1 / (1 + |B|^2) from the closed-form barrier matrix
/// (or from direct integration of the whole barrier on the numeric engine).
inline TransmissionPoint t_barrier(const PhysParams& raw, Model model, StepShape shape,
                                   const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  const Structure st = detail::structure(shape, params.ell, true);
  const bool ramp = st == Structure::SauterBarrier;
  if (opt.engine == Engine::Numeric || (ramp && model == Model::KleinGordon)) {
    require_klein_zone(params);
    detail::require_oracle_range(params, opt);
    auto pt = detail::point(params, model, st, Engine::Numeric);
    if (opt.engine == Engine::Analytic) detail::add_flag(pt.flags, "numeric");
    const auto nm = numeric_transfer_matrix(PotentialProfile::barrier(params), params.E, params.m,
                                            model, opt.oracle_tol);
    for (const auto& w : nm.warnings) detail::add_flag(pt.flags, w);
    const double lb = std::log10(std::abs(nm.b()));
    detail::finish(pt, detail::log10_inverse_one_plus(2.0 * lb));
    return pt;
  }
  return detail::analytic_barrier(step_matrix(params, model, shape, opt.policy, false), params, st);
}

/// Same coefficient from the phase form
///   T = 1 / (1 + 4 (1 - T_step) / T_step^2 * sin^2(2 q (ell + L) + phi_a + phi_b)).
/// A transparent step (b = 0) has no phase; T = 1 then.
inline TransmissionPoint t_barrier_phase_form(const PhysParams& raw, Model model,
                                              StepShape shape,
                                              const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  std::vector<std::string> flags;
  const StepMatrix step = detail::step_for(params, model, shape, opt, flags);
  auto pt = detail::point(params, model, detail::structure(shape, params.ell, true), step.engine);
  pt.flags = std::move(flags);
  if (step.b_value() == 0.0) {
    detail::finish(pt, 0.0);
    return pt;
  }
  const auto ph = phases(step);
  const double s = params.ell + params.L;
  const double angle = 2.0 * momentum_q(params) * s + ph.phi_a + ph.phi_b;
  const double sn = std::fabs(std::sin(angle));
  const auto c = detail::step_coefficients(step);
  if (sn == 0.0) {
    detail::finish(pt, 0.0);
    return pt;
  }
  detail::finish(pt, detail::log10_inverse_one_plus(detail::log10_envelope(c) + 2.0 * std::log10(sn)));
  return pt;
}

/// Barrier point carrying the energy average
///   T_avg = 1 / (1 + 2 (1 - T_step) / T_step^2) -> T_step^2 / 2 for T_step << 1
/// next to the unaveraged T.
inline TransmissionPoint t_averaged(const PhysParams& raw, Model model, StepShape shape,
                                    const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  std::vector<std::string> flags;
  const StepMatrix step = detail::step_for(params, model, shape, opt, flags);
  auto pt = step.engine == Engine::Analytic
                ? detail::analytic_barrier(step, params, detail::structure(shape, params.ell, true))
                : t_barrier(params, model, shape, opt);
  for (const auto& f : flags) detail::add_flag(pt.flags, f);
  detail::set_average(pt, detail::step_coefficients(step));
  return pt;
}

/// Mean of t_barrier over [E - width/2, E + width/2] (composite Simpson rule,
/// `intervals` even). Validation companion of t_averaged.
inline double t_window_average(const PhysParams& raw, Model model, StepShape shape,
                               double width, int intervals = 2000,
                               const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  if (!(width > 0.0) || intervals < 2) throw UsageError("window width and sample count must be positive");
  if (intervals % 2) ++intervals;
  PhysParams lo = params, hi = params;
  lo.E -= width / 2;
  hi.E += width / 2;
  if (!in_klein_zone(lo) || !in_klein_zone(hi)) {
    throw DomainError("averaging window leaves the Klein zone");
  }
  const double h = width / intervals;
  double sum = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    PhysParams p = params;
    p.E = lo.E + h * k;
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * t_barrier(p, model, shape, opt).T;
  }
  return sum * h / 3.0 / width;
}

struct AsymptoticReport {
  double log10_exponent = 0.0;      ///< log10 e^{-pi m^2 ell / U}
  double prefactor = 0.0;           ///< q (U - E + q) / (p (E + p))
  double log10_T_step = 0.0;        ///< log10 (prefactor * exponential)
  double log10_T_barrier_avg = 0.0; ///< log10 (T_step^2 / 2)
  double field_ratio = 0.0;         ///< (U / ell) / (2 m^2); should be << 1
  bool restriction_satisfied = false;
  std::vector<std::string> warnings;
};

/// Field-strength ratio below which the weak-field asymptotics are trusted.
constexpr double kFieldRestriction = 0.1;

/// Large-ell asymptotics of the Dirac ramp
///   T_step ~ q (U - E + q) / (p (E + p)) e^{-pi m^2 ell / U},  T_avg ~ T_step^2 / 2.
/// Violating the weak-field condition U/ell << 2 m^2 is reported, not thrown.
inline AsymptoticReport sauter_asymptotic(const PhysParams& params) {
  require_klein_zone(params);
  const double p = momentum_p(params), q = momentum_q(params);
  const double m = params.m, U = params.U, E = params.E;
  AsymptoticReport r;
  r.log10_exponent = params.ell > 0.0 ? -M_PI * m * m * params.ell / U / std::log(10.0) : 0.0;
  r.prefactor = q * (U - E + q) / (p * (E + p));
  r.log10_T_step = r.log10_exponent + std::log10(r.prefactor);
  r.log10_T_barrier_avg = 2.0 * r.log10_T_step - std::log10(2.0);
  r.field_ratio = params.ell > 0.0 ? (U / params.ell) / (2.0 * m * m)
                                   : std::numeric_limits<double>::infinity();
  r.restriction_satisfied = r.field_ratio < kFieldRestriction;
  if (!r.restriction_satisfied) {
    r.warnings.emplace_back("weak-field restriction U/ell << 2 m^2 violated; asymptotic form unreliable");
  }
  return r;
}

struct ResonanceReport {
  std::vector<double> energies;  ///< ascending
  std::size_t count = 0;
  std::pair<double, double> window{0.0, 0.0};  ///< as searched, after clipping to the zone
  /// Energies where the step itself is transparent (b = 0): T = 1 for any L.
  std::vector<double> transparent;
  std::vector<std::string> flags;
};

namespace detail {

/// Resonances sit where Theta(E) = 4 q s + arg((a b)^2) is a multiple of 2 pi,
/// s = ell + L. Squaring keeps Theta continuous when a real b changes sign.
struct PhaseSample {
  double E = 0.0;
  double lin = 0.0;   ///< 4 q s
  double raw = 0.0;   ///< arg((a b)^2) in (-pi, pi]
  double theta = 0.0; ///< unwrapped Theta
  double b_real = 0.0;
  double b_ratio = 0.0;  ///< |b| / |a|
};

inline double principal(double x) { return std::remainder(x, 2.0 * M_PI); }

class PhaseTracker {
 public:
  PhaseTracker(PhysParams params, Model model, StepShape shape, TransmissionOptions opt)
      : params_(params), model_(model), shape_(shape), opt_(std::move(opt)) {}

  PhaseSample sample(double E) const {
    PhysParams p = params_;
    p.E = E;
    std::vector<std::string> scratch;
    const StepMatrix step = step_for(p, model_, shape_, opt_, scratch);
    const auto a = step.a_value(), b = step.b_value();
    PhaseSample s;
    s.E = E;
    s.lin = 4.0 * momentum_q(p) * (p.ell + p.L);
    s.raw = std::arg((a * b) * (a * b));
    s.b_real = b.real();
    s.b_ratio = std::abs(b) / std::abs(a);
    return s;
  }

  /// Theta(E) continued from a neighbouring sample.
  double theta_from(const PhaseSample& ref, const PhaseSample& s) const {
    return ref.theta + (s.lin - ref.lin) + principal(s.raw - ref.raw);
  }

  /// Adaptive samples on [lo, hi] with |dTheta| <= pi/2 between neighbours.
  std::vector<PhaseSample> track(double lo, double hi) const {
    const int n0 = 64;
    std::vector<PhaseSample> out;
    PhaseSample first = sample(lo);
    first.theta = first.lin + first.raw;
    out.push_back(first);
    for (int k = 1; k <= n0; ++k) {
      const double E = k == n0 ? hi : lo + (hi - lo) * k / n0;
      refine(out, sample(E), 0);
    }
    return out;
  }

 private:
  void refine(std::vector<PhaseSample>& out, PhaseSample next, int depth) const {
    const PhaseSample& prev = out.back();
    const double dlin = std::fabs(next.lin - prev.lin);
    const double draw = std::fabs(principal(next.raw - prev.raw));
    const bool fine = dlin <= M_PI / 4 && draw <= M_PI / 4;
    const double width = next.E - prev.E;
    if (fine || depth > 60 || width <= 1e-13 * std::fabs(next.E)) {
      next.theta = theta_from(prev, next);
      out.push_back(next);
      return;
    }
    const PhaseSample mid = sample(prev.E + 0.5 * width);
    refine(out, mid, depth + 1);
    refine(out, next, depth + 1);
  }

  PhysParams params_;
  Model model_;
  StepShape shape_;
  TransmissionOptions opt_;
};

inline std::pair<double, double> clip_to_zone(const PhysParams& params, double lo, double hi) {
  const double margin = 1e-9 * params.m;
  return {std::max(lo, params.m + margin), std::min(hi, params.U - params.m - margin)};
}

inline long long floor_index(double theta) {
  return static_cast<long long>(std::floor(theta / (2.0 * M_PI)));
}

}  // namespace detail

/// All E in [E_min, E_max] (clipped to the Klein zone) with Theta(E) = 2 n pi,
/// refined by bisection on Theta. params.E is ignored.
inline ResonanceReport find_resonances(const PhysParams& raw, Model model, StepShape shape,
                                       double E_min, double E_max,
                                       const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  params.validate();
  ResonanceReport rep;
  const auto [lo, hi] = detail::clip_to_zone(params, E_min, E_max);
  rep.window = {lo, hi};
  if (!(hi > lo)) {
    if (hi == lo) {
      const detail::PhaseTracker tr(params, model, shape, opt);
      if (tr.sample(lo).b_ratio <= 1e-12) {
        rep.transparent.push_back(lo);
        rep.flags.emplace_back("degenerate: step transparent");
      }
    }
    return rep;
  }
  const detail::PhaseTracker tr(params, model, shape, opt);
  const auto samples = tr.track(lo, hi);

  auto bisect = [&](const detail::PhaseSample& left, double right_E, auto&& g) {
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::bisect(g, left.E, right_E, tol, iters);
    return 0.5 * (r.first + r.second);
  };

  for (std::size_t k = 1; k < samples.size(); ++k) {
    const auto& l = samples[k - 1];
    const auto& r = samples[k];
    const long long nl = detail::floor_index(l.theta), nr = detail::floor_index(r.theta);
    if (nl != nr) {
      const double target = 2.0 * M_PI * static_cast<double>(std::max(nl, nr));
      auto g = [&](double E) { return tr.theta_from(l, tr.sample(E)) - target; };
      rep.energies.push_back(bisect(l, r.E, g));
    }
    if (shape == StepShape::Rect || params.ell == 0.0) {
      // A real b crossing zero: the step is transparent there.
      if ((l.b_real > 0.0) != (r.b_real > 0.0) || r.b_real == 0.0) {
        auto g = [&](double E) { return tr.sample(E).b_real * (l.b_real > 0.0 ? 1.0 : -1.0); };
        const double Et = r.b_real == 0.0 ? r.E : bisect(l, r.E, g);
        if (rep.transparent.empty() || rep.transparent.back() != Et) rep.transparent.push_back(Et);
      }
    } else if (r.b_ratio <= 1e-12) {
      rep.transparent.push_back(r.E);
    }
  }
  if (!rep.transparent.empty()) rep.flags.emplace_back("degenerate: step transparent");
  std::sort(rep.energies.begin(), rep.energies.end());
  rep.count = rep.energies.size();
  return rep;
}

/// Resonance count in [E1, E2] from the unwrapped phase at the window ends,
/// without refinement.
inline long long spike_density(const PhysParams& raw, Model model, StepShape shape, double E1,
                               double E2, const TransmissionOptions& opt = {}) {
  const PhysParams params = detail::normalized(raw, shape);
  params.validate();
  const auto [lo, hi] = detail::clip_to_zone(params, E1, E2);
  if (!(hi > lo)) return 0;
  const detail::PhaseTracker tr(params, model, shape, opt);
  const auto samples = tr.track(lo, hi);
  const double a = samples.front().theta, b = samples.back().theta;
  return std::llabs(detail::floor_index(b) - detail::floor_index(a));
}

}  // namespace kleinzone
