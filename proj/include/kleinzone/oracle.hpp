#pragma once

/// \file
/// Brute-force reference: direct integration of the first-order stationary
/// systems through a piecewise-linear potential, and numeric extraction of the
/// transfer matrix. Independent of the hypergeometric machinery.
///
///   Klein-Gordon: psi' = chi,                    chi' = -((E - V)^2 - m^2) psi
///   Dirac:        psi' = i (E + m - V) chi,      chi' = i (E - m - V) psi
///
/// Conserved currents: 2 Im(psi* chi) (Klein-Gordon), 2 Re(psi* chi) (Dirac).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "kleinzone/errors.hpp"
#include "kleinzone/kinematics.hpp"
#include "kleinzone/transfer.hpp"

namespace kleinzone {

/// Continuous piecewise-linear V(x), constant beyond the end points. Two
/// breakpoints may share an x to describe a jump; the integrator then steps
/// across it with continuity of (psi, chi).
class PotentialProfile {
 public:
  using Point = std::pair<double, double>;  // (x, V)

  PotentialProfile() = default;
  explicit PotentialProfile(std::vector<Point> points) : points_(std::move(points)) { validate(); }

  /// Step of height U with its ramp on [0, ell].
  static PotentialProfile step(const PhysParams& params) {
    params.validate();
    return PotentialProfile({{0.0, 0.0}, {params.ell, params.U}});
  }

  /// Symmetric barrier: up on [-(ell+L), -L], flat on [-L, L], down on [L, L+ell].
  static PotentialProfile barrier(const PhysParams& params) {
    params.validate();
    const double s = params.ell + params.L;
    return PotentialProfile({{-s, 0.0}, {-params.L, params.U}, {params.L, params.U}, {s, 0.0}});
  }

  const std::vector<Point>& points() const { return points_; }
  double x_begin() const { return points_.front().first; }
  double x_end() const { return points_.back().first; }
  double left_value() const { return points_.front().second; }
  double right_value() const { return points_.back().second; }

  double value(double x) const {
    if (x <= x_begin()) return left_value();
    if (x >= x_end()) return right_value();
    auto it = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const Point& p) { return v < p.first; });
    const Point& hi = *it;
    const Point& lo = *(it - 1);
    return lo.second + (hi.second - lo.second) * (x - lo.first) / (hi.first - lo.first);
  }

 private:
  void validate() const {
    if (points_.size() < 2) throw UsageError("potential profile needs at least two breakpoints");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i].first >= points_[i - 1].first)) {
        throw UsageError("potential breakpoints must be ordered in x");
      }
      if (i >= 2 && points_[i].first == points_[i - 2].first) {
        throw UsageError("at most two breakpoints may share a position");
      }
    }
    for (const auto& p : points_) {
      if (!std::isfinite(p.first) || !std::isfinite(p.second)) {
        throw UsageError("non-finite potential breakpoint");
      }
    }
  }

  std::vector<Point> points_;
};

struct StateVector {
  std::complex<double> psi, chi;
  double x = 0.0;
};

struct IntegrateOptions {
  double tol = 1e-10;      ///< relative and absolute local error target
  double fixed_step = 0;   ///< > 0: non-adaptive steps of at most this size
};

struct IntegrationResult {
  StateVector state;
  double current_drift = 0.0;  ///< max |J(x) - J(x0)| / max |Psi|^2 along the run
  std::size_t steps = 0;
};

inline double current(const StateVector& s, Model model) {
  const std::complex<double> w = std::conj(s.psi) * s.chi;
  return 2.0 * (model == Model::Dirac ? w.real() : w.imag());
}

namespace detail {

using OdeState = std::array<std::complex<double>, 2>;

struct LinearSegmentSystem {
  double E, m, v0, slope, x0;
  Model model;

  void operator()(const OdeState& y, OdeState& dy, double x) const {
    const double V = v0 + slope * (x - x0);
    if (model == Model::Dirac) {
      const std::complex<double> i(0.0, 1.0);
      dy[0] = i * (E + m - V) * y[1];
      dy[1] = i * (E - m - V) * y[0];
    } else {
      const double w = E - V;
      dy[0] = y[1];
      dy[1] = -(w * w - m * m) * y[0];
    }
  }
};

}  // namespace detail

/// Propagate `initial` from initial.x to the last breakpoint. Steps never
/// straddle a breakpoint.
inline IntegrationResult integrate(const PotentialProfile& profile, double E, double m, Model model,
                                   const StateVector& initial, const IntegrateOptions& opt = {}) {
  namespace ode = boost::numeric::odeint;
  if (!(opt.tol >= 1e-14 && opt.tol <= 1e-6) && opt.fixed_step <= 0.0) {
    throw UsageError("integration tolerance must lie in [1e-14, 1e-6]");
  }
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  const double x_end = profile.x_end();
  if (initial.x > x_end) throw UsageError("initial point lies beyond the profile");

  detail::OdeState y{initial.psi, initial.chi};
  double x = initial.x;
  IntegrationResult res;
  const double j0 = current(initial, model);
  double drift = 0.0, scale = std::norm(y[0]) + std::norm(y[1]);
  auto observe = [&](const detail::OdeState& s, double) {
    StateVector sv{s[0], s[1], 0.0};
    drift = std::max(drift, std::fabs(current(sv, model) - j0));
    scale = std::max(scale, std::norm(s[0]) + std::norm(s[1]));
    ++res.steps;
  };

  // Linear pieces (xa, xb, V(xa), V(xb)) covering [initial.x, x_end].
  struct Piece {
    double xa, xb, va, vb;
  };
  std::vector<Piece> pieces;
  const auto& pts = profile.points();
  if (x < profile.x_begin()) {
    pieces.push_back({x, profile.x_begin(), profile.left_value(), profile.left_value()});
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto [xa, va] = pts[i];
    const auto [xb, vb] = pts[i + 1];
    if (xb <= x || xb == xa) continue;
    const double start = std::max(xa, x);
    const double vstart = va + (vb - va) * (start - xa) / (xb - xa);
    pieces.push_back({start, xb, vstart, vb});
  }

  ode::runge_kutta_dopri5<detail::OdeState> fixed;
  try {
    for (const Piece& pc : pieces) {
      const detail::LinearSegmentSystem sys{E, m, pc.va, (pc.vb - pc.va) / (pc.xb - pc.xa), pc.xa,
                                            model};
      if (opt.fixed_step > 0.0) {
        const auto n = static_cast<std::size_t>(std::ceil((pc.xb - pc.xa) / opt.fixed_step - 1e-12));
        const double h = (pc.xb - pc.xa) / static_cast<double>(n);
        ode::integrate_n_steps(fixed, sys, y, pc.xa, h, n, observe);
      } else {
        auto stepper = ode::make_controlled(opt.tol, opt.tol,
                                            ode::runge_kutta_dopri5<detail::OdeState>());
        ode::integrate_adaptive(stepper, sys, y, pc.xa, pc.xb, std::min(0.1, pc.xb - pc.xa),
                                observe);
      }
      x = pc.xb;
    }
  } catch (const std::exception& e) {
    throw StiffnessError(std::string("integration step size collapsed: ") + e.what(), x);
  }
  res.state = {y[0], y[1], x_end};
  res.current_drift = drift / scale;
  return res;
}

/// Plane wave u(k) e^{ikx} on a plateau of height V.
inline StateVector plane_wave(double k, double E, double V, double m, Model model, double x) {
  const auto u = plateau_spinor(k, E, V, m, model);
  const std::complex<double> ph = std::polar(1.0, k * x);
  return {u.upper * ph, u.lower * ph, x};
}

struct NumericMatrix {
  std::array<std::complex<double>, 4> m;  ///< row-major (gamma, delta) = M (alpha, beta)
  double cc_residual = 0.0;               ///< deviation from [[a, b], [b*, a*]], relative to max |M_ij|
  double current_drift = 0.0;
  std::vector<std::string> warnings;

  std::complex<double> a() const { return 0.5 * (m[0] + std::conj(m[3])); }
  std::complex<double> b() const { return 0.5 * (m[1] + std::conj(m[2])); }
};

/// Integrate the pure alpha and pure beta plane-wave states across the profile
/// and project the result onto the right-plateau plane waves. tol in [1e-12, 1e-6].
inline NumericMatrix numeric_transfer_matrix(const PotentialProfile& profile, double E, double m,
                                             Model model, double tol = 1e-10) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw UsageError("oracle tolerance must lie in [1e-12, 1e-6]");
  const double vl = profile.left_value(), vr = profile.right_value();
  const double wl = E - vl, wr = E - vr;
  if (std::fabs(wl) <= m || std::fabs(wr) <= m) {
    throw DomainError("no propagating plane waves on a plateau of the profile");
  }
  const double kl = std::sqrt(wl * wl - m * m), kr = std::sqrt(wr * wr - m * m);
  const double x0 = profile.x_begin(), x1 = profile.x_end();

  NumericMatrix out;
  if (std::fabs(wr) - m < 1e-6 * m || std::fabs(wl) - m < 1e-6 * m) {
    out.warnings.emplace_back("near-gap plateau: plane-wave projection is ill-conditioned");
  }
  const StateVector plus = plane_wave(kr, E, vr, m, model, x1);
  const StateVector minus = plane_wave(-kr, E, vr, m, model, x1);
  const std::complex<double> det = plus.psi * minus.chi - minus.psi * plus.chi;

  // tol is the target for the extracted matrix; the local error control runs
  // tighter so that the accumulated phase error over many wavelengths stays below it.
  IntegrateOptions opt;
  opt.tol = std::max(1e-14, 1e-2 * tol);
  for (int col = 0; col < 2; ++col) {
    const StateVector start = plane_wave(col == 0 ? kl : -kl, E, vl, m, model, x0);
    const auto run = integrate(profile, E, m, model, start, opt);
    out.current_drift = std::max(out.current_drift, run.current_drift);
    const auto& s = run.state;
    out.m[col] = (s.psi * minus.chi - minus.psi * s.chi) / det;
    out.m[2 + col] = (plus.psi * s.chi - s.psi * plus.chi) / det;
  }
  double big = 0.0;
  for (const auto& v : out.m) big = std::max(big, std::abs(v));
  out.cc_residual =
      std::max(std::abs(out.m[0] - std::conj(out.m[3])), std::abs(out.m[1] - std::conj(out.m[2]))) /
      big;
  return out;
}

/// Step matrix from the oracle; the only route for the Klein-Gordon ramp.
inline StepMatrix numeric_step_matrix(const PhysParams& params, Model model, double tol = 1e-10) {
  require_klein_zone(params);
  const auto nm = numeric_transfer_matrix(PotentialProfile::step(params), params.E, params.m, model,
                                          tol);
  StepMatrix out;
  out.a = WideComplex::from(nm.a());
  out.b = WideComplex::from(nm.b());
  out.model = model;
  out.params = params;
  out.shape = params.ell == 0.0 ? StepShape::Rect : StepShape::Sauter;
  out.engine = Engine::Numeric;
  out.bits = 53;
  out.relative_error = std::max(nm.cc_residual, 10.0 * tol);
  const double scale = std::norm(nm.a()) + std::norm(nm.b());
  out.det_resolved = 2.0 * out.relative_error * scale <= 1e-8 * std::fabs(out.det());
  return out;
}

}  // namespace kleinzone
