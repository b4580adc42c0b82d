#pragma once

/// \file
/// Physical parameters, dispersion relations and plane-wave spinors for a
/// particle of mass m incident on an electrostatic step of height U.
///
/// Natural units (hbar = c = 1). Lengths are measured in 1/m, so with the
/// default m = 1 every length is in Compton-wavelength units.

#include <cmath>
#include <complex>
#include <string>

#include "kleinzone/errors.hpp"
#include "kleinzone/numeric/complex.hpp"

namespace kleinzone {

enum class Model { KleinGordon, Dirac };

inline const char* to_string(Model model) {
  return model == Model::Dirac ? "dirac" : "klein-gordon";
}

/// The (m, E, U, ell, L) tuple every formula consumes.
struct PhysParams {
  double m = 1.0;    ///< mass
  double E = 0.0;    ///< total energy of the incident particle
  double U = 0.0;    ///< step / barrier height
  double ell = 0.0;  ///< width of each linear edge
  double L = 0.0;    ///< half-width of the flat top of a barrier

  /// Mass, height and lengths in range; says nothing about E.
  void validate() const {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (!(U >= 0.0)) throw DomainError("potential height must be non-negative");
    if (!(ell >= 0.0)) throw DomainError("edge width must be non-negative");
    if (!(L >= 0.0)) throw DomainError("barrier half-width must be non-negative");
    if (!std::isfinite(E)) throw DomainError("energy must be finite");
  }
};

/// Where a plane wave lives: left of the step (V = 0) or on the plateau (V = U).
enum class Region { Free, Shifted };

struct SpinorAmplitude {
  std::complex<double> upper;
  std::complex<double> lower;
};

inline double momentum_p(const PhysParams& params) {
  params.validate();
  const double e2 = params.E * params.E - params.m * params.m;
  if (params.E < params.m || e2 < 0.0) {
    throw DomainError("evanescent incident state not supported");
  }
  return std::sqrt(e2);
}

inline double momentum_q(const PhysParams& params) {
  params.validate();
  const double w = params.U - params.E;
  const double w2 = w * w - params.m * params.m;
  if (std::fabs(w) < params.m || w2 < 0.0) throw DomainError("energy gap region");
  return std::sqrt(w2);
}

/// U - m > E > m, both ends excluded.
inline bool in_klein_zone(const PhysParams& params) {
  return params.E > params.m && params.U - params.m > params.E;
}

/// Ratio entering det M = (p/q) D: 1 for Klein-Gordon, (E-U+m)/(E+m) for Dirac.
inline double d_ratio(const PhysParams& params, Model model) {
  if (model == Model::KleinGordon) return 1.0;
  return (params.E - params.U + params.m) / (params.E + params.m);
}

/// Two-component amplitude of e^{ikx} on a plateau of height V.
/// Klein-Gordon: (1, i k). Dirac (Pauli representation): (1, k / (E - V + m)).
inline SpinorAmplitude plateau_spinor(double k, double E, double V, double m, Model model) {
  if (model == Model::KleinGordon) return {1.0, std::complex<double>(0.0, k)};
  const double den = E - V + m;
  if (den == 0.0) throw SingularError("singular spinor: E - V + m = 0");
  return {1.0, k / den};
}

inline SpinorAmplitude spinor(double momentum, const PhysParams& params, Model model,
                              Region region) {
  const double V = region == Region::Free ? 0.0 : params.U;
  return plateau_spinor(momentum, params.E, V, params.m, model);
}

/// Throws unless E lies strictly inside the Klein zone.
inline void require_klein_zone(const PhysParams& params) {
  params.validate();
  if (params.E == params.m || params.E == params.U - params.m) {
    throw BoundaryError("energy on a Klein-zone boundary (p or q vanishes)");
  }
  if (!in_klein_zone(params)) {
    throw DomainError("energy outside the Klein zone (U - m > E > m required)");
  }
}

namespace detail {

/// p, q and (p/q) D at the working precision of R.
template <class R>
struct Momenta {
  R p;
  R q;
  R det;  ///< (p/q) * D, the step-matrix determinant
};

template <class R>
Momenta<R> momenta(const PhysParams& params, Model model) {
  const R E(params.E), U(params.U), m(params.m);
  const R w = U - E;
  Momenta<R> out;
  out.p = num::sqrt_r(E * E - m * m);
  out.q = num::sqrt_r(w * w - m * m);
  if (model == Model::KleinGordon) {
    out.det = out.p / out.q;
  } else {
    out.det = out.p * (E - U + m) / (out.q * (E + m));
  }
  return out;
}

}  // namespace detail

}  // namespace kleinzone
