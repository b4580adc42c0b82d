#pragma once

/// \file
/// Precision rungs and the policy that drives escalation between them.

#include <array>
#include <stdexcept>
#include <string>

#include "kleinzone/errors.hpp"
#include "kleinzone/numeric/complex.hpp"
#include "kleinzone/numeric/multi_double.hpp"

namespace kleinzone {

/// Storage type for results that must survive with their full accuracy.
using Wide = num::MultiDouble<4>;
using WideComplex = num::Complex<Wide>;

inline constexpr std::array<int, 4> kPrecisionLadder{53, 106, 159, 212};

struct PrecisionPolicy {
  int significand_bits = 53;         ///< starting rung
  double series_switch_radius = 30;  ///< |z| above which the Taylor series is abandoned
  int max_terms = 20000;             ///< per series / per continuation step
  double tail_tolerance = 1e-14;     ///< relative target

  void validate() const {
    bool rung = false;
    for (int b : kPrecisionLadder) rung = rung || (b == significand_bits);
    if (!rung) {
      throw UsageError("significand_bits must be one of 53, 106, 159, 212 (got " +
                       std::to_string(significand_bits) + ")");
    }
    if (!(tail_tolerance > 0.0)) throw UsageError("tail_tolerance must be positive");
    if (!(series_switch_radius > 0.0)) throw UsageError("series_switch_radius must be positive");
    if (max_terms < 8) throw UsageError("max_terms must be at least 8");
  }
};

/// Rounding unit of a rung.
inline double rung_epsilon(int bits) {
  switch (bits) {
    case 53: return num::RealTraits<double>::epsilon();
    case 106: return num::RealTraits<num::MultiDouble<2>>::epsilon();
    case 159: return num::RealTraits<num::MultiDouble<3>>::epsilon();
    default: return num::RealTraits<num::MultiDouble<4>>::epsilon();
  }
}

/// Next rung above `bits`, or 0 at the top of the ladder.
inline int next_rung(int bits) {
  for (int b : kPrecisionLadder) {
    if (b > bits) return b;
  }
  return 0;
}

/// Invoke `f.template operator()<R>()` with the real type of the given rung.
template <class F>
decltype(auto) with_rung(int bits, F&& f) {
  switch (bits) {
    case 53: return f.template operator()<double>();
    case 106: return f.template operator()<num::MultiDouble<2>>();
    case 159: return f.template operator()<num::MultiDouble<3>>();
    case 212: return f.template operator()<num::MultiDouble<4>>();
    default: throw UsageError("unsupported precision rung " + std::to_string(bits));
  }
}

template <class R>
Wide to_wide(const R& x) {
  return Wide(x);
}

template <class R>
WideComplex to_wide(const num::Complex<R>& z) {
  return {to_wide(z.re), to_wide(z.im)};
}

}  // namespace kleinzone
