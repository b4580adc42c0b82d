#pragma once

// Reference Phi(alpha, beta; z): the plain Taylor series summed in 400-digit
// binary floating point. Slow and cancellation-prone, so the width is chosen
// large enough that |z| up to a few hundred still leaves > 100 good digits.

#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>

namespace oracle {

using BigComplex = boost::multiprecision::cpp_complex<400>;
using BigReal = BigComplex::value_type;

inline BigComplex big(std::complex<double> z) { return BigComplex(BigReal(z.real()), BigReal(z.imag())); }

inline std::complex<double> small(const BigComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline BigComplex chf_reference(const BigComplex& a, const BigComplex& b, const BigComplex& z) {
  BigComplex term = 1, sum = 1;
  const BigReal tiny = BigReal(1e-120);
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (k > abs(z) + abs(a) + 10 && abs(term) < tiny * abs(sum)) break;
    if (term == BigComplex(0)) break;
  }
  return sum;
}

inline std::complex<double> chf_reference(std::complex<double> a, std::complex<double> b,
                                          std::complex<double> z) {
  return small(chf_reference(big(a), big(b), big(z)));
}

inline double rel_diff(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace oracle
