#pragma once

#include <cmath>
#include <complex>

#include "blochcalc/errors.hpp"

namespace blochcalc {

/// Disc automorphism lambda * phi_a, phi_a(z) = (a - z) / (1 - conj(a) z), |a| < 1, |lambda| = 1.
template <typename Real>
struct Mobius {
  using Complex = std::complex<Real>;
  Complex a{0};
  Complex lambda{-1};  // default is the identity: -phi_0(z) = z

  static Mobius identity() { return {Complex(0), Complex(-1)}; }
  static Mobius rotation(Complex mu) { return {Complex(0), -mu}; }
  static Mobius involution(Complex a) { return {a, Complex(1)}; }
};

using MobiusMap = Mobius<double>;

template <typename Real>
std::complex<Real> mobius_apply(const Mobius<Real>& m, std::complex<Real> z) {
  if (!(std::abs(z) < Real(1))) throw Error(ErrorKind::PointOutsideDisc, "Mobius argument must lie in the disc");
  return m.lambda * (m.a - z) / (Real(1) - std::conj(m.a) * z);
}

template <typename Real>
std::complex<Real> mobius_derivative(const Mobius<Real>& m, std::complex<Real> z) {
  const auto d = Real(1) - std::conj(m.a) * z;
  return m.lambda * (std::norm(m.a) - Real(1)) / (d * d);
}

/// outer ∘ inner, with closed-form parameters.
template <typename Real>
Mobius<Real> mobius_compose(const Mobius<Real>& outer, const Mobius<Real>& inner) {
  using C = std::complex<Real>;
  // The composite vanishes where inner hits outer.a.
  const C target = outer.a * std::conj(inner.lambda);
  const C a3 = (inner.a - target) / (Real(1) - std::conj(inner.a) * target);
  // lambda3 = -(1 - |a3|^2) * (outer ∘ inner)'(a3), using phi_b'(b) = -1 / (1 - |b|^2).
  const C d2 = Real(1) - std::conj(inner.a) * a3;
  const C inner_d = inner.lambda * (std::norm(inner.a) - Real(1)) / (d2 * d2);
  const C outer_d = -outer.lambda / (Real(1) - std::norm(outer.a));
  C lambda3 = -(Real(1) - std::norm(a3)) * outer_d * inner_d;
  lambda3 /= std::abs(lambda3);
  return {a3, lambda3};
}

template <typename Real>
Mobius<Real> mobius_invert(const Mobius<Real>& m) {
  // (lambda phi_a)^{-1}(w) = phi_a(conj(lambda) w)
  return mobius_compose(Mobius<Real>::involution(m.a), Mobius<Real>::rotation(std::conj(m.lambda)));
}

}  // namespace blochcalc
