#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <stdexcept>

namespace blochcalc {

inline constexpr int kMaxJetOrder = 12;

/// Truncated Taylor expansion at a point: c[k] = f^(k)(z0) / k!.
///
/// With Scalar = std::complex<double> this is an exact forward-mode jet; with
/// Scalar = double and non-negative entries it is a coefficient majorant, and
/// the same arithmetic yields Cauchy/Faa di Bruno bounds.
template <typename Scalar>
struct Jet {
  int order = 0;
  std::array<Scalar, kMaxJetOrder + 1> c{};

  Jet() = default;
  explicit Jet(int k) : order(k) {
    if (k < 0 || k > kMaxJetOrder) throw std::out_of_range("jet order out of range");
  }

  Scalar& operator[](int k) { return c[static_cast<std::size_t>(k)]; }
  const Scalar& operator[](int k) const { return c[static_cast<std::size_t>(k)]; }

  static Jet constant(int k, Scalar v) {
    Jet j(k);
    j[0] = v;
    return j;
  }

  /// Jet of the identity map at z0.
  static Jet variable(int k, Scalar z0) {
    Jet j(k);
    j[0] = z0;
    if (k >= 1) j[1] = Scalar(1);
    return j;
  }
};

template <typename S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  assert(a.order == b.order);
  Jet<S> r(a.order);
  for (int k = 0; k <= a.order; ++k) r[k] = a[k] + b[k];
  return r;
}

template <typename S, typename T>
Jet<S> operator*(const T& s, const Jet<S>& a) {
  Jet<S> r(a.order);
  for (int k = 0; k <= a.order; ++k) r[k] = S(s) * a[k];
  return r;
}

/// Cauchy product (Leibniz rule).
template <typename S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  assert(a.order == b.order);
  Jet<S> r(a.order);
  for (int k = 0; k <= a.order; ++k) {
    S acc{};
    for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    r[k] = acc;
  }
  return r;
}

/// Taylor composition: `outer` is the jet of F at inner[0]; returns the jet of F(inner).
/// Only inner[1..] enters; inner[0] is the expansion point of `outer`.
template <typename S>
Jet<S> compose(const Jet<S>& outer, const Jet<S>& inner) {
  assert(outer.order == inner.order);
  const int K = inner.order;
  Jet<S> delta = inner;
  delta[0] = S{};
  Jet<S> power = Jet<S>::constant(K, S(1));
  Jet<S> r(K);
  for (int k = 0; k <= K; ++k) {
    for (int j = 0; j <= K; ++j) r[j] += outer[k] * power[j];
    if (k < K) power = power * delta;
  }
  return r;
}

/// Jet of f' of order K from a jet of f of order K+1.
template <typename S>
Jet<S> differentiate(const Jet<S>& a) {
  Jet<S> r(a.order - 1);
  for (int k = 0; k < a.order; ++k) r[k] = S(static_cast<double>(k + 1)) * a[k + 1];
  return r;
}

/// Jet of an antiderivative of order K+1 with the given value, from a jet of F of order K.
template <typename S>
Jet<S> integrate(const Jet<S>& a, S value) {
  Jet<S> r(a.order + 1);
  r[0] = value;
  for (int k = 0; k <= a.order; ++k) r[k + 1] = a[k] / S(static_cast<double>(k + 1));
  return r;
}

}  // namespace blochcalc
