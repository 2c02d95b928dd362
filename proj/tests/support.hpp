#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "blochcalc/verify.hpp"

namespace testing {

using blochcalc::cplx;

inline cplx random_disc(std::mt19937_64& rng, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r_max * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

// Central difference of f along the real axis, step h.
template <class F>
cplx central_difference(F&& f, cplx z, double h = 1e-5) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

}  // namespace testing
