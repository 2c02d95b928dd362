#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blochcalc/holo.hpp"
#include "blochcalc/mobius.hpp"
#include "blochcalc/sampling.hpp"

namespace blochcalc {

/// A holomorphic function together with its normalisation flag and an optional
/// seminorm bracket fixed at construction.
class BlochFn {
 public:
  explicit BlochFn(HoloFn fn);
  BlochFn(HoloFn fn, SupBracket bracket);

  const HoloFn& fn() const { return fn_; }
  /// |f(0)| <= 1e-12.
  bool normalized() const { return normalized_; }
  const std::optional<SupBracket>& bracket() const { return bracket_; }

 private:
  HoloFn fn_;
  bool normalized_;
  std::optional<SupBracket> bracket_;
};

/// f - f(0) as a normalized Bloch function.
BlochFn normalize(const HoloFn& fn);

/// (1 - |z|^2) |f'(z)|.
double weighted_derivative(const BlochFn& f, cplx z);

/// Bracket [lower, upper] for p_B(f) = sup (1 - |z|^2) |f'(z)|. Throws NotNormalized.
SupBracket bloch_seminorm(const BlochFn& f, const SamplingConfig& cfg = {});

/// Copy of f with the seminorm bracket cached.
BlochFn with_seminorm(const BlochFn& f, const SamplingConfig& cfg = {});

/// Largest safe sampling radius for the tree under cfg (series nodes cap it).
double sampling_radius(const HoloFn& f, const SamplingConfig& cfg);

/// Circular sups of the weighted derivative.
struct TailProfile {
  std::vector<double> radii;
  std::vector<double> values;
};

TailProfile little_bloch_tail(const BlochFn& f, std::span<const double> radii, int angular = 256);

/// Heuristic verdict: last value below `threshold` and the last three values decreasing.
bool is_little_bloch(const TailProfile& tail, double threshold = 1e-2);

/// Default tail radii used by the CLI and the verification suites.
std::vector<double> default_tail_radii();

/// max over points of (1 - |z|^2)|h'(z)| - (1 - |h(z)|^2); <= 0 for disc self-maps.
double pick_schwarz_check(const HoloFn& h, std::span<const cplx> points);

/// Polar grid with `radial` rings up to r_max and `angular` points per ring.
std::vector<cplx> polar_grid(int radial, int angular, double r_max);

/// C_h(f) = f ∘ h for a certified self-map h with h(0) = 0.
/// The result carries a bracket whose lower end is checked against the upper end of f.
BlochFn composition_operator(const HoloFn& h, const BlochFn& f, const SamplingConfig& cfg = {});

HoloFn to_holo(const MobiusMap& m);

}  // namespace blochcalc
