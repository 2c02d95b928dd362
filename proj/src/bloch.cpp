#include "blochcalc/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blochcalc {

namespace {

double one_minus_sq(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

// Radius up to which every series node in the tree sees arguments inside its own radius.
double series_limit(const HoloFn& f) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::PowerSeries>) {
          return x.radius;
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::Product>) {
          return std::min(series_limit(x.l), series_limit(x.r));
        } else if constexpr (std::is_same_v<T, node::ScalarMul> || std::is_same_v<T, node::Derivative> ||
                             std::is_same_v<T, node::Antiderivative0>) {
          return series_limit(x.f);
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          return std::min(series_limit(x.inner), series_limit(x.outer));
        } else {
          return 1.0;
        }
      },
      f.node().v);
}

}  // namespace

BlochFn::BlochFn(HoloFn fn) : fn_(std::move(fn)), normalized_(std::abs(eval(fn_, 0.0)) <= 1e-12) {}

BlochFn::BlochFn(HoloFn fn, SupBracket bracket) : BlochFn(std::move(fn)) { bracket_ = std::move(bracket); }

BlochFn normalize(const HoloFn& fn) { return BlochFn(normalized(fn)); }

double weighted_derivative(const BlochFn& f, cplx z) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::PointOutsideDisc, "weighted derivative needs |z| < 1");
  return one_minus_sq(z) * std::abs(eval_derivative(f.fn(), z));
}

double sampling_radius(const HoloFn& f, const SamplingConfig& cfg) {
  if (!f.has_series()) return cfg.closed_form_r_max;
  return std::min(cfg.r_max, series_limit(f));
}

SupBracket bloch_seminorm(const BlochFn& f, const SamplingConfig& cfg) {
  if (!f.normalized()) throw Error(ErrorKind::NotNormalized, "Bloch seminorm requires f(0) = 0");
  const HoloFn& fn = f.fn();
  const double r_max = sampling_radius(fn, cfg);
  auto objective = [&fn](cplx z) { return one_minus_sq(z) * std::abs(eval_derivative(fn, z)); };
  CellBound cell = [&fn](cplx c, double rho, double r_inner) { return cell_seminorm_bound(fn, c, rho, r_inner); };
  return maximize_on_disc(objective, cfg, r_max, cell, annulus_seminorm_bound(fn, r_max),
                          structural_seminorm_bound(fn));
}

BlochFn with_seminorm(const BlochFn& f, const SamplingConfig& cfg) {
  return BlochFn(f.fn(), bloch_seminorm(f, cfg));
}

TailProfile little_bloch_tail(const BlochFn& f, std::span<const double> radii, int angular) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorKind::BadRadius, "tail radii must be strictly increasing in (0,1)");
    }
  }
  TailProfile tail;
  tail.radii.assign(radii.begin(), radii.end());
  tail.values.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    double sup = 0.0;
    for (int j = 0; j < angular; ++j) {
      sup = std::max(sup, weighted_derivative(f, std::polar(radii[i], 2.0 * std::numbers::pi * j / angular)));
    }
    tail.values[i] = sup;
  });
  return tail;
}

bool is_little_bloch(const TailProfile& tail, double threshold) {
  const auto& v = tail.values;
  if (v.size() < 3) return false;
  const std::size_t n = v.size();
  return v[n - 1] < threshold && v[n - 1] < v[n - 2] && v[n - 2] < v[n - 3];
}

std::vector<double> default_tail_radii() { return {0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999}; }

double pick_schwarz_check(const HoloFn& h, std::span<const cplx> points) {
  if (!h.is_self_map()) throw Error(ErrorKind::NotSelfMap, "Pick-Schwarz check needs a certified self-map");
  double worst = -std::numeric_limits<double>::infinity();
  for (cplx z : points) {
    const auto j = jet(h, z, 1);
    worst = std::max(worst, one_minus_sq(z) * std::abs(j[1]) - one_minus_sq(j[0]));
  }
  return worst;
}

std::vector<cplx> polar_grid(int radial, int angular, double r_max) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(radial * angular));
  for (int i = 1; i <= radial; ++i) {
    const double r = r_max * i / radial;
    for (int j = 0; j < angular; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / angular));
  }
  return pts;
}

BlochFn composition_operator(const HoloFn& h, const BlochFn& f, const SamplingConfig& cfg) {
  if (!h.is_self_map()) throw Error(ErrorKind::NotSelfMap, "composition operator needs a certified self-map");
  if (std::abs(eval(h, 0.0)) > 1e-12) throw Error(ErrorKind::NotSelfMap, "composition operator needs h(0) = 0");
  if (!f.normalized()) throw Error(ErrorKind::NotNormalized, "composition operator acts on normalized functions");
  const BlochFn source = f.bracket() ? f : with_seminorm(f, cfg);
  if (h.kind() == Kind::Identity) return source;

  SupBracket b = bloch_seminorm(BlochFn(compose(f.fn(), h)), cfg);
  const SupBracket& fb = *source.bracket();
  if (b.lower > fb.upper * (1.0 + 1e-9) + 1e-12) {
    throw Error(ErrorKind::NotSelfMap, "composition increased the seminorm; self-map certificate is wrong");
  }
  if (fb.certified && b.upper > fb.upper) {
    b.upper = fb.upper;
    b.certified = true;
    b.lower = std::min(b.lower, b.upper);
  }
  return BlochFn(compose(f.fn(), h), std::move(b));
}

HoloFn to_holo(const MobiusMap& m) { return mobius_self_map(m.a, m.lambda); }

}  // namespace blochcalc
