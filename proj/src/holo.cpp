#include "blochcalc/holo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace blochcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

HoloFn make(NodeVariant v, bool self_map) {
  Node n{std::move(v), self_map, false, 0};
  std::visit(
      [&n](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::PowerSeries>) {
          n.has_series = true;
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::Product>) {
          n.has_series = x.l.has_series() || x.r.has_series();
          n.derivative_depth = std::max(x.l.derivative_depth(), x.r.derivative_depth());
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          n.has_series = x.outer.has_series() || x.inner.has_series();
          n.derivative_depth = std::max(x.outer.derivative_depth(), x.inner.derivative_depth());
        } else if constexpr (std::is_same_v<T, node::ScalarMul> ||
                             std::is_same_v<T, node::Antiderivative0>) {
          n.has_series = x.f.has_series();
          n.derivative_depth = x.f.derivative_depth();
        } else if constexpr (std::is_same_v<T, node::Derivative>) {
          n.has_series = x.f.has_series();
          n.derivative_depth = x.f.derivative_depth() + 1;
        }
      },
      n.v);
  return HoloFn(std::make_shared<const Node>(std::move(n)));
}

void require_in_disc(cplx z, const char* what) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::PointOutsideDisc, what);
}

double binom(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Taylor coefficients of sum a_m z^m at z0 by repeated synthetic division.
Jet<cplx> polynomial_jet(const std::vector<cplx>& a, cplx z0, int K) {
  Jet<cplx> j(K);
  std::vector<cplx> work(a);
  for (int k = 0; k <= K; ++k) {
    if (work.empty()) break;
    cplx acc = 0.0;
    for (std::size_t i = work.size(); i-- > 0;) {
      acc = acc * z0 + work[i];
      work[i] = acc;
    }
    j[k] = work[0];
    work.erase(work.begin());
  }
  return j;
}

// 32-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  static constexpr int n = 32;
  std::array<double, n> x{};
  std::array<double, n> w{};
  GaussLegendre() {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

Jet<cplx> jet_impl(const HoloFn& f, cplx z, int K);

// f(z) = z * int_0^1 F(t z) dt, panels graded geometrically toward t = 1.
cplx integrate_ray(const HoloFn& F, cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  const double gap = std::max((1.0 - r) / r, 1e-16);
  int levels = static_cast<int>(std::ceil(std::log2(1.0 / gap))) + 2;
  levels = std::clamp(levels, 1, 60);
  const auto& gl = gauss_legendre();
  cplx total = 0.0;
  double a = 0.0;
  for (int j = 0; j <= levels; ++j) {
    double b = (j == levels) ? 1.0 : 1.0 - std::ldexp(1.0, -(j + 1));
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    cplx panel = 0.0;
    for (int i = 0; i < GaussLegendre::n; ++i) {
      panel += gl.w[i] * jet_impl(F, (mid + half * gl.x[i]) * z, 0)[0];
    }
    total += half * panel;
    a = b;
  }
  return z * total;
}

Jet<cplx> jet_impl(const HoloFn& f, cplx z, int K) {
  return std::visit(
      overloaded{
          [&](const node::Identity&) { return Jet<cplx>::variable(K, z); },
          [&](const node::Monomial& m) {
            Jet<cplx> j(K);
            for (int k = 0; k <= K && static_cast<unsigned>(k) <= m.m; ++k) {
              j[k] = binom(m.m, static_cast<unsigned>(k)) * std::pow(z, static_cast<int>(m.m) - k);
            }
            return j;
          },
          [&](const node::Polynomial& p) { return polynomial_jet(p.coeffs, z, K); },
          [&](const node::PowerSeries& s) {
            if (std::abs(z) > s.radius) {
              throw Error(ErrorKind::PointOutsideDisc, "series node evaluated beyond its radius");
            }
            return polynomial_jet(s.coeffs, z, K);
          },
          [&](const node::MobiusSelfMap& m) {
            const cplx ab = std::conj(m.a);
            const cplx d = 1.0 - ab * z;
            Jet<cplx> j(K);
            cplx abk = 1.0, dk = d;  // conj(a)^k, d^(k+1)
            cplx abkm1 = 0.0, dkm = 1.0;
            for (int k = 0; k <= K; ++k) {
              cplx v = (m.a - z) * abk / dk;
              if (k >= 1) v -= abkm1 / dkm;
              j[k] = m.lambda * v;
              abkm1 = abk;
              dkm = dk;
              abk *= ab;
              dk *= d;
            }
            return j;
          },
          [&](const node::Peaking& p) {
            const cplx zb = std::conj(p.z0);
            const double s = 1.0 - std::norm(p.z0);
            const cplx e = 1.0 - zb * z;
            Jet<cplx> j(K);
            cplx zbk = 1.0, ek1 = e, zbkm1 = 0.0, ek = 1.0;
            for (int k = 0; k <= K; ++k) {
              cplx v = z * zbk / ek1;
              if (k >= 1) v += zbkm1 / ek;
              j[k] = s * v;
              zbkm1 = zbk;
              ek = ek1;
              zbk *= zb;
              ek1 *= e;
            }
            return j;
          },
          [&](const node::Log1mz&) {
            const cplx u = 1.0 - z;
            Jet<cplx> j(K);
            j[0] = std::log(u);
            cplx uk = 1.0;
            for (int k = 1; k <= K; ++k) {
              uk *= u;
              j[k] = -1.0 / (static_cast<double>(k) * uk);
            }
            return j;
          },
          [&](const node::Sum& s) { return jet_impl(s.l, z, K) + jet_impl(s.r, z, K); },
          [&](const node::ScalarMul& s) { return s.c * jet_impl(s.f, z, K); },
          [&](const node::Product& p) { return jet_impl(p.l, z, K) * jet_impl(p.r, z, K); },
          [&](const node::Compose& c) {
            Jet<cplx> inner = jet_impl(c.inner, z, K);
            if (!(std::abs(inner[0]) < 1.0)) {
              throw Error(ErrorKind::DomainViolation, "inner function left the unit disc");
            }
            return compose(jet_impl(c.outer, inner[0], K), inner);
          },
          [&](const node::Derivative& d) { return differentiate(jet_impl(d.f, z, K + 1)); },
          [&](const node::Antiderivative0& a) {
            cplx value = integrate_ray(a.f, z);
            if (K == 0) return Jet<cplx>::constant(0, value);
            return integrate(jet_impl(a.f, z, K - 1), value);
          },
      },
      f.node().v);
}

Majorant estimate_majorant(const std::vector<cplx>& a) {
  Majorant maj;
  const std::size_t n = a.size();
  if (n < 2) return maj;
  const std::size_t window = std::min<std::size_t>(16, n - 1);
  double max_ratio = 0.0;
  bool any = false;
  for (std::size_t m = n - window; m + 1 < n; ++m) {
    double den = std::abs(a[m]);
    if (den > 0.0) {
      max_ratio = std::max(max_ratio, std::abs(a[m + 1]) / den);
      any = true;
    }
  }
  if (!any) return maj;  // trailing window is zero: C = 0
  double q = std::min(1.0, 1.001 * max_ratio);
  if (q > 0.99) q = 1.0;
  q = std::max(q, 1e-3);
  double C = 0.0;
  for (std::size_t m = n - window; m < n; ++m) {
    C = std::max(C, std::abs(a[m]) / std::pow(q, static_cast<double>(m)));
  }
  maj.C = C;
  maj.q = q;
  maj.p = 0;
  return maj;
}

HoloFn make_series(std::vector<cplx> coeffs, double radius, const Majorant& maj) {
  if (!(radius > 0.0 && radius < 1.0)) throw Error(ErrorKind::BadRadius, "series radius must lie in (0,1)");
  radius = std::min(radius, kSeriesRadiusCap);
  double tail = series_tail(maj, coeffs.size(), radius, 0);
  return make(node::PowerSeries{std::move(coeffs), radius, maj, tail}, false);
}

// Pads with zeros; the majorant stays valid on the shorter range.
std::vector<cplx> padded(std::vector<cplx> a, std::size_t n) {
  if (a.size() < n) a.resize(n, 0.0);
  return a;
}

}  // namespace

HoloFn::HoloFn() : HoloFn(polynomial({})) {}

Kind HoloFn::kind() const { return static_cast<Kind>(node_->v.index()); }
bool HoloFn::is_self_map() const { return node_->self_map; }
bool HoloFn::has_series() const { return node_->has_series; }
int HoloFn::derivative_depth() const { return node_->derivative_depth; }

double series_tail(const Majorant& maj, std::size_t n_terms, double r, int k) {
  if (maj.C == 0.0) return 0.0;
  const double x = maj.q * r;
  if (x >= 1.0) return kInf;
  const std::size_t start = std::max<std::size_t>(n_terms, static_cast<std::size_t>(std::max(k, 1)));
  if (r == 0.0) return 0.0;
  const double a = static_cast<double>(maj.p + k);  // m^p * m^k dominates the falling factorial
  const double log_c = std::log(maj.C) - k * std::log(r);
  double sum = 0.0;
  for (std::size_t m = start; m < start + 50'000'000; ++m) {
    const double md = static_cast<double>(m);
    const double term = std::exp(log_c + a * std::log(md) + md * std::log(x));
    sum += term;
    // Ratio of consecutive terms; decreasing in m for a >= 0, bounded by x for a < 0.
    const double ratio = a >= 0.0 ? std::pow(1.0 + 1.0 / md, a) * x : x;
    if (ratio < 1.0) {
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= 1e-17 * sum || rest < 1e-300) return sum + rest;
    }
  }
  return kInf;
}

// ---- constructors ---------------------------------------------------------

HoloFn identity() { return make(node::Identity{}, true); }

HoloFn monomial(unsigned m) { return make(node::Monomial{m}, m >= 1); }

HoloFn constant(cplx c) { return polynomial({c}); }

HoloFn polynomial(std::vector<cplx> coeffs) {
  double tail_mass = 0.0;
  for (std::size_t m = 1; m < coeffs.size(); ++m) tail_mass += std::abs(coeffs[m]);
  const double a0 = coeffs.empty() ? 0.0 : std::abs(coeffs[0]);
  const bool self = a0 < 1.0 && a0 + tail_mass <= 1.0;
  return make(node::Polynomial{std::move(coeffs)}, self);
}

HoloFn power_series(std::vector<cplx> coeffs, double radius) {
  Majorant maj = estimate_majorant(coeffs);
  return make_series(std::move(coeffs), radius, maj);
}

HoloFn power_series(std::vector<cplx> coeffs, double radius, const Majorant& majorant) {
  Majorant maj = majorant;
  maj.declared = true;
  return make_series(std::move(coeffs), radius, maj);
}

HoloFn mobius_self_map(cplx a, cplx lambda) {
  require_in_disc(a, "Mobius parameter a must satisfy |a| < 1");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) {
    throw Error(ErrorKind::DomainViolation, "Mobius rotation must be unimodular");
  }
  return make(node::MobiusSelfMap{a, lambda}, true);
}

HoloFn peaking(cplx z0) {
  require_in_disc(z0, "peaking point must satisfy |z0| < 1");
  return make(node::Peaking{z0}, z0 == 0.0);
}

HoloFn log1mz() { return make(node::Log1mz{}, false); }

HoloFn operator+(const HoloFn& l, const HoloFn& r) { return make(node::Sum{l, r}, false); }

HoloFn operator-(const HoloFn& l, const HoloFn& r) { return l + cplx(-1.0) * r; }

HoloFn operator*(cplx c, const HoloFn& f) {
  return make(node::ScalarMul{c, f}, f.is_self_map() && std::abs(c) <= 1.0);
}

HoloFn operator*(const HoloFn& l, const HoloFn& r) {
  return make(node::Product{l, r}, l.is_self_map() && r.is_self_map());
}

HoloFn compose(const HoloFn& outer, const HoloFn& inner) {
  if (!inner.is_self_map()) {
    throw Error(ErrorKind::NotSelfMap, "inner function lacks a disc self-map certificate");
  }
  // Exact rewrites that keep composite trees shallow.
  if (std::holds_alternative<node::Identity>(inner.node().v)) return outer;
  if (std::holds_alternative<node::Identity>(outer.node().v)) return inner;
  if (const auto* s = std::get_if<node::ScalarMul>(&outer.node().v)) {
    HoloFn r = s->c * compose(s->f, inner);
    if (r.is_self_map() == outer.is_self_map()) return r;
  }
  const auto* mo = std::get_if<node::Monomial>(&outer.node().v);
  const auto* mi = std::get_if<node::Monomial>(&inner.node().v);
  if (mo && mi) return monomial(mo->m * mi->m);
  return make(node::Compose{outer, inner}, outer.is_self_map());
}

HoloFn dilate(const HoloFn& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::BadRadius, "dilation radius must lie in (0,1)");
  return compose(f, cplx(r) * identity());
}

HoloFn normalized(const HoloFn& f) {
  const cplx f0 = eval(f, 0.0);
  if (f0 == 0.0) return f;
  return f + constant(-f0);
}

HoloFn certify_self_map(const HoloFn& h) {
  if (h.is_self_map()) return h;
  constexpr int kRadial = 256, kAngular = 256;
  constexpr double kRadius = 0.999;
  double sup = 0.0;
  for (int i = 0; i < kRadial; ++i) {
    const double r = kRadius * static_cast<double>(i + 1) / kRadial;
    for (int j = 0; j < kAngular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / kAngular;
      sup = std::max(sup, std::abs(eval(h, std::polar(r, th))));
    }
  }
  if (!(sup < 1.0 - 1e-9)) {
    throw Error(ErrorKind::NotSelfMap, "grid verification found |h| >= 1 - 1e-9");
  }
  Node n = h.node();
  n.self_map = true;
  return HoloFn(std::make_shared<const Node>(std::move(n)));
}

// ---- calculus -------------------------------------------------------------

HoloFn derivative(const HoloFn& f) {
  return std::visit(
      overloaded{
          [&](const node::Identity&) { return constant(1.0); },
          [&](const node::Monomial& m) {
            if (m.m == 0) return HoloFn();
            if (m.m == 1) return constant(1.0);
            return cplx(static_cast<double>(m.m)) * monomial(m.m - 1);
          },
          [&](const node::Polynomial& p) {
            std::vector<cplx> d;
            for (std::size_t m = 1; m < p.coeffs.size(); ++m) d.push_back(static_cast<double>(m) * p.coeffs[m]);
            return polynomial(std::move(d));
          },
          [&](const node::PowerSeries& s) {
            std::vector<cplx> a = padded(s.coeffs, 4);
            std::vector<cplx> d;
            for (std::size_t m = 1; m < a.size(); ++m) d.push_back(static_cast<double>(m) * a[m]);
            const double n_new = static_cast<double>(d.size());
            Majorant maj = s.majorant;
            const double grow = maj.p + 1 >= 0 ? std::pow((n_new + 1.0) / n_new, maj.p + 1) : 1.0;
            maj.C = maj.C * maj.q * grow;
            maj.p += 1;
            return make_series(std::move(d), s.radius, maj);
          },
          [&](const node::Sum& s) { return derivative(s.l) + derivative(s.r); },
          [&](const node::ScalarMul& s) { return s.c * derivative(s.f); },
          [&](const node::Product& p) {
            return derivative(p.l) * p.r + p.l * derivative(p.r);
          },
          [&](const node::Compose& c) {
            return compose(derivative(c.outer), c.inner) * derivative(c.inner);
          },
          [&](const node::Antiderivative0& a) { return a.f; },
          [&](const auto&) { return make(node::Derivative{f}, false); },
      },
      f.node().v);
}

HoloFn antiderivative0(const HoloFn& F) {
  return std::visit(
      overloaded{
          [&](const node::Identity&) { return cplx(0.5) * monomial(2); },
          [&](const node::Monomial& m) {
            if (m.m == 0) return identity();
            return cplx(1.0 / (m.m + 1.0)) * monomial(m.m + 1);
          },
          [&](const node::Polynomial& p) {
            if (p.coeffs.size() == 1 && p.coeffs[0] == cplx(1.0)) return identity();
            std::vector<cplx> a(p.coeffs.size() + 1, 0.0);
            for (std::size_t m = 0; m < p.coeffs.size(); ++m) a[m + 1] = p.coeffs[m] / static_cast<double>(m + 1);
            return polynomial(std::move(a));
          },
          [&](const node::PowerSeries& s) {
            const std::size_t n = s.coeffs.size();
            std::vector<cplx> a(n + 1, 0.0);
            for (std::size_t m = 0; m < n; ++m) a[m + 1] = s.coeffs[m] / static_cast<double>(m + 1);
            Majorant maj = s.majorant;
            if (maj.q == 0.0 || maj.C == 0.0) {
              maj.C = 0.0;
            } else {
              const double nd = static_cast<double>(n);
              const double shrink = maj.p >= 0 ? 1.0 : std::pow(nd / (nd + 1.0), maj.p);
              maj.C = maj.C / maj.q * shrink;
              maj.p -= 1;
            }
            return make_series(std::move(a), s.radius, maj);
          },
          [&](const node::Sum& s) { return antiderivative0(s.l) + antiderivative0(s.r); },
          [&](const node::ScalarMul& s) { return s.c * antiderivative0(s.f); },
          [&](const node::Derivative& d) { return normalized(d.f); },
          [&](const auto&) { return make(node::Antiderivative0{F}, false); },
      },
      F.node().v);
}

// ---- evaluation -----------------------------------------------------------

Jet<cplx> jet(const HoloFn& f, cplx z, int order) {
  require_in_disc(z, "evaluation point must satisfy |z| < 1");
  if (order + f.derivative_depth() > kMaxJetOrder) {
    throw std::out_of_range("requested derivative order exceeds the jet capacity");
  }
  return jet_impl(f, z, order);
}

cplx eval(const HoloFn& f, cplx z) { return jet(f, z, 0)[0]; }

cplx eval_derivative(const HoloFn& f, cplx z) { return jet(f, z, 1)[1]; }

double error_bound(const HoloFn& f) {
  return std::visit(
      overloaded{
          [](const node::PowerSeries& s) { return s.tail_bound; },
          [](const node::Sum& s) { return error_bound(s.l) + error_bound(s.r); },
          [](const node::ScalarMul& s) { return std::abs(s.c) * error_bound(s.f); },
          [](const node::Product& p) {
            return error_bound(p.l) == 0.0 && error_bound(p.r) == 0.0 ? 0.0 : kInf;
          },
          [](const node::Compose& c) {
            return error_bound(c.outer) == 0.0 && error_bound(c.inner) == 0.0 ? 0.0 : kInf;
          },
          [](const node::Derivative& d) { return error_bound(d.f) == 0.0 ? 0.0 : kInf; },
          [](const node::Antiderivative0& a) { return error_bound(a.f); },
          [](const auto&) { return 0.0; },
      },
      f.node().v);
}

// ---- bounds ---------------------------------------------------------------

std::optional<Jet<double>> derivative_bounds(const HoloFn& f, cplx c, double rho, int K) {
  using Bounds = std::optional<Jet<double>>;
  const double R = std::abs(c) + rho;
  return std::visit(
      overloaded{
          [&](const node::Identity&) -> Bounds {
            Jet<double> b(K);
            b[0] = R;
            if (K >= 1) b[1] = 1.0;
            return b;
          },
          [&](const node::Monomial& m) -> Bounds {
            Jet<double> b(K);
            for (int k = 0; k <= K && static_cast<unsigned>(k) <= m.m; ++k) {
              b[k] = binom(m.m, static_cast<unsigned>(k)) * std::pow(R, static_cast<int>(m.m) - k);
            }
            return b;
          },
          [&](const node::Polynomial& p) -> Bounds {
            Jet<double> b(K);
            for (std::size_t m = 0; m < p.coeffs.size(); ++m) {
              const double am = std::abs(p.coeffs[m]);
              for (int k = 0; k <= K && static_cast<std::size_t>(k) <= m; ++k) {
                b[k] += am * binom(static_cast<unsigned>(m), static_cast<unsigned>(k)) *
                        std::pow(R, static_cast<int>(m) - k);
              }
            }
            return b;
          },
          [&](const node::PowerSeries& s) -> Bounds {
            if (R > s.radius) return std::nullopt;
            Jet<double> b(K);
            double fact = 1.0;
            for (int k = 0; k <= K; ++k) {
              if (k > 0) fact *= k;
              for (std::size_t m = static_cast<std::size_t>(k); m < s.coeffs.size(); ++m) {
                b[k] += std::abs(s.coeffs[m]) * binom(static_cast<unsigned>(m), static_cast<unsigned>(k)) *
                        std::pow(R, static_cast<int>(m) - k);
              }
              const double tail = series_tail(s.majorant, s.coeffs.size(), R, k);
              if (!std::isfinite(tail)) return std::nullopt;
              b[k] += tail / fact;
            }
            return b;
          },
          [&](const node::MobiusSelfMap& m) -> Bounds {
            const double aa = std::abs(m.a);
            const double d = std::abs(1.0 - std::conj(m.a) * c) - aa * rho;
            if (!(d > 0.0)) return std::nullopt;
            Jet<double> b(K);
            for (int k = 0; k <= K; ++k) {
              double v = (aa + R) * std::pow(aa, k) / std::pow(d, k + 1);
              if (k >= 1) v += std::pow(aa, k - 1) / std::pow(d, k);
              b[k] = v;
            }
            if (R < 1.0) b[0] = std::min(b[0], 1.0);
            return b;
          },
          [&](const node::Peaking& p) -> Bounds {
            const double za = std::abs(p.z0);
            const double s = 1.0 - za * za;
            const double d = std::abs(1.0 - std::conj(p.z0) * c) - za * rho;
            if (!(d > 0.0)) return std::nullopt;
            Jet<double> b(K);
            for (int k = 0; k <= K; ++k) {
              double v = R * std::pow(za, k) / std::pow(d, k + 1);
              if (k >= 1) v += std::pow(za, k - 1) / std::pow(d, k);
              b[k] = s * v;
            }
            return b;
          },
          [&](const node::Log1mz&) -> Bounds {
            const double d = std::abs(1.0 - c) - rho;
            if (!(d > 0.0)) return std::nullopt;
            Jet<double> b(K);
            b[0] = std::max(std::abs(std::log(d)), std::abs(std::log(std::abs(1.0 - c) + rho))) +
                   std::numbers::pi;
            for (int k = 1; k <= K; ++k) b[k] = 1.0 / (k * std::pow(d, k));
            return b;
          },
          [&](const node::Sum& s) -> Bounds {
            auto l = derivative_bounds(s.l, c, rho, K);
            if (!l) return std::nullopt;
            auto r = derivative_bounds(s.r, c, rho, K);
            if (!r) return std::nullopt;
            return *l + *r;
          },
          [&](const node::ScalarMul& s) -> Bounds {
            auto b = derivative_bounds(s.f, c, rho, K);
            if (!b) return std::nullopt;
            return std::abs(s.c) * *b;
          },
          [&](const node::Product& p) -> Bounds {
            auto l = derivative_bounds(p.l, c, rho, K);
            if (!l) return std::nullopt;
            auto r = derivative_bounds(p.r, c, rho, K);
            if (!r) return std::nullopt;
            return *l * *r;
          },
          [&](const node::Compose& cm) -> Bounds {
            const int need = std::max(K, 1);
            auto bh = derivative_bounds(cm.inner, c, rho, need);
            if (!bh) return std::nullopt;
            cplx hc;
            try {
              hc = eval(cm.inner, c);
            } catch (const Error&) {
              return std::nullopt;
            }
            // The image of the disc lies in D(h(c), rho sup|h'|), and for a self-map also in
            // D(0, 1), or D(0, R) when h(0) = 0 (Schwarz).
            Bounds bf;
            auto keep = [&](Bounds b) {
              if (!b) return;
              if (!bf) {
                bf = b;
                return;
              }
              for (int k = 0; k <= K; ++k) (*bf)[k] = std::min((*bf)[k], (*b)[k]);
            };
            const double rho_img = (*bh)[1] * rho;
            if (std::abs(hc) + rho_img < 1.0) keep(derivative_bounds(cm.outer, hc, rho_img, K));
            if (cm.inner.is_self_map()) {
              const double reach = eval(cm.inner, 0.0) == 0.0 ? std::min(R, 1.0) : 1.0;
              keep(derivative_bounds(cm.outer, 0.0, reach, K));
            }
            if (!bf) return std::nullopt;
            Jet<double> inner(K);
            for (int k = 1; k <= K; ++k) inner[k] = (*bh)[k];
            return compose(*bf, inner);
          },
          [&](const node::Derivative& d) -> Bounds {
            if (K + 1 > kMaxJetOrder) return std::nullopt;
            auto b = derivative_bounds(d.f, c, rho, K + 1);
            if (!b) return std::nullopt;
            return differentiate(*b);
          },
          [&](const node::Antiderivative0& a) -> Bounds {
            if (!(R < 1.0)) return std::nullopt;
            auto bF = derivative_bounds(a.f, c, rho, std::max(K - 1, 0));
            if (!bF) return std::nullopt;
            auto b0 = derivative_bounds(a.f, 0.0, R, 0);
            if (!b0) return std::nullopt;
            Jet<double> b(K);
            b[0] = (*b0)[0] * R;
            for (int k = 1; k <= K; ++k) b[k] = (*bF)[k - 1] / k;
            return b;
          },
      },
      f.node().v);
}

namespace {
// sup_{0<r<1} (1 - r^2) m r^(m-1), attained at r^2 = (m-1)/(m+1).
double monomial_seminorm(std::size_t m) {
  if (m == 0) return 0.0;
  const double md = static_cast<double>(m);
  return md * (2.0 / (md + 1.0)) * std::pow((md - 1.0) / (md + 1.0), (md - 1.0) / 2.0);
}
}  // namespace

std::optional<double> structural_seminorm_bound(const HoloFn& f) {
  using Opt = std::optional<double>;
  return std::visit(
      overloaded{
          [](const node::Identity&) -> Opt { return 1.0; },
          [](const node::Monomial& m) -> Opt { return monomial_seminorm(m.m); },
          [](const node::Polynomial& p) -> Opt {
            double s = 0.0;
            for (std::size_t m = 1; m < p.coeffs.size(); ++m) s += std::abs(p.coeffs[m]) * monomial_seminorm(m);
            return s;
          },
          [](const node::PowerSeries& s) -> Opt {
            double b = 0.0;
            for (std::size_t m = 1; m < s.coeffs.size(); ++m) b += std::abs(s.coeffs[m]) * monomial_seminorm(m);
            const double tail = series_tail(s.majorant, s.coeffs.size(), 1.0, 0);
            if (!std::isfinite(tail)) return std::nullopt;
            return b + tail;
          },
          [](const node::MobiusSelfMap&) -> Opt { return 1.0; },
          [](const node::Peaking&) -> Opt { return 1.0; },
          [](const node::Log1mz&) -> Opt { return 2.0; },
          [](const node::Sum& s) -> Opt {
            auto l = structural_seminorm_bound(s.l);
            auto r = structural_seminorm_bound(s.r);
            if (!l || !r) return std::nullopt;
            return *l + *r;
          },
          [](const node::ScalarMul& s) -> Opt {
            auto b = structural_seminorm_bound(s.f);
            if (!b) return std::nullopt;
            return std::abs(s.c) * *b;
          },
          // Schwarz-Pick: (1-|z|^2)|h'(z)| <= 1-|h(z)|^2 for every self-map h.
          [](const node::Compose& c) -> Opt { return structural_seminorm_bound(c.outer); },
          [](const auto&) -> Opt { return std::nullopt; },
      },
      f.node().v);
}

std::optional<double> annulus_seminorm_bound(const HoloFn& f, double r) {
  using Opt = std::optional<double>;
  Opt best = structural_seminorm_bound(f);
  auto keep = [&best](Opt b) {
    if (b && (!best || *b < *best)) best = b;
  };
  if (auto b = derivative_bounds(f, 0.0, 1.0, 1)) keep((1.0 - r) * (1.0 + r) * (*b)[1]);
  std::visit(overloaded{
                 [&](const node::Sum& s) {
                   auto l = annulus_seminorm_bound(s.l, r);
                   auto rr = annulus_seminorm_bound(s.r, r);
                   if (l && rr) keep(*l + *rr);
                 },
                 [&](const node::ScalarMul& s) {
                   if (auto b = annulus_seminorm_bound(s.f, r)) keep(std::abs(s.c) * *b);
                 },
                 // Pick's lemma moves the weight to h(z); these inner maps send the annulus into a known one.
                 [&](const node::Compose& c) {
                   const auto& in = c.inner.node().v;
                   if (std::holds_alternative<node::Identity>(in)) {
                     keep(annulus_seminorm_bound(c.outer, r));
                   } else if (const auto* m = std::get_if<node::Monomial>(&in)) {
                     keep(annulus_seminorm_bound(c.outer, std::pow(r, static_cast<double>(m->m))));
                   } else if (const auto* mb = std::get_if<node::MobiusSelfMap>(&in); mb && mb->a == cplx(0.0)) {
                     keep(annulus_seminorm_bound(c.outer, r));
                   } else if (const auto* sm = std::get_if<node::ScalarMul>(&in);
                              sm && std::abs(sm->c) <= 1.0 && std::holds_alternative<node::Identity>(sm->f.node().v)) {
                     keep(annulus_seminorm_bound(c.outer, r * std::abs(sm->c)));
                   }
                 },
                 [](const auto&) {},
             },
             f.node().v);
  return best;
}

std::optional<double> cell_seminorm_bound(const HoloFn& f, cplx center, double rho, double r_inner) {
  using Opt = std::optional<double>;
  Opt best = structural_seminorm_bound(f);
  auto keep = [&best](Opt b) {
    if (b && (!best || *b < *best)) best = b;
  };
  if (auto b = derivative_bounds(f, center, rho, 3)) {
    const auto j = jet(f, center, 2);
    const double a = std::abs(j[1]);
    const double d = std::min((*b)[1], a + rho * 2.0 * (*b)[2]);
    keep((1.0 - r_inner) * (1.0 + r_inner) * d);
    // Second order: with z = c + e, f'(z) = a + B e + R with |R| <= 3 rho^2 b3,
    // |a + B e| <= |a| + Re(u e) + K and 1 - |z|^2 <= w_c - 2 Re(conj(c) e).
    if (a > 0.0) {
      const cplx bb = 2.0 * j[2];
      const cplx u = std::conj(j[1]) * bb / a;
      const double k = std::norm(bb) * rho * rho / (2.0 * a);
      const double rem = 3.0 * rho * rho * (*b)[3];
      const double cr = std::abs(center), wc = (1.0 - cr) * (1.0 + cr);
      keep(wc * (a + k) + rho * std::abs(wc * u - 2.0 * a * std::conj(center)) + 2.0 * cr * rho * (std::abs(u) * rho + k) +
           (wc + 2.0 * cr * rho) * rem);
    }
  }
  std::visit(overloaded{
                 [&](const node::Sum& s) {
                   auto l = cell_seminorm_bound(s.l, center, rho, r_inner);
                   if (!l) return;
                   auto r = cell_seminorm_bound(s.r, center, rho, r_inner);
                   if (r) keep(*l + *r);
                 },
                 [&](const node::ScalarMul& s) {
                   if (auto b = cell_seminorm_bound(s.f, center, rho, r_inner)) keep(std::abs(s.c) * *b);
                 },
                 // (1-|w|^2)/|1-w| <= 1+|w|.
                 [&](const node::Log1mz&) {
                   keep(1.0 + std::min(1.0, std::abs(center) + rho));
                   const double dist = std::abs(1.0 - center) - rho;
                   if (dist > 0.0) keep((1.0 - r_inner) * (1.0 + r_inner) / dist);
                 },
                 // Pick's lemma: (1-|z|^2)|h'(z)| <= 1-|h(z)|^2, so the cell maps to a disc around h(center).
                 [&](const node::Compose& c) {
                   if (!c.inner.is_self_map()) return;
                   auto hb = derivative_bounds(c.inner, center, rho, 1);
                   if (!hb) return;
                   const cplx hc = eval(c.inner, center);
                   const double rho2 = rho * (*hb)[1];
                   keep(cell_seminorm_bound(c.outer, hc, rho2, std::max(0.0, std::abs(hc) - rho2)));
                 },
                 [](const auto&) {},
             },
             f.node().v);
  return best;
}

}  // namespace blochcalc
