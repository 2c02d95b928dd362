#include "blochcalc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace blochcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double one_minus_sq(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

// |a - b| scaled by max(1, |a|, |b|).
double scaled_gap(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

class Check {
 public:
  Check(std::string name, double tol) {
    r_.name = std::move(name);
    r_.tolerance = tol;
  }
  void add(double violation) {
    ++r_.cases;
    if (std::isnan(violation)) violation = kInf;
    r_.max_violation = std::max(r_.max_violation, violation);
    if (!(violation <= r_.tolerance)) r_.pass = false;
  }
  void require(bool ok) { add(ok ? 0.0 : 1.0); }
  const PropertyResult& result() const { return r_; }

 private:
  PropertyResult r_;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

cplx disc_point(Rng& rng, double rmax) {
  return std::polar(rmax * std::sqrt(uniform(rng)), 2.0 * std::numbers::pi * uniform(rng));
}

cplx unimodular(Rng& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * uniform(rng)); }

cplx gaussian(Rng& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Normalized members of the primitive families.
std::vector<HoloFn> primitive_family() {
  return {identity(),
          cplx(0.5) * monomial(2),
          peaking(cplx(0.4, -0.3)),
          normalized(mobius_self_map(cplx(0.3, 0.2), cplx(0.0, 1.0))),
          log1mz()};
}

HoloFn random_primitive(Rng& rng) {
  switch (pick(rng, 0, 5)) {
    case 0:
      return identity();
    case 1: {
      const int m = pick(rng, 2, 5);
      return cplx(1.0 / m) * monomial(static_cast<unsigned>(m));
    }
    case 2:
      return peaking(disc_point(rng, 0.9));
    case 3:
      return normalized(mobius_self_map(disc_point(rng, 0.8), unimodular(rng)));
    case 4:
      return log1mz();
    default:
      return compose(log1mz(), unimodular(rng) * identity());
  }
}

HoloFn random_bloch_fn(Rng& rng) {
  switch (pick(rng, 0, 3)) {
    case 0:
      return random_primitive(rng);
    case 1:
      return random_primitive(rng) + gaussian(rng) * random_primitive(rng);
    case 2:
      return compose(random_primitive(rng), monomial(2));
    default:
      return gaussian(rng) * random_primitive(rng);
  }
}

HoloFn random_self_map_fixing_zero(Rng& rng) {
  switch (pick(rng, 0, 4)) {
    case 0:
      return unimodular(rng) * identity();
    case 1:
      return monomial(static_cast<unsigned>(pick(rng, 2, 4)));
    case 2:
      return identity() * mobius_self_map(disc_point(rng, 0.8), unimodular(rng));
    case 3: {
      const double t = uniform(rng);
      return polynomial({0.0, t * unimodular(rng), (1.0 - t) * unimodular(rng)});
    }
    default:
      return mobius_self_map(0.0, unimodular(rng));
  }
}

Molecule random_molecule(Rng& rng, int max_atoms, double rmax, double lambda_max) {
  std::vector<Term> t;
  const int k = pick(rng, 1, max_atoms);
  for (int i = 0; i < k; ++i) t.push_back({lambda_max * disc_point(rng, 1.0), disc_point(rng, rmax)});
  return Molecule(std::move(t)).canonicalized();
}

NormKind random_norm(Rng& rng) {
  switch (pick(rng, 0, 2)) {
    case 0:
      return NormKind::Sup;
    case 1:
      return NormKind::L1;
    default:
      return NormKind::L2;
  }
}

VectorBlochMap random_vector_map(Rng& rng, int n) {
  std::vector<BlochFn> c;
  for (int i = 0; i < n; ++i) c.emplace_back(random_bloch_fn(rng));
  return VectorBlochMap(std::move(c), random_norm(rng));
}

std::vector<cplx> random_points(Rng& rng, std::size_t n, double rmax) {
  std::vector<cplx> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(disc_point(rng, rmax));
  return p;
}

template <typename Real>
double mobius_gap(const Mobius<Real>& a, const Mobius<Real>& b, std::span<const cplx> pts) {
  double g = 0.0;
  for (cplx z : pts) g = std::max(g, std::abs(mobius_apply(a, z) - mobius_apply(b, z)));
  return g;
}

CertificateConfig cheap_certificates(const SamplingConfig& s) {
  CertificateConfig c;
  c.use_interpolating = false;
  c.extra_points = 0;
  c.seminorm = s;
  return c;
}

SamplingConfig sampling_only(SamplingConfig s) {
  s.certify = false;
  return s;
}

// ---- suites -----------------------------------------------------------------

std::vector<PropertyResult> suite_peaking(Rng& rng, const VerifyConfig& cfg) {
  Check lower("seminorm lower in [1-1e-6, 1]", 0.0);
  Check upper("certified upper >= 1", 0.0);
  Check peak("weighted derivative at z0 equals 1", 1e-12);
  Check local("localization 1 - eps^2/4 for eps in {0.1, 0.3, 0.5}", 1e-9);
  const auto grid = polar_grid(128, 256, 0.999);
  for (int i = 0; i < 50; ++i) {
    const cplx z0 = disc_point(rng, 0.9);
    const BlochFn f(peaking(z0));
    const SupBracket b = bloch_seminorm(f, cfg.sampling);
    lower.add(std::max({0.0, (1.0 - 1e-6) - b.lower, b.lower - 1.0}));
    upper.require(b.certified && b.upper >= 1.0);
    peak.add(std::abs(weighted_derivative(f, z0) - 1.0));
    for (double eps : {0.1, 0.3, 0.5}) {
      double sup = 0.0;
      for (cplx w : grid)
        if (std::abs(w - z0) >= eps) sup = std::max(sup, weighted_derivative(f, w));
      local.add(std::max(0.0, sup - (1.0 - eps * eps / 4.0)));
    }
  }
  return {lower.result(), upper.result(), peak.result(), local.result()};
}

std::vector<PropertyResult> suite_atoms(Rng& rng, const VerifyConfig& cfg) {
  Check closes("single-atom bracket closes at 1/(1-|z|^2)", 1e-12);
  Check half("atom at 0.5 has norm 4/3", 1e-12);
  Check normalized_cost("normalized atom has projective cost 1", 1e-15);
  Check merged("coincident atoms merge: cost of 2 gamma_0.5 is 8/3", 1e-15);
  CertificateConfig cc;
  cc.seminorm = cfg.sampling;
  for (int i = 0; i < 100; ++i) {
    const cplx z = disc_point(rng, 0.95);
    const NormBracket nb = norm_bracket(Molecule(Atom{z}), cc);
    const double exact = 1.0 / one_minus_sq(z);
    closes.add(std::max(std::abs(nb.lower - exact), std::abs(nb.upper - exact)) / exact);
    normalized_cost.add(std::abs(projective_cost(Molecule(Atom{z, true})) - 1.0));
  }
  const NormBracket h = norm_bracket(Molecule(Atom{0.5}), cc);
  half.add(std::max(std::abs(h.lower - 4.0 / 3.0), std::abs(h.upper - 4.0 / 3.0)));
  half.add(std::abs(atom_norm(0.5) - 4.0 / 3.0));
  merged.add(std::abs(projective_cost(Molecule(std::vector<Term>{{1.0, 0.5}, {1.0, 0.5}})) - 8.0 / 3.0));
  return {closes.result(), half.result(), normalized_cost.result(), merged.result()};
}

std::vector<PropertyResult> suite_pairing(Rng& rng, const VerifyConfig& cfg) {
  Check bilinear_mol("pairing is linear in the molecule", 1e-10);
  Check bilinear_fn("pairing is linear in the function", 1e-10);
  Check bound("|<gamma, f>| <= projective cost * seminorm upper", 1e-12);
  Check series("series pairing sum lambda_n (1-|z_n|^2) f'(z_n)", 1e-10);
  Check mass("series coefficient mass < projective cost + eps", 0.0);
  Check order("norm lower <= projective cost", 1e-12);

  std::vector<BlochFn> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(with_seminorm(BlochFn(random_bloch_fn(rng)), cfg.sampling));
  const CertificateConfig cheap = cheap_certificates(cfg.sampling);
  auto raw_pair = [](const Molecule& g, const BlochFn& f) {
    cplx s = 0.0;
    for (const auto& t : g.terms()) s += t.lambda * eval_derivative(f.fn(), t.z);
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const Molecule g1 = random_molecule(rng, 8, 0.95, 10.0), g2 = random_molecule(rng, 8, 0.95, 10.0);
    const BlochFn& f = pool[static_cast<std::size_t>(i) % pool.size()];
    const BlochFn& h = pool[static_cast<std::size_t>(i * 7 + 3) % pool.size()];
    const cplx a = gaussian(rng), b = gaussian(rng);
    bilinear_mol.add(scaled_gap(pair(a * g1 + b * g2, f), a * pair(g1, f) + b * pair(g2, f)));
    bilinear_fn.add(scaled_gap(pair(g1, BlochFn(a * f.fn() + b * h.fn())), a * pair(g1, f) + b * pair(g1, h)));
    const double cap = projective_cost(g1) * f.bracket()->upper;
    bound.add(std::max(0.0, std::abs(raw_pair(g1, f)) - cap) / std::max(1.0, cap));

    const Molecule g = random_molecule(rng, 4, 0.95, 10.0);
    std::vector<cplx> dict = g.points();
    for (cplx z : halton_disc(32, 0.95)) dict.push_back(z);
    const double eps = 1e-6;
    const SeriesExpansion s = series_approximation(g, eps, dict, cheap);
    cplx formula = 0.0;
    for (const auto& t : s.terms) formula += t.lambda * one_minus_sq(t.z) * eval_derivative(f.fn(), t.z);
    series.add(scaled_gap(raw_pair(g, f), formula));
    mass.require(s.coefficient_mass < projective_cost(g) + eps);
    if (i < 100) order.add(std::max(0.0, norm_lower(g1, cheap).value - projective_cost(g1)));
  }
  return {bilinear_mol.result(), bilinear_fn.result(), bound.result(), series.result(), mass.result(), order.result()};
}

std::vector<PropertyResult> suite_mobius(Rng& rng, const VerifyConfig& cfg) {
  Check assoc("composition is associative", 1e-12);
  Check ident("identity element", 1e-12);
  Check inverse("inverse elements", 1e-12);
  Check involution("phi_a o phi_a = id", 1e-12);
  Check pick_id("1-|phi_a(z)|^2 = (1-|z|^2)|phi_a'(z)|", 1e-12);
  Check invariance("seminorm lower invariant under automorphisms", 1e-4);
  Check wd("weighted derivative of f o phi at z equals that of f at phi(z)", 1e-10);

  const auto pts = random_points(rng, 100, 0.95);
  for (int i = 0; i < 200; ++i) {
    const MobiusMap a{disc_point(rng, 0.9), unimodular(rng)};
    const MobiusMap b{disc_point(rng, 0.9), unimodular(rng)};
    const MobiusMap c{disc_point(rng, 0.9), unimodular(rng)};
    assoc.add(mobius_gap(mobius_compose(mobius_compose(a, b), c), mobius_compose(a, mobius_compose(b, c)), pts));
    ident.add(std::max(mobius_gap(mobius_compose(a, MobiusMap{}), a, pts), mobius_gap(mobius_compose(MobiusMap{}, a), a, pts)));
    inverse.add(std::max(mobius_gap(mobius_compose(a, mobius_invert(a)), MobiusMap{}, pts),
                         mobius_gap(mobius_compose(mobius_invert(a), a), MobiusMap{}, pts)));
    const auto inv = MobiusMap::involution(a.a);
    involution.add(mobius_gap(mobius_compose(inv, inv), MobiusMap{}, pts));
  }
  for (int i = 0; i < 10000; ++i) {
    const auto phi = MobiusMap::involution(disc_point(rng, 0.99));
    const cplx z = disc_point(rng, 0.99);
    pick_id.add(std::abs(one_minus_sq(mobius_apply(phi, z)) - one_minus_sq(z) * std::abs(mobius_derivative(phi, z))));
  }

  const auto family = primitive_family();
  SamplingConfig s = sampling_only(cfg.sampling);
  s.radial = std::min(s.radial, 64);
  s.angular = std::min(s.angular, 128);
  std::vector<double> base;
  for (const auto& f : family) base.push_back(bloch_seminorm(BlochFn(f), s).lower);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % family.size();
    const HoloFn phi = mobius_self_map(disc_point(rng, 0.8), unimodular(rng));
    const BlochFn g = normalize(compose(family[k], phi));
    invariance.add(std::abs(bloch_seminorm(g, s).lower - base[k]));
    for (int j = 0; j < 5; ++j) {
      const cplx z = disc_point(rng, 0.95);
      wd.add(std::abs(weighted_derivative(g, z) - weighted_derivative(BlochFn(family[k]), eval(phi, z))));
    }
  }
  return {assoc.result(), ident.result(), inverse.result(), involution.result(),
          pick_id.result(), invariance.result(), wd.result()};
}

std::vector<PropertyResult> suite_pick_schwarz(Rng& rng, const VerifyConfig&) {
  Check ident("identity attains equality", 1e-15);
  Check autos("automorphisms attain equality", 1e-12);
  Check square("z^2 satisfies the strict inequality", 0.0);
  Check random("random self-maps fixing 0 satisfy the inequality", 1e-10);
  const auto grid = polar_grid(64, 128, 0.999);
  const double id = pick_schwarz_check(identity(), grid);
  ident.add(std::abs(id));
  for (int i = 0; i < 50; ++i) {
    const HoloFn h = mobius_self_map(disc_point(rng, 0.9), unimodular(rng));
    double worst = 0.0;
    for (cplx z : grid) {
      const auto j = jet(h, z, 1);
      worst = std::max(worst, std::abs(one_minus_sq(z) * std::abs(j[1]) - one_minus_sq(j[0])));
    }
    autos.add(worst);
  }
  square.add(std::max(0.0, pick_schwarz_check(monomial(2), grid)));
  for (int i = 0; i < 50; ++i) random.add(std::max(0.0, pick_schwarz_check(random_self_map_fixing_zero(rng), grid)));
  return {ident.result(), autos.result(), square.result(), random.result()};
}

std::vector<PropertyResult> suite_lift(Rng& rng, const VerifyConfig&) {
  Check adjoint("<lift_h gamma, f> = <gamma, f o h>", 1e-10);
  Check functorial("lift of g o h equals lift_g o lift_h", 1e-10);
  Check ident("identity lift is the identity", 0.0);
  Check contraction("projective cost does not grow under a lift", 1e-12);
  for (int i = 0; i < 200; ++i) {
    const Molecule gamma = random_molecule(rng, 8, 0.95, 10.0);
    const HoloFn h = random_self_map_fixing_zero(rng);
    const HoloFn g = random_self_map_fixing_zero(rng);
    const BlochFn f(random_bloch_fn(rng));
    const Molecule lifted = lift_composition(h, gamma);
    adjoint.add(scaled_gap(pair(lifted, f), pair(gamma, BlochFn(compose(f.fn(), h)))));
    contraction.add(std::max(0.0, projective_cost(lifted) - projective_cost(gamma)) / std::max(1.0, projective_cost(gamma)));

    const Molecule lhs = lift_composition(compose(g, h), gamma);
    const Molecule rhs = lift_composition(g, lifted);
    double gap = lhs.size() == rhs.size() ? 0.0 : kInf;
    for (const auto& t : lhs.terms()) {
      double best = kInf;
      for (const auto& u : rhs.terms()) {
        if (std::abs(u.z - t.z) <= 1e-12) best = std::min(best, scaled_gap(u.lambda, t.lambda));
      }
      gap = std::max(gap, best);
    }
    functorial.add(gap);

    const Molecule same = lift_composition(identity(), gamma);
    bool equal = same.size() == gamma.size();
    for (std::size_t k = 0; equal && k < same.size(); ++k) {
      equal = same.terms()[k].lambda == gamma.terms()[k].lambda && same.terms()[k].z == gamma.terms()[k].z;
    }
    ident.require(equal);
  }
  return {adjoint.result(), functorial.result(), ident.result(), contraction.result()};
}

std::vector<PropertyResult> suite_linearization(Rng& rng, const VerifyConfig& cfg) {
  Check definition("S_f(gamma) = sum lambda_k f'(z_k)", 1e-12);
  Check adjoint("x*(S_f(gamma)) = <gamma, f^t(x*)>", 1e-10);
  Check same("operator norm estimate equals the seminorm bracket", 0.0);
  Check atoms("sup over 1e4 normalized atoms matches the grid lower", 1e-9);
  Check below("normalized atoms stay below the seminorm upper", 1e-12);
  for (int i = 0; i < 500; ++i) {
    const int n = pick(rng, 1, 3);
    const VectorBlochMap f = random_vector_map(rng, n);
    const Molecule gamma = random_molecule(rng, 8, 0.95, 10.0);
    Eigen::VectorXcd x(n);
    for (int k = 0; k < n; ++k) x(k) = gaussian(rng);
    const Eigen::VectorXcd s = linearize_apply(f, gamma);
    double gap = 0.0;
    for (int k = 0; k < n; ++k) {
      cplx direct = 0.0;
      for (const auto& t : gamma.terms()) direct += t.lambda * eval_derivative(f.components()[static_cast<std::size_t>(k)].fn(), t.z);
      gap = std::max(gap, scaled_gap(s(k), direct));
    }
    definition.add(gap);
    adjoint.add(scaled_gap(x.transpose() * s, pair(gamma, transpose_apply(f, x))));
  }
  for (int i = 0; i < 4; ++i) {
    const VectorBlochMap f = random_vector_map(rng, pick(rng, 1, 3));
    const SupBracket a = operator_norm_estimate(f, cfg.sampling);
    const SupBracket b = vector_seminorm(f, cfg.sampling);
    same.require(a.lower == b.lower && a.upper == b.upper && a.certified == b.certified);
    std::vector<cplx> pts = b.argmax;
    double r_max = 1.0;
    for (const auto& c : f.components()) r_max = std::min(r_max, sampling_radius(c.fn(), cfg.sampling));
    for (cplx z : halton_disc(10000 - pts.size(), r_max)) pts.push_back(z);
    double sup = 0.0;
    for (cplx z : pts) {
      const double v = vector_norm(linearize_apply(f, Molecule(Atom{z, true})), f.norm());
      below.add(std::max(0.0, v - b.upper));
      sup = std::max(sup, v);
    }
    atoms.add(std::abs(sup - b.lower));
  }
  return {definition.result(), adjoint.result(), same.result(), atoms.result(), below.result()};
}

std::vector<PropertyResult> suite_rank(Rng& rng, const VerifyConfig&) {
  Check planted("bloch_rank recovers planted rank in C^5", 0.0);
  Check residual("factorization residual < 1e-8", 1e-8);
  Check parallel("(z^2/2, z^2) has rank 1 and T = (1,2)/sqrt5", 1e-12);
  Check invariant("rank invariant under rotations and invertible T", 0.0);
  Check zero("zero map has rank 0 and one-point covers", 0.0);
  Check interval("cover numbers of the identity range <= ceil(1/(2 eps)) + 1", 0.0);
  Check mobius("magnitude cover numbers of f o phi within 1 of those of f", 1.0);

  const std::vector<HoloFn> pool{identity(), cplx(0.5) * monomial(2), cplx(1.0 / 3.0) * monomial(3),
                                 cplx(0.25) * monomial(4), log1mz(), peaking(cplx(0.0, 0.5))};
  for (int i = 0; i < 100; ++i) {
    const int r = 1 + i % 3;
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<BlochFn> g;
    for (int k = 0; k < r; ++k) g.emplace_back(pool[idx[static_cast<std::size_t>(k)]]);
    Eigen::MatrixXcd T0(5, r);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < r; ++b) T0(a, b) = gaussian(rng);
    const VectorBlochMap f = apply_matrix(T0, VectorBlochMap(std::move(g), random_norm(rng)));
    planted.require(bloch_rank(f).rank == r);
    residual.add(factorize(f).residual);
    if (i < 20) {
      const VectorBlochMap rotated = precompose(f, unimodular(rng) * identity());
      Eigen::MatrixXcd S(5, 5);
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) S(a, b) = gaussian(rng);
      invariant.require(bloch_rank(rotated).rank == r && bloch_rank(apply_matrix(S, f)).rank == r);
    }
  }
  const VectorBlochMap par({BlochFn(cplx(0.5) * monomial(2)), BlochFn(monomial(2))});
  const Factorization fz = factorize(par);
  parallel.add(bloch_rank(par).rank == 1 ? 0.0 : kInf);
  parallel.add(std::max(std::abs(fz.T(0, 0) - 1.0 / std::sqrt(5.0)), std::abs(fz.T(1, 0) - 2.0 / std::sqrt(5.0))));
  parallel.add(std::abs(eval_derivative(fz.g.components()[0].fn(), 0.3) - std::sqrt(5.0) * 0.3));

  RangeConfig rc;
  const VectorBlochMap zero_map({BlochFn(HoloFn()), BlochFn(HoloFn())});
  const RangeDiagnostics zd = range_diagnostics(zero_map, rc);
  bool ok = zd.rank == 0;
  for (const auto& [eps, n] : zd.cover_numbers) ok = ok && n == 1;
  zero.require(ok);
  const RangeDiagnostics id = range_diagnostics(VectorBlochMap({BlochFn(identity())}), rc);
  for (const auto& [eps, n] : id.cover_numbers) {
    interval.add(std::max(0.0, static_cast<double>(n) - (std::ceil(1.0 / (2.0 * eps)) + 1.0)));
  }
  for (const auto& f : primitive_family()) {
    const HoloFn phi = mobius_self_map(disc_point(rng, 0.5), unimodular(rng));
    const auto a = range_diagnostics(VectorBlochMap({BlochFn(f)}), rc);
    const auto b = range_diagnostics(VectorBlochMap({normalize(compose(f, phi))}), rc);
    for (const auto& [eps, n] : a.magnitude_cover_numbers) {
      mobius.add(std::abs(static_cast<double>(n) - static_cast<double>(b.magnitude_cover_numbers.at(eps))));
    }
  }
  return {planted.result(), residual.result(), parallel.result(), invariant.result(),
          zero.result(),    interval.result(), mobius.result()};
}

std::vector<PropertyResult> suite_transpose(Rng& rng, const VerifyConfig& cfg) {
  Check scalar("n = 1 matches the scalar bracket", 1e-12);
  Check peak("(Peaking(0), 0) in sup norm reaches 1", 1e-12);
  Check nested("lower grows with nested dual samples", 0.0);
  Check ordered("lower <= upper", 0.0);
  Check bound("p_B(x* o f) <= ||x*|| p_B(f)", 1e-8);
  Check extract("x* = (1, 0) extracts the first component", 1e-12);

  SphereConfig sc;
  sc.seminorm = cfg.sampling;
  const BlochFn f1(log1mz());
  const SupBracket b1 = bloch_seminorm(f1, cfg.sampling);
  const TransposeEstimate t1 = transpose_norm_estimate(VectorBlochMap({f1}), sc);
  scalar.add(std::max(std::abs(t1.lower - b1.lower), std::abs(t1.upper - b1.upper)));

  const TransposeEstimate tp = transpose_norm_estimate(VectorBlochMap({BlochFn(peaking(0.0)), BlochFn(HoloFn())}, NormKind::Sup), sc);
  peak.add(std::abs(tp.lower - 1.0));

  // Uppers stay certified on a coarse starting grid.
  SphereConfig coarse = sc;
  coarse.seminorm.radial = std::min(coarse.seminorm.radial, 32);
  coarse.seminorm.angular = std::min(coarse.seminorm.angular, 64);
  for (int i = 0; i < 6; ++i) {
    const VectorBlochMap f = random_vector_map(rng, pick(rng, 2, 3));
    double prev = -1.0;
    for (std::size_t count : {0u, 16u, 64u, 256u}) {
      SphereConfig s2 = coarse;
      s2.random_count = count;
      const TransposeEstimate t = transpose_norm_estimate(f, s2);
      nested.require(t.lower >= prev);
      ordered.require(t.lower <= t.upper);
      prev = t.lower;
    }
  }
  for (int i = 0; i < 20; ++i) {
    const VectorBlochMap f = random_vector_map(rng, pick(rng, 1, 3));
    Eigen::VectorXcd x(static_cast<Eigen::Index>(f.dim()));
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = gaussian(rng);
    const double fu = vector_seminorm(f, coarse.seminorm).upper;
    const double target = vector_norm(x, dual_kind(f.norm())) * fu;
    SamplingConfig decide = coarse.seminorm;
    decide.bb_target = target;
    bound.add(std::max(0.0, bloch_seminorm(transpose_apply(f, x), decide).upper - target));
  }
  const VectorBlochMap fe({BlochFn(cplx(0.5) * monomial(2)), BlochFn(cplx(1.0 / 3.0) * monomial(3))});
  Eigen::VectorXcd e(2);
  e << 1.0, 0.0;
  for (cplx z : random_points(rng, 20, 0.95)) extract.add(std::abs(pair(Molecule(Atom{z}), transpose_apply(fe, e)) - z));
  return {scalar.result(), peak.result(), nested.result(), ordered.result(), bound.result(), extract.result()};
}

std::vector<PropertyResult> suite_ideal(Rng& rng, const VerifyConfig& cfg) {
  Check trivial("T = I, h = id leaves the bracket unchanged", 0.0);
  Check doubled("T = 2I doubles the seminorm", 1e-12);
  Check bound("p_B(T o f o h) <= ||T|| p_B(f) + 1e-8", 0.0);
  Check sampled("sampled lower of p_B(T o f o h) <= ||T|| upper p_B(f)", 0.0);
  Check lin("S_{T o f o h} = T o S_f o lift_h", 1e-9);

  const VectorBlochMap f0({BlochFn(cplx(0.5) * monomial(2)), BlochFn(peaking(cplx(0.2, 0.3)))});
  const SupBracket base = vector_seminorm(f0, cfg.sampling);
  const SupBracket same = vector_seminorm(apply_matrix(Eigen::MatrixXcd::Identity(2, 2), precompose(f0, identity())), cfg.sampling);
  trivial.require(same.lower == base.lower && same.upper == base.upper);
  const SupBracket twice = vector_seminorm(apply_matrix(2.0 * Eigen::MatrixXcd::Identity(2, 2), f0), cfg.sampling);
  doubled.add(std::max(std::abs(twice.lower - 2.0 * base.lower), std::abs(twice.upper - 2.0 * base.upper)));

  // Certified uppers do not depend on the starting grid; a coarse one keeps 200 cases quick.
  IdealConfig ic;
  ic.seminorm = cfg.sampling;
  ic.seminorm.radial = 32;
  ic.seminorm.angular = 64;
  for (int i = 0; i < 200; ++i) {
    const int n = pick(rng, 1, 3), m = pick(rng, 1, 4);
    const VectorBlochMap f = random_vector_map(rng, n);
    Eigen::MatrixXcd T(m, n);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < n; ++b) T(a, b) = gaussian(rng);
    ic.seed = rng();
    const IdealReport rep = ideal_inequality_check(T, f, random_self_map_fixing_zero(rng), ic);
    bound.add(rep.bound_ok ? 0.0 : rep.composite_upper - (rep.t_norm * rep.f_upper + 1e-8));
    sampled.add(std::max(0.0, rep.composite_lower - rep.t_norm * rep.f_upper));
    lin.add(rep.max_linearization_error);
  }
  return {trivial.result(), doubled.result(), bound.result(), sampled.result(), lin.result()};
}

std::vector<PropertyResult> suite_series(Rng& rng, const VerifyConfig& cfg) {
  Check single("single atom: one term 1/(1-|z|^2), zero residual", 1e-15);
  Check two("two atoms in the dictionary: two exact terms", 1e-15);
  Check random("random molecules: residual < eps and mass < cost + eps", 0.0);
  Check coarse("coarse dictionaries are rejected", 0.0);
  const CertificateConfig cheap = cheap_certificates(cfg.sampling);

  const cplx z = {0.3, -0.4};
  const std::vector<cplx> dict{0.0, z, cplx(-0.5, 0.1), cplx(0.7, 0.0)};
  const SeriesExpansion s1 = series_approximation(Molecule(Atom{z}), 1e-9, dict, cheap);
  single.add(s1.terms.size() == 1 ? std::max(std::abs(s1.terms[0].lambda - 1.0 / one_minus_sq(z)), s1.residual_lower) : kInf);
  const Molecule m2(std::vector<Term>{{2.0, z}, {cplx(0.0, -1.0), 0.7}});
  const SeriesExpansion s2 = series_approximation(m2, 1e-9, dict, cheap);
  two.add(s2.terms.size() == 2 ? std::max(std::abs(pair(to_molecule(s2) - m2, BlochFn(identity()))), s2.residual_lower) : kInf);

  for (int i = 0; i < 100; ++i) {
    const Molecule g = random_molecule(rng, 5, 0.8, 1.0);
    std::vector<cplx> d;
    for (cplx p : g.points()) d.push_back(p + 1e-6 * disc_point(rng, 1.0));
    for (cplx p : halton_disc(16, 0.9)) d.push_back(p);
    const double eps = 1e-3;
    const SeriesExpansion s = series_approximation(g, eps, d, cheap);
    random.require(s.residual_lower < eps && s.coefficient_mass < projective_cost(g) + eps);
  }
  bool threw = false;
  try {
    series_approximation(Molecule(Atom{0.5}), 1e-6, std::vector<cplx>{0.0, 0.9}, cheap);
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::DictionaryTooCoarse;
  }
  coarse.require(threw);
  return {single.result(), two.result(), random.result(), coarse.result()};
}

std::vector<PropertyResult> suite_tail(Rng&, const VerifyConfig& cfg) {
  Check log_tail("tail of log(1-z) is 1 + r and not little Bloch", 1e-12);
  Check peak_tail("tail of Peaking(0) is 1 - r^2", 1e-15);
  Check dilated("dilate(f, 0.9) is little Bloch for the primitive family", 0.0);
  Check monotone("upper(f_r) <= upper(f) for r in {0.5, 0.9, 0.99}", 0.0);
  const auto radii = default_tail_radii();
  const TailProfile lt = little_bloch_tail(BlochFn(log1mz()), radii);
  for (std::size_t i = 0; i < radii.size(); ++i) log_tail.add(std::abs(lt.values[i] - (1.0 + radii[i])));
  log_tail.add(is_little_bloch(lt) ? kInf : 0.0);
  const TailProfile pt = little_bloch_tail(BlochFn(peaking(0.0)), radii);
  for (std::size_t i = 0; i < radii.size(); ++i) peak_tail.add(std::abs(pt.values[i] - (1.0 - radii[i] * radii[i])));
  for (const auto& f : primitive_family()) {
    dilated.require(is_little_bloch(little_bloch_tail(BlochFn(dilate(f, 0.9)), radii)));
    const double up = bloch_seminorm(BlochFn(f), cfg.sampling).upper;
    for (double r : {0.5, 0.9, 0.99}) {
      monotone.add(std::max(0.0, bloch_seminorm(BlochFn(dilate(f, r)), cfg.sampling).upper - up));
    }
  }
  return {log_tail.result(), peak_tail.result(), dilated.result(), monotone.result()};
}

std::vector<PropertyResult> suite_landmarks(Rng&, const VerifyConfig& cfg) {
  Check quad("p_B(z^2/2) lower = 2/(3 sqrt 3)", 1e-6);
  Check log("p_B(log(1-z)) lower in [1.99, 2]", 0.0);
  Check id("p_B(identity) lower = 1", 1e-12);
  Check peak("p_B(Peaking(0.5)) lower = 1", 1e-6);
  quad.add(std::abs(bloch_seminorm(BlochFn(cplx(0.5) * monomial(2)), cfg.sampling).lower - 2.0 / (3.0 * std::sqrt(3.0))));
  const double l = bloch_seminorm(BlochFn(log1mz()), cfg.sampling).lower;
  log.add(std::max({0.0, 1.99 - l, l - 2.0}));
  id.add(std::abs(bloch_seminorm(BlochFn(identity()), cfg.sampling).lower - 1.0));
  peak.add(std::abs(bloch_seminorm(BlochFn(peaking(0.5)), cfg.sampling).lower - 1.0));
  return {quad.result(), log.result(), id.result(), peak.result()};
}

using SuiteFn = std::function<std::vector<PropertyResult>(Rng&, const VerifyConfig&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"peaking", suite_peaking},   {"atoms", suite_atoms},
      {"mobius", suite_mobius},     {"pick-schwarz", suite_pick_schwarz},
      {"pairing", suite_pairing},   {"lift", suite_lift},
      {"linearization", suite_linearization},
      {"rank", suite_rank},         {"transpose", suite_transpose},
      {"ideal", suite_ideal},       {"series", suite_series},
      {"tail", suite_tail},         {"landmarks", suite_landmarks},
  };
  return r;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<SuiteReport> run_verify(const std::string& suite, const VerifyConfig& cfg) {
  std::vector<SuiteReport> out;
  std::uint64_t index = 0;
  for (const auto& [name, fn] : registry()) {
    ++index;
    if (suite != "all" && suite != name) continue;
    Rng rng(cfg.seed + index);
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep{name, fn(rng, cfg), 0.0};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(rep));
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "unknown verify suite: " + suite);
  return out;
}

json to_json(const PropertyResult& p) {
  return {{"name", p.name}, {"pass", p.pass}, {"max_violation", p.max_violation}, {"tolerance", p.tolerance}, {"cases", p.cases}};
}

json to_json(const SuiteReport& s) {
  json props = json::array();
  for (const auto& p : s.properties) props.push_back(to_json(p));
  return {{"suite", s.suite}, {"pass", s.pass()}, {"properties", props}};
}

}  // namespace blochcalc
