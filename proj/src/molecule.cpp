#include "blochcalc/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "blochcalc/lp.hpp"

namespace blochcalc {

namespace {

double one_minus_sq(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

struct Candidate {
  HoloFn f;
  std::optional<double> known_upper;  // exact p_B when known in closed form
  std::string description;
};

std::vector<cplx> poly_mul_linear(const std::vector<cplx>& p, cplx root, cplx scale) {
  // p(z) * (z - root) * scale
  std::vector<cplx> r(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + 1] += p[i] * scale;
    r[i] -= p[i] * root * scale;
  }
  return r;
}

// f' = sum c_m z^m maximising Re <gamma, f> under (1-|w|^2)|f'(w)| <= 1 on the grid.
std::optional<HoloFn> lp_certificate(const Molecule& gamma, const CertificateConfig& cfg) {
  const int D = std::max(cfg.lp_degree, 1);
  constexpr int kGon = 16;
  const auto grid = halton_disc(static_cast<std::size_t>(std::max(cfg.lp_grid, D + 1)), 0.98);
  const Eigen::Index rows = static_cast<Eigen::Index>(grid.size() * kGon + 4 * D);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, 2 * D);
  Eigen::VectorXd b(rows);
  const double inradius = std::cos(std::numbers::pi / kGon);
  Eigen::Index row = 0;
  for (cplx w : grid) {
    const double weight = one_minus_sq(w);
    for (int j = 0; j < kGon; ++j) {
      const cplx dir = std::polar(1.0, -2.0 * std::numbers::pi * j / kGon);
      cplx wm = 1.0;
      for (int m = 0; m < D; ++m) {
        const cplx t = weight * dir * wm;
        A(row, m) = t.real();
        A(row, D + m) = -t.imag();
        wm *= w;
      }
      b(row++) = inradius;
    }
  }
  // Box |x_i| <= big keeps the LP bounded.
  const double big = 1e6;
  for (int i = 0; i < 2 * D; ++i) {
    A(row, i) = 1.0;
    b(row++) = big;
    A(row, i) = -1.0;
    b(row++) = big;
  }
  Eigen::VectorXd c(2 * D);
  for (int m = 0; m < D; ++m) {
    cplx s = 0.0;
    for (const auto& t : gamma.terms()) s += t.lambda * std::pow(t.z, m);
    c(m) = s.real();
    c(D + m) = -s.imag();
  }
  const LpResult res = maximize_free(c, A, b);
  if (!res.optimal) return std::nullopt;
  std::vector<cplx> coeffs(static_cast<std::size_t>(D));
  for (int m = 0; m < D; ++m) coeffs[static_cast<std::size_t>(m)] = {res.x(m), res.x(D + m)};
  return antiderivative0(polynomial(std::move(coeffs)));
}

}  // namespace

Molecule::Molecule(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(std::abs(t.z) < 1.0)) throw Error(ErrorKind::PointOutsideDisc, "atom point must lie in the disc");
  }
  bool ok = true;
  for (std::size_t i = 0; i < terms_.size() && ok; ++i) {
    ok = terms_[i].lambda != 0.0;
    for (std::size_t j = 0; j < i && ok; ++j) ok = std::abs(terms_[i].z - terms_[j].z) > kMergeTolerance;
  }
  canonical_ = ok;
}

Molecule::Molecule(const Atom& atom, cplx lambda)
    : Molecule(std::vector<Term>{{atom.normalized ? lambda * one_minus_sq(atom.z) : lambda, atom.z}}) {}

Molecule Molecule::canonicalized() const {
  if (canonical_) return *this;
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& m) { return std::abs(m.z - t.z) <= kMergeTolerance; });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->lambda += t.lambda;
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.lambda == 0.0; });
  return Molecule(std::move(merged));
}

std::vector<cplx> Molecule::points() const {
  std::vector<cplx> p;
  for (const auto& t : terms_) p.push_back(t.z);
  return p;
}

Molecule operator+(const Molecule& a, const Molecule& b) {
  std::vector<Term> t = a.terms();
  t.insert(t.end(), b.terms().begin(), b.terms().end());
  return Molecule(std::move(t)).canonicalized();
}

Molecule operator*(cplx c, const Molecule& m) {
  std::vector<Term> t = m.terms();
  for (auto& x : t) x.lambda *= c;
  return Molecule(std::move(t)).canonicalized();
}

Molecule operator-(const Molecule& a, const Molecule& b) { return a + cplx(-1.0) * b; }

double atom_norm(cplx z) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::PointOutsideDisc, "atom point must lie in the disc");
  return 1.0 / one_minus_sq(z);
}

cplx pair(const Molecule& gamma, const BlochFn& f) {
  if (!f.normalized()) throw Error(ErrorKind::NotNormalized, "pairing needs f(0) = 0");
  cplx s = 0.0;
  for (const auto& t : gamma.terms()) s += t.lambda * eval_derivative(f.fn(), t.z);
  if (const auto& b = f.bracket(); b && b->certified) {
    const double cap = projective_cost(gamma) * b->upper;
    if (std::abs(s) > cap * (1.0 + 1e-9) + 1e-12) throw std::logic_error("pairing exceeds projective bound");
  }
  return s;
}

double projective_cost(const Molecule& gamma) {
  const Molecule canon = gamma.canonicalized();
  double s = 0.0;
  for (const auto& t : canon.terms()) s += std::abs(t.lambda) / one_minus_sq(t.z);
  return s;
}

std::vector<BlochFn> interpolating_certificates(std::span<const cplx> points) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(points[i] - points[j]) <= kMergeTolerance)
        throw Error(ErrorKind::DuplicatePoints, "interpolation points must be distinct");
  std::vector<BlochFn> out;
  out.reserve(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::vector<cplx> q{1.0};
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k != j) q = poly_mul_linear(q, points[k], 1.0 / (points[j] - points[k]));
    }
    out.emplace_back(antiderivative0(polynomial(std::move(q))));
  }
  return out;
}

LowerBound norm_lower(const Molecule& gamma_in, const CertificateConfig& cfg) {
  const Molecule gamma = gamma_in.canonicalized();
  LowerBound best;
  best.description = "zero";
  if (gamma.empty()) return best;

  std::vector<Candidate> cands;
  if (cfg.use_peaking) {
    for (const auto& t : gamma.terms()) cands.push_back({peaking(t.z), 1.0, "peaking at atom point"});
    for (cplx w : halton_disc(static_cast<std::size_t>(std::max(cfg.extra_points, 0)), cfg.extra_radius)) {
      cands.push_back({peaking(w), 1.0, "peaking at sample point"});
    }
  }
  if (cfg.use_monomials) {
    for (int m = 0; m <= cfg.max_degree; ++m) {
      // The closed-form seminorm of a monomial is exact.
      const HoloFn f = cplx(1.0 / (m + 1)) * monomial(static_cast<unsigned>(m + 1));
      cands.push_back({f, structural_seminorm_bound(f), "monomial antiderivative degree " + std::to_string(m + 1)});
    }
  }
  if (cfg.use_interpolating && gamma.size() > 1) {
    const auto pts = gamma.points();
    const auto P = interpolating_certificates(pts);
    HoloFn unimodular, weighted;
    for (std::size_t j = 0; j < P.size(); ++j) {
      const cplx l = gamma.terms()[j].lambda;
      const cplx sigma = std::conj(l) / std::abs(l);
      unimodular = unimodular + sigma * P[j].fn();
      weighted = weighted + cplx(1.0 / one_minus_sq(pts[j])) * sigma * P[j].fn();
    }
    cands.push_back({unimodular, std::nullopt, "unimodular interpolating recombination"});
    cands.push_back({weighted, std::nullopt, "weighted interpolating recombination"});
  }
  if (cfg.lp_search) {
    if (auto f = lp_certificate(gamma, cfg)) cands.push_back({*f, std::nullopt, "polynomial search"});
  }

  std::vector<double> values(cands.size(), 0.0);
  std::vector<double> uppers(cands.size(), 0.0);
  std::vector<cplx> pairs(cands.size(), 0.0);
  parallel_for(cands.size(), [&](std::size_t i) {
    const BlochFn f(cands[i].f);
    double upper = 0.0;
    if (cands[i].known_upper) {
      upper = *cands[i].known_upper;
    } else {
      const SupBracket b = bloch_seminorm(f, cfg.seminorm);
      if (!b.certified) return;
      upper = b.upper;
    }
    if (!(upper > 0.0)) return;
    cplx s = 0.0;
    for (const auto& t : gamma.terms()) s += t.lambda * eval_derivative(f.fn(), t.z);
    pairs[i] = s;
    uppers[i] = upper;
    values[i] = std::abs(s) / upper;
  });
  std::size_t arg = cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (values[i] > best.value) {
      best.value = values[i];
      arg = i;
    }
  }
  if (arg < cands.size()) {
    const cplx phase = std::conj(pairs[arg]) / std::abs(pairs[arg]);
    best.certificate = BlochFn(cplx(phase / uppers[arg]) * cands[arg].f);
    best.description = cands[arg].description;
  }
  return best;
}

NormBracket norm_bracket(const Molecule& gamma, const CertificateConfig& cfg) {
  const LowerBound lb = norm_lower(gamma, cfg);
  NormBracket nb;
  nb.upper = projective_cost(gamma);
  nb.lower = std::min(lb.value, nb.upper);
  nb.lower_certificate = lb.description;
  return nb;
}

Molecule lift_composition(const HoloFn& h, const Molecule& gamma) {
  if (!h.is_self_map()) throw Error(ErrorKind::NotSelfMap, "lift needs a certified self-map");
  if (std::abs(eval(h, 0.0)) > 1e-12) throw Error(ErrorKind::NotSelfMap, "lift needs h(0) = 0");
  std::vector<Term> t;
  t.reserve(gamma.size());
  for (const auto& term : gamma.terms()) {
    const auto j = jet(h, term.z, 1);
    t.push_back({term.lambda * j[1], j[0]});
  }
  return Molecule(std::move(t)).canonicalized();
}

Molecule to_molecule(const SeriesExpansion& s) {
  std::vector<Term> t;
  for (const auto& x : s.terms) t.push_back({x.lambda * one_minus_sq(x.z), x.z});
  return Molecule(std::move(t)).canonicalized();
}

SeriesExpansion series_approximation(const Molecule& gamma_in, double eps, std::span<const cplx> dictionary,
                                     const CertificateConfig& cfg) {
  if (!(eps > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  const Molecule gamma = gamma_in.canonicalized();
  std::vector<Term> order = gamma.terms();
  std::stable_sort(order.begin(), order.end(), [](const Term& a, const Term& b) {
    return std::abs(a.lambda) / one_minus_sq(a.z) > std::abs(b.lambda) / one_minus_sq(b.z);
  });

  SeriesExpansion out;
  auto residual_of = [&] { return (gamma - to_molecule(out)).canonicalized(); };
  bool done = gamma.empty();
  for (const auto& atom : order) {
    if (done) break;
    if (dictionary.empty()) throw Error(ErrorKind::DictionaryTooCoarse, "empty dictionary");
    const auto near = std::min_element(dictionary.begin(), dictionary.end(), [&](cplx a, cplx b) {
      return std::abs(a - atom.z) < std::abs(b - atom.z);
    });
    if (std::abs(*near - atom.z) > 1e-3) {
      throw Error(ErrorKind::DictionaryTooCoarse, "no dictionary point within 1e-3 of an atom");
    }
    const cplx mu = atom.lambda / one_minus_sq(*near);
    auto it = std::find_if(out.terms.begin(), out.terms.end(), [&](const Term& t) { return t.z == *near; });
    if (it == out.terms.end()) {
      out.terms.push_back({mu, *near});
    } else {
      it->lambda += mu;
    }
    const Molecule residual = residual_of();
    out.residual_lower = residual.empty() ? 0.0 : norm_lower(residual, cfg).value;
    done = out.residual_lower < eps;
  }
  if (!done && !gamma.empty()) {
    throw Error(ErrorKind::DictionaryTooCoarse, "residual stalled above the tolerance");
  }
  for (const auto& t : out.terms) out.coefficient_mass += std::abs(t.lambda);
  if (!(out.coefficient_mass < projective_cost(gamma) + eps)) {
    throw Error(ErrorKind::DictionaryTooCoarse, "coefficient mass exceeds the projective cost budget");
  }
  return out;
}

}  // namespace blochcalc
