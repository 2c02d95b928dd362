// Acceptance run: every verify suite once (timed as `verify all`), then each criterion
// combines its suite with an oracle written here from closed forms.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "blochcalc/verify.hpp"

using namespace blochcalc;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  std::function<std::string(bool&)> oracle;
};

std::mt19937_64 rng(424242);

cplx random_disc(double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * std::sqrt(u(rng));
  return std::polar(r, 2.0 * std::numbers::pi * u(rng));
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// max over a polar grid of a closed-form objective, radii up to r_max.
double grid_max(const std::function<double(cplx)>& g, int radial, int angular, double r_max) {
  double best = 0.0;
  for (int i = 1; i <= radial; ++i) {
    const double r = r_max * (1.0 - std::pow(1.0 - double(i) / radial, 3.0));
    for (int j = 0; j < angular; ++j) best = std::max(best, g(std::polar(r, 2.0 * std::numbers::pi * j / angular)));
  }
  return best;
}

std::string peaking_oracle(bool& ok) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx z0 = random_disc(0.9);
    // (1-|w|^2) |f'(w)| for f(w) = (1-|z0|^2) w / (1 - conj(z0) w)
    auto weighted = [&](cplx w) {
      return (1.0 - std::norm(w)) * (1.0 - std::norm(z0)) / std::norm(1.0 - std::conj(z0) * w);
    };
    const double lib = bloch_seminorm(normalize(peaking(z0))).lower;
    worst = std::max({worst, std::abs(lib - weighted(z0)), grid_max(weighted, 64, 64, 0.999) - 1.0});
  }
  ok = worst <= 1e-6;
  return fmt("max |lower - closed-form peak| = %.2e over 50 points", worst);
}

std::string atom_oracle(bool& ok) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx z = random_disc(0.95);
    const NormBracket b = norm_bracket(Molecule(Atom{z}));
    const double exact = 1.0 / (1.0 - std::norm(z));
    worst = std::max({worst, std::abs(b.lower - exact), std::abs(b.upper - exact)});
  }
  const NormBracket half = norm_bracket(Molecule(Atom{0.5}));
  worst = std::max({worst, std::abs(half.lower - 4.0 / 3.0), std::abs(half.upper - 4.0 / 3.0)});
  ok = worst <= 1e-12;
  return fmt("max |bracket - 1/(1-|z|^2)| = %.2e", worst);
}

std::string pairing_oracle(bool& ok) {
  double worst = 0.0;
  std::uniform_int_distribution<int> m_dist(1, 6);
  for (int i = 0; i < 500; ++i) {
    const int m = m_dist(rng);
    std::vector<Term> terms;
    cplx expected = 0.0;
    for (int k = 0; k < 3; ++k) {
      const cplx z = random_disc(0.95), lambda = random_disc(2.0);
      terms.push_back({lambda, z});
      expected += lambda * double(m) * std::pow(z, m - 1);
    }
    const cplx got = pair(Molecule(terms), normalize(monomial(m)));
    worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
  }
  ok = worst <= 1e-10;
  return fmt("<gamma, z^m> against sum lambda m z^(m-1): max error %.2e", worst);
}

std::string mobius_oracle(bool& ok) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const cplx a = random_disc(0.99), z = random_disc(0.99);
    const cplx lambda = std::polar(1.0, std::uniform_real_distribution<double>(0, 6.28)(rng));
    const cplx phi = lambda * (a - z) / (1.0 - std::conj(a) * z);
    const cplx dphi = lambda * (std::norm(a) - 1.0) / ((1.0 - std::conj(a) * z) * (1.0 - std::conj(a) * z));
    const MobiusMap m{a, lambda};
    worst = std::max({worst, std::abs(mobius_apply(m, z) - phi), std::abs(mobius_derivative(m, z) - dphi),
                      std::abs((1.0 - std::norm(phi)) - (1.0 - std::norm(z)) * std::abs(dphi))});
  }
  ok = worst <= 1e-12;
  return fmt("closed-form phi_a, phi_a' and the Pick identity on 1e4 pairs: max error %.2e", worst);
}

std::string lift_oracle(bool& ok) {
  // h = z^2, f = z^3: <lift gamma, f> = sum lambda 2z * 3 (z^2)^2.
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Term> terms;
    cplx expected = 0.0;
    for (int k = 0; k < 3; ++k) {
      const cplx z = random_disc(0.95), lambda = random_disc(1.0);
      terms.push_back({lambda, z});
      expected += lambda * 2.0 * z * 3.0 * std::pow(z, 4);
    }
    const Molecule lifted = lift_composition(monomial(2), Molecule(terms));
    worst = std::max(worst, std::abs(pair(lifted, normalize(monomial(3))) - expected));
  }
  ok = worst <= 1e-10;
  return fmt("lift along z^2 paired with z^3 against the chain rule: max error %.2e", worst);
}

std::string linearization_oracle(bool& ok) {
  // f = (z, z^2/2, log(1-z)), S_f(gamma) = sum lambda (1, z, -1/(1-z)).
  const VectorBlochMap f({normalize(identity()), normalize(cplx(0.5) * monomial(2)), normalize(log1mz())},
                         NormKind::L2);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    std::vector<Term> terms;
    Eigen::Vector3cd expected = Eigen::Vector3cd::Zero();
    for (int k = 0; k < 4; ++k) {
      const cplx z = random_disc(0.95), lambda = random_disc(1.0);
      terms.push_back({lambda, z});
      expected += lambda * Eigen::Vector3cd(1.0, z, -1.0 / (1.0 - z));
    }
    worst = std::max(worst, (linearize_apply(f, Molecule(terms)) - expected).norm() / std::max(1.0, expected.norm()));
  }
  ok = worst <= 1e-10;
  return fmt("S_f against hand-differentiated components: max error %.2e", worst);
}

std::string rank_oracle(bool& ok) {
  // components T * (z, z^2, z^3)^T with T of known rank
  int misses = 0;
  for (int r = 1; r <= 3; ++r) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(5, r), B = Eigen::MatrixXcd::Random(r, 3);
    const Eigen::MatrixXcd T = A * B;
    std::vector<BlochFn> comps;
    for (int i = 0; i < 5; ++i)
      comps.push_back(normalize(polynomial({0.0, T(i, 0), T(i, 1), T(i, 2)})));
    if (bloch_rank(VectorBlochMap(comps)).rank != Eigen::FullPivLU<Eigen::MatrixXcd>(T).rank()) ++misses;
  }
  const VectorBlochMap pairmap({normalize(cplx(0.5) * monomial(2)), normalize(monomial(2))});
  const bool rank_one = bloch_rank(pairmap).rank == 1;
  ok = misses == 0 && rank_one;
  return fmt("planted ranks 1..3 against LU rank: %.0f misses; (z^2/2, z^2) rank one: %.0f", misses, rank_one);
}

std::string ideal_oracle(bool& ok) {
  // T = diag(2, 1), f = (z, z^2/2) in l2, h = z^2. Closed form on a grid:
  // p_B(f) = sup (1-|z|^2) sqrt(1 + |z|^2), composite derivative (4z, 2z^3).
  auto f_w = [](cplx z) { return (1.0 - std::norm(z)) * std::sqrt(1.0 + std::norm(z)); };
  auto g_w = [](cplx z) { return (1.0 - std::norm(z)) * std::sqrt(16.0 * std::norm(z) + 4.0 * std::pow(std::norm(z), 3)); };
  const double pf = grid_max(f_w, 400, 8, 0.999), pc = grid_max(g_w, 400, 8, 0.999);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2, 2);
  T(0, 0) = 2.0;
  T(1, 1) = 1.0;
  const VectorBlochMap f({normalize(identity()), normalize(cplx(0.5) * monomial(2))});
  const IdealReport rep = ideal_inequality_check(T, f, monomial(2));
  const double err = std::max(std::abs(rep.composite_lower - pc), std::abs(rep.f_upper - pf));
  ok = pc <= 2.0 * pf + 1e-8 && rep.ok() && err <= 1e-3;
  return fmt("grid oracle p_B(Tfh) = %.6f <= 2 p_B(f) = %.6f", pc, 2.0 * pf) + fmt("; library gap %.1e", err);
}

std::string tail_oracle(bool& ok) {
  const auto radii = default_tail_radii();
  const TailProfile t = little_bloch_tail(normalize(log1mz()), radii);
  double worst = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) worst = std::max(worst, std::abs(t.values[i] - (1.0 + radii[i])));
  // z^2 dilated by 0.9: (1-r^2) * 2 * 0.81 r, decreasing to 0 for r >= 1/sqrt 3.
  const TailProfile d = little_bloch_tail(normalize(dilate(monomial(2), 0.9)), radii);
  const double last = d.values.back(), exact_last = (1.0 - radii.back() * radii.back()) * 1.62 * radii.back();
  ok = worst <= 1e-9 && !is_little_bloch(t) && is_little_bloch(d) && std::abs(last - exact_last) <= 1e-12;
  return fmt("log(1-z) tail against 1 + r: max error %.2e; dilated z^2 tail end %.2e", worst, last);
}

std::string landmark_oracle(bool& ok) {
  // golden-section search of r (1 - r^2) on [0, 1]
  double lo = 0.0, hi = 1.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto obj = [](double r) { return r * (1.0 - r * r); };
  while (hi - lo > 1e-12) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    (obj(a) < obj(b) ? lo : hi) = (obj(a) < obj(b) ? a : b);
  }
  const double oracle = obj(0.5 * (lo + hi));
  const double lib = bloch_seminorm(normalize(cplx(0.5) * monomial(2))).lower;
  const double log_grid = grid_max([](cplx z) { return (1.0 - std::norm(z)) / std::abs(1.0 - z); }, 2000, 16, 0.99999);
  const double log_lib = bloch_seminorm(normalize(log1mz())).lower;
  ok = std::abs(lib - oracle) <= 1e-6 && std::abs(oracle - 2.0 / (3.0 * std::sqrt(3.0))) <= 1e-9 && log_lib >= 1.99 &&
       log_lib <= 2.0 && log_grid >= 1.99 && log_grid <= 2.0;
  return fmt("z^2/2: library %.9f vs golden section", lib) + fmt(" %.9f; log(1-z): library %.6f", oracle, log_lib);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = run_verify("all");
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::map<std::string, const SuiteReport*> by_name;
  for (const auto& r : reports) by_name[r.suite] = &r;

  const std::vector<Criterion> criteria{
      {1, "peaking suite", {"peaking"}, peaking_oracle},
      {2, "atom norms", {"atoms"}, atom_oracle},
      {3, "duality and pairing", {"pairing", "series"}, pairing_oracle},
      {4, "Mobius invariance", {"mobius", "pick-schwarz"}, mobius_oracle},
      {5, "composition lift", {"lift"}, lift_oracle},
      {6, "linearization", {"linearization"}, linearization_oracle},
      {7, "rank and factorization", {"rank", "transpose"}, rank_oracle},
      {8, "ideal inequality", {"ideal"}, ideal_oracle},
      {9, "little Bloch tails", {"tail"}, tail_oracle},
      {10, "scalar landmarks", {"landmarks"}, landmark_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    bool suites_ok = true;
    std::string failed;
    for (const auto& s : c.suites) {
      const SuiteReport* r = by_name.at(s);
      if (!r->pass()) {
        suites_ok = false;
        for (const auto& p : r->properties)
          if (!p.pass) failed += " [" + s + ": " + p.name + "]";
      }
    }
    bool oracle_ok = false;
    std::string detail = c.oracle(oracle_ok);
    if (c.id == 1) {
      const double s = by_name.at("peaking")->seconds;
      oracle_ok = oracle_ok && s < 10.0;
      detail += fmt("; suite %.2f s (< 10 s)", s);
    }
    if (c.id == 10) {
      oracle_ok = oracle_ok && total < 60.0;
      detail += fmt("; verify all %.1f s (< 60 s)", total);
    }
    const bool pass = suites_ok && oracle_ok;
    failures += !pass;
    std::printf("%s criterion %2d (%s): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), detail.c_str(),
                failed.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
