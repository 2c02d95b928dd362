#include "support.hpp"

using namespace blochcalc;
using testing::random_disc;

namespace {

Molecule random_molecule(std::mt19937_64& rng, int n) {
  std::vector<Term> terms;
  for (int k = 0; k < n; ++k) terms.push_back({random_disc(rng, 1.0), random_disc(rng, 0.9)});
  return Molecule(terms);
}

}  // namespace

TEST_CASE("atom norms") {
  CHECK(atom_norm(0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(atom_norm(0.9) == doctest::Approx(100.0 / 19.0).epsilon(1e-14));
  const NormBracket b = norm_bracket(Molecule(Atom{0.5}));
  CHECK(std::abs(b.lower - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(b.upper - 4.0 / 3.0) < 1e-12);
  const NormBracket n = norm_bracket(Molecule(Atom{cplx(0.3, 0.4), true}));
  CHECK(std::abs(n.lower - 1.0) < 1e-12);
  CHECK(std::abs(n.upper - 1.0) < 1e-12);
  CHECK_THROWS_AS(Molecule(Atom{1.0}), Error);
}

TEST_CASE("canonical form merges points and drops zeros") {
  const Molecule m(std::vector<Term>{{1.0, 0.5}, {2.0, 0.5}, {0.0, 0.1}, {-1.0, 0.2}, {1.0, 0.2}});
  const Molecule c = m.canonicalized();
  CHECK(c.canonical());
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c.terms()[0].lambda - 3.0) < 1e-15);
  CHECK(projective_cost(m) == doctest::Approx(3.0 * 4.0 / 3.0));
  CHECK(projective_cost(2.0 * Molecule(Atom{0.5})) == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("molecule arithmetic is linear in pairing") {
  std::mt19937_64 rng(31);
  const BlochFn f = normalize(log1mz() + monomial(3));
  for (int i = 0; i < 100; ++i) {
    const Molecule a = random_molecule(rng, 3), b = random_molecule(rng, 4);
    const cplx c = random_disc(rng, 2.0);
    const cplx lhs = pair(a + c * b, f), rhs = pair(a, f) + c * pair(b, f);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    CHECK(std::abs(pair(a - a, f)) < 1e-15);
  }
}

TEST_CASE("bracket order: lower <= projective cost and pairing bound") {
  std::mt19937_64 rng(32);
  const BlochFn f = with_seminorm(normalize(peaking(0.3) + 0.5 * log1mz()));
  for (int i = 0; i < 8; ++i) {
    const Molecule g = random_molecule(rng, 3);
    const NormBracket b = norm_bracket(g);
    CHECK(b.lower <= b.upper + 1e-12);
    CHECK(b.upper <= projective_cost(g) + 1e-12);
    CHECK(std::abs(pair(g, f)) <= projective_cost(g) * f.bracket()->upper + 1e-12);
    CHECK(std::abs(pair(g, f)) / f.bracket()->upper <= b.upper + 1e-9);
  }
}

TEST_CASE("interpolating certificates are dual to the atoms") {
  const std::vector<cplx> pts{0.1, cplx(0.2, 0.5), -0.6};
  const auto P = interpolating_certificates(pts);
  REQUIRE(P.size() == pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    CHECK(std::abs(eval(P[j].fn(), 0.0)) < 1e-15);
    for (std::size_t k = 0; k < pts.size(); ++k)
      CHECK(std::abs(eval_derivative(P[j].fn(), pts[k]) - (j == k ? 1.0 : 0.0)) < 1e-12);
  }
  const std::vector<cplx> dup{0.1, 0.1};
  CHECK_THROWS_AS(interpolating_certificates(dup), Error);
}

TEST_CASE("lift along z^2") {
  const Molecule g(std::vector<Term>{{1.0, 0.5}, {-1.0, 0.0}});
  const Molecule l = lift_composition(monomial(2), g);
  REQUIRE(l.size() == 1);
  CHECK(std::abs(l.terms()[0].z - 0.25) < 1e-15);
  CHECK(std::abs(l.terms()[0].lambda - 1.0) < 1e-15);
  CHECK(projective_cost(l) <= projective_cost(g));
  CHECK_THROWS_AS(lift_composition(mobius_self_map(0.5), g), Error);
}

TEST_CASE("series approximation") {
  std::mt19937_64 rng(33);
  const auto dict = halton_disc(2048, 0.95);
  const Molecule g(std::vector<Term>{{1.0, dict[3]}, {cplx(0.0, 2.0), dict[10]}});
  const SeriesExpansion s = series_approximation(g, 1e-3, dict);
  CHECK(s.residual_lower <= 1e-3);
  CHECK(s.coefficient_mass <= projective_cost(g) + 1e-3);
  const BlochFn f = normalize(log1mz());
  CHECK(std::abs(pair(to_molecule(s), f) - pair(g, f)) < 1e-10);
  const std::vector<cplx> coarse{0.0};
  CHECK_THROWS_AS(series_approximation(random_molecule(rng, 3), 1e-6, coarse), Error);
}
