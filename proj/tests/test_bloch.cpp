#include "support.hpp"

using namespace blochcalc;
using testing::random_disc;

TEST_CASE("frozen seminorm values") {
  const SupBracket q = bloch_seminorm(normalize(0.5 * monomial(2)));
  CHECK(q.lower == doctest::Approx(0.3849001794597505).epsilon(1e-9));
  CHECK(q.lower <= q.upper);
  CHECK(q.certified);
  const SupBracket l = bloch_seminorm(normalize(log1mz()));
  CHECK(l.lower >= 1.99);
  CHECK(l.upper <= 2.0 + 1e-9);
  CHECK(bloch_seminorm(normalize(identity())).lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bloch_seminorm(normalize(peaking(0.5))).lower == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("seminorm brackets contain grid values") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const BlochFn f = normalize(peaking(random_disc(rng, 0.9)) + random_disc(rng, 1.0) * monomial(3));
    const SupBracket b = bloch_seminorm(f);
    REQUIRE(b.lower <= b.upper);
    for (cplx z : polar_grid(16, 32, 0.99)) CHECK(weighted_derivative(f, z) <= b.upper + 1e-12);
    for (cplx z : b.argmax) CHECK(weighted_derivative(f, z) == doctest::Approx(b.lower).epsilon(1e-9));
  }
}

TEST_CASE("normalize subtracts f(0)") {
  const BlochFn f = normalize(constant(3.0) + identity());
  CHECK(f.normalized());
  CHECK(std::abs(eval(f.fn(), 0.0)) < 1e-15);
  CHECK(!BlochFn(constant(1.0) + identity()).normalized());
}

TEST_CASE("weighted derivative is Mobius invariant") {
  std::mt19937_64 rng(22);
  const BlochFn f = normalize(log1mz() + monomial(2));
  for (int i = 0; i < 200; ++i) {
    const MobiusMap m{random_disc(rng, 0.9), std::polar(1.0, 0.3 * i)};
    const cplx z = random_disc(rng, 0.9);
    const BlochFn g = normalize(compose(f.fn(), to_holo(m)));
    CHECK(weighted_derivative(g, z) == doctest::Approx(weighted_derivative(f, mobius_apply(m, z))).epsilon(1e-10));
  }
}

TEST_CASE("Pick-Schwarz check") {
  const auto pts = polar_grid(16, 32, 0.99);
  CHECK(pick_schwarz_check(identity(), pts) <= 1e-15);
  CHECK(pick_schwarz_check(monomial(2), pts) < 0.0);
  CHECK(pick_schwarz_check(mobius_self_map(cplx(0.3, 0.2)), pts) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("composition operator does not increase the seminorm") {
  const BlochFn f = with_seminorm(normalize(log1mz()));
  const BlochFn c = composition_operator(monomial(2), f);
  REQUIRE(c.bracket());
  CHECK(c.bracket()->lower <= f.bracket()->upper + 1e-12);
  CHECK_THROWS_AS(composition_operator(mobius_self_map(0.5), f), Error);
}

TEST_CASE("little Bloch tails") {
  const auto radii = default_tail_radii();
  const TailProfile t = little_bloch_tail(normalize(log1mz()), radii);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(t.values[i] == doctest::Approx(1.0 + radii[i]).epsilon(1e-12));
  CHECK(!is_little_bloch(t));
  CHECK(is_little_bloch(little_bloch_tail(normalize(dilate(log1mz(), 0.9)), radii)));
}

TEST_CASE("polar grid shape") {
  const auto g = polar_grid(8, 16, 0.9);
  CHECK(g.size() >= 8u * 16u);
  for (cplx z : g) CHECK(std::abs(z) <= 0.9 + 1e-15);
}
