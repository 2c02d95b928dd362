#include "support.hpp"

using namespace blochcalc;
using testing::random_disc;

namespace {

HoloFn random_self_map(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return identity();
    case 1: return monomial(std::uniform_int_distribution<unsigned>(2, 4)(rng));
    default: return mobius_self_map(random_disc(rng, 0.7), std::polar(1.0, 1.3));
  }
}

HoloFn random_tree(std::mt19937_64& rng, int depth) {
  const int leaf_kinds = 6;
  const int pick = std::uniform_int_distribution<int>(0, depth > 0 ? leaf_kinds + 5 : leaf_kinds - 1)(rng);
  switch (pick) {
    case 0: return identity();
    case 1: return monomial(std::uniform_int_distribution<unsigned>(1, 5)(rng));
    case 2: return polynomial({random_disc(rng, 1.0), random_disc(rng, 1.0), random_disc(rng, 1.0)});
    case 3: return mobius_self_map(random_disc(rng, 0.8));
    case 4: return peaking(random_disc(rng, 0.8));
    case 5: return log1mz();
    case 6: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 7: return random_disc(rng, 2.0) * random_tree(rng, depth - 1);
    case 8: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 9: return compose(random_tree(rng, depth - 1), random_self_map(rng));
    case 10: return derivative(random_tree(rng, depth - 1));
    default: return antiderivative0(random_tree(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("primitives match closed forms") {
  CHECK(std::abs(eval(log1mz(), 0.5) + std::log(2.0)) < 1e-15);
  CHECK(std::abs(eval_derivative(log1mz(), 0.5) + 2.0) < 1e-15);
  const cplx z0(0.3, -0.4), w(0.1, 0.6);
  const cplx peak = (1.0 - std::norm(z0)) * w / (1.0 - std::conj(z0) * w);
  CHECK(std::abs(eval(peaking(z0), w) - peak) < 1e-15);
  const cplx a(0.2, 0.5), lambda = std::polar(1.0, 0.7);
  CHECK(std::abs(eval(mobius_self_map(a, lambda), w) - lambda * (a - w) / (1.0 - std::conj(a) * w)) < 1e-15);
  CHECK(std::abs(eval(polynomial({1.0, 2.0, 3.0}), 0.5) - 2.75) < 1e-15);
  CHECK(std::abs(eval(monomial(3), w) - w * w * w) < 1e-15);
}

TEST_CASE("random trees: derivative against finite differences") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const HoloFn f = random_tree(rng, 3);
    const cplx z = random_disc(rng, 0.8);
    const cplx fd = testing::central_difference([&](cplx u) { return eval(f, u); }, z);
    const cplx d = eval_derivative(f, z);
    const double scale = std::max({1.0, std::abs(d), std::abs(eval(f, z))});
    INFO("tree " << i << " at " << z);
    CHECK(std::abs(d - fd) <= 1e-6 * scale);
    const Jet<cplx> j = jet(f, z, 2);
    CHECK(std::abs(j[1] - d) <= 1e-9 * scale);
    CHECK(std::abs(eval_derivative(derivative(f), z) - 2.0 * j[2]) <= 1e-6 * std::max(scale, std::abs(j[2])));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("antiderivative round trip") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const HoloFn F = random_tree(rng, 2);
    const HoloFn G = antiderivative0(F);
    const cplx z = random_disc(rng, 0.8);
    CHECK(std::abs(eval(G, 0.0)) < 1e-14);
    CHECK(std::abs(eval_derivative(G, z) - eval(F, z)) <= 1e-9 * std::max(1.0, std::abs(eval(F, z))));
    const HoloFn back = antiderivative0(derivative(F));
    CHECK(std::abs(eval(back, z) - (eval(F, z) - eval(F, 0.0))) <= 1e-8 * std::max(1.0, std::abs(eval(F, z))));
  }
}

TEST_CASE("compose is associative") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const HoloFn f = random_tree(rng, 2);
    const HoloFn g = random_self_map(rng), h = random_self_map(rng);
    const cplx z = random_disc(rng, 0.9);
    const cplx l = eval(compose(compose(f, g), h), z), r = eval(compose(f, compose(g, h)), z);
    CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(l)));
  }
}

TEST_CASE("compose requires a self-map certificate") {
  CHECK_THROWS_AS(compose(log1mz(), 2.0 * identity()), Error);
  const HoloFn half = certify_self_map(0.5 * identity());
  CHECK(half.is_self_map());
  CHECK_NOTHROW(compose(log1mz(), half));
  try {
    certify_self_map(1.5 * identity());
    FAIL("expected NotSelfMap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSelfMap);
  }
}

TEST_CASE("series tail bound is honest") {
  // 1 / (1 - q z) truncated: the declared majorant |a_m| <= q^m must cover the true remainder.
  for (double q : {0.5, 0.9, 0.99}) {
    for (int n : {16, 64, 256}) {
      std::vector<cplx> c(n);
      for (int m = 0; m < n; ++m) c[m] = std::pow(q, m);
      const HoloFn s = power_series(c, 0.999, Majorant{1.0, q, 0, true});
      for (double r : {0.3, 0.7, 0.95, 0.999}) {
        const cplx z = std::polar(r, 0.4);
        const double actual = std::abs(eval(s, z) - 1.0 / (1.0 - q * z));
        CHECK(actual <= error_bound(s) + 1e-12);
        CHECK(actual <= series_tail(Majorant{1.0, q, 0, true}, n, r, 0) + 1e-12);
        const double d_actual = std::abs(eval_derivative(s, z) - q / ((1.0 - q * z) * (1.0 - q * z)));
        CHECK(d_actual <= series_tail(Majorant{1.0, q, 0, true}, n, r, 1) + 1e-10);
      }
    }
  }
}

TEST_CASE("series evaluation is refused past the radius") {
  const HoloFn s = power_series({0.0, 1.0}, 0.9);
  CHECK(s.has_series());
  CHECK_THROWS_AS(eval(s, 0.95), Error);
}

TEST_CASE("derivative bounds dominate sampled derivatives") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const HoloFn f = random_tree(rng, 2);
    const cplx c = random_disc(rng, 0.7);
    const double rho = 0.05;
    const auto b = derivative_bounds(f, c, rho, 2);
    if (!b) continue;
    for (int k = 0; k < 16; ++k) {
      const cplx w = c + std::polar(rho * (k % 4) / 3.0, 0.4 * k);
      const Jet<cplx> j = jet(f, w, 2);
      for (int d = 0; d <= 2; ++d) CHECK(std::abs(j[d]) <= (*b)[d] * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(peaking(1.0), Error);
  CHECK_THROWS_AS(mobius_self_map(cplx(0.0, 1.2)), Error);
  CHECK_THROWS_AS(dilate(identity(), 1.0), Error);
  CHECK_THROWS_AS(dilate(identity(), 0.0), Error);
  CHECK(std::abs(eval(dilate(log1mz(), 0.5), 0.9) - std::log(1.0 - 0.45)) < 1e-15);
  CHECK_THROWS_AS(eval(identity(), 1.0), Error);
}
