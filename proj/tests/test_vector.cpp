#include "support.hpp"

using namespace blochcalc;
using testing::random_disc;

TEST_CASE("vector seminorm of (z^2/2, z^2/2) in l2") {
  const VectorBlochMap f({normalize(0.5 * monomial(2)), normalize(0.5 * monomial(2))});
  const SupBracket b = vector_seminorm(f);
  CHECK(b.lower == doctest::Approx(0.544331).epsilon(1e-6));
  CHECK(b.lower <= b.upper);
}

TEST_CASE("vector norms and duals") {
  const Eigen::Vector3cd v(cplx(3, 4), -1.0, 0.0);
  CHECK(vector_norm(v, NormKind::Sup) == doctest::Approx(5.0));
  CHECK(vector_norm(v, NormKind::L1) == doctest::Approx(6.0));
  CHECK(vector_norm(v, NormKind::L2) == doctest::Approx(std::sqrt(26.0)));
  CHECK(dual_kind(NormKind::Sup) == NormKind::L1);
  CHECK(dual_kind(NormKind::L1) == NormKind::Sup);
  CHECK(dual_kind(NormKind::L2) == NormKind::L2);
  CHECK(norm_kind_from_string("l1") == NormKind::L1);
  CHECK_THROWS_AS(norm_kind_from_string("l3"), Error);
}

TEST_CASE("operator norms") {
  Eigen::MatrixXcd T(2, 2);
  T << 1.0, 2.0, 3.0, 4.0;
  CHECK(operator_norm(T, NormKind::Sup) == doctest::Approx(7.0));
  CHECK(operator_norm(T, NormKind::L1) == doctest::Approx(6.0));
  CHECK(operator_norm(T, NormKind::L2) == doctest::Approx(5.4649857042190426));
}

TEST_CASE("components must be normalized") {
  CHECK_THROWS_AS(VectorBlochMap({BlochFn(constant(1.0) + identity())}), Error);
}

TEST_CASE("rank and factorization") {
  const VectorBlochMap f({normalize(0.5 * monomial(2)), normalize(monomial(2))});
  const RankResult r = bloch_rank(f);
  CHECK(r.rank == 1);
  const Factorization fac = factorize(f);
  CHECK(fac.T.cols() == 1);
  CHECK(fac.residual < 1e-8);
  CHECK(std::abs(std::abs(fac.T(0, 0)) - 1.0 / std::sqrt(5.0)) < 1e-12);
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.6)}) {
    const Eigen::VectorXcd lhs = derivative_vector(f, z);
    const Eigen::VectorXcd rhs = fac.T * derivative_vector(fac.g, z);
    CHECK((lhs - rhs).norm() < 1e-10);
  }
  const VectorBlochMap zero({normalize(constant(0.0)), normalize(constant(0.0))});
  CHECK(bloch_rank(zero).rank == 0);
  CHECK_THROWS_AS(factorize(zero), Error);
}

TEST_CASE("transpose") {
  const VectorBlochMap f({normalize(peaking(0.0)), normalize(constant(0.0))}, NormKind::Sup);
  Eigen::VectorXcd x(2);
  x << 1.0, 0.0;
  const BlochFn g = transpose_apply(f, x);
  CHECK(std::abs(eval(g.fn(), 0.4) - eval(peaking(0.0), 0.4)) < 1e-15);
  CHECK_THROWS_AS(transpose_apply(f, Eigen::VectorXcd::Ones(3)), Error);
  SphereConfig sc;
  sc.random_count = 32;
  const TransposeEstimate t = transpose_norm_estimate(f, sc);
  CHECK(t.lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.lower <= t.upper + 1e-12);
}

TEST_CASE("linearization is the derivative sum") {
  std::mt19937_64 rng(41);
  const VectorBlochMap f({normalize(identity()), normalize(log1mz())});
  for (int i = 0; i < 50; ++i) {
    const cplx z = random_disc(rng, 0.9), w = random_disc(rng, 0.9);
    const Molecule g(std::vector<Term>{{2.0, z}, {cplx(0, 1), w}});
    const Eigen::VectorXcd s = linearize_apply(f, g);
    CHECK(std::abs(s(0) - (2.0 + cplx(0, 1))) < 1e-12);
    CHECK(std::abs(s(1) - (-2.0 / (1.0 - z) - cplx(0, 1) / (1.0 - w))) < 1e-12);
  }
}

TEST_CASE("range diagnostics") {
  const VectorBlochMap id({normalize(identity())});
  RangeConfig rc;
  rc.count = 1024;
  const RangeDiagnostics d = range_diagnostics(id, rc);
  CHECK(d.rank == 1);
  for (const auto& [eps, n] : d.cover_numbers) CHECK(n <= std::size_t(std::ceil(1.0 / (2.0 * eps))) + 1);
  const RangeSample s = sample_range(id, halton_disc(64, 0.9));
  for (std::size_t i = 0; i < s.points.size(); ++i)
    CHECK(std::abs(s.vectors[i](0) - (1.0 - std::norm(s.points[i]))) < 1e-15);
}

TEST_CASE("ideal inequality with a Mobius-free self-map") {
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(2, 2) * 2.0;
  const VectorBlochMap f({normalize(identity()), normalize(0.5 * monomial(2))});
  const IdealReport r = ideal_inequality_check(T, f, monomial(2));
  CHECK(r.ok());
  CHECK(r.t_norm == doctest::Approx(2.0));
  CHECK(r.composite_lower <= r.composite_upper + 1e-12);
  CHECK(r.composite_upper <= r.t_norm * r.f_upper + 1e-8);
}
