#include <sstream>

#include "support.hpp"

using namespace blochcalc;

TEST_CASE("function specs round trip") {
  const std::vector<HoloFn> fns{
      identity(),
      monomial(3),
      polynomial({0.0, cplx(1, 2), -3.0}),
      power_series({0.0, 1.0, 0.5, 0.25}, 0.9),
      mobius_self_map(cplx(0.1, 0.2), std::polar(1.0, 0.5)),
      peaking(cplx(0.3, -0.1)),
      log1mz(),
      cplx(0, 2) * log1mz() + peaking(0.2) * monomial(2),
      derivative(peaking(0.4)),
      antiderivative0(log1mz()),
  };
  for (const auto& f : fns) {
    const json j = to_json(f);
    const HoloFn g = holo_from_json(j);
    INFO(j.dump());
    CHECK(to_json(g) == j);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3)}) CHECK(std::abs(eval(g, z) - eval(f, z)) < 1e-15);
  }
}

TEST_CASE("compose round trips by value") {
  // compose may rewrite its arguments, so compare values rather than trees.
  const HoloFn f = compose(log1mz() + monomial(2), compose(monomial(2), mobius_self_map(0.3)));
  const HoloFn g = holo_from_json(to_json(f));
  CHECK(to_json(holo_from_json(to_json(g))) == to_json(g));
  CHECK(std::abs(eval(g, 0.4) - eval(f, 0.4)) < 1e-14);
}

TEST_CASE("bad specs raise parse errors") {
  for (const char* s : {R"({"kind": "nope"})", R"({"kind": 3})", R"({"kind": "monomial"})", R"([1, 2])",
                        R"({"kind": "compose", "outer": {"kind": "log1mz"}, "inner": {"kind": "monomial", "m": "x"}})"}) {
    INFO(s);
    try {
      holo_from_json(json::parse(s));
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/spec.json"), Error);
}

TEST_CASE("domain errors survive parsing") {
  try {
    holo_from_json(json::parse(R"({"kind": "peaking", "z0": [1.5, 0]})"));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointOutsideDisc);
  }
}

TEST_CASE("molecules and vector maps round trip") {
  const Molecule m(std::vector<Term>{{cplx(1, -1), 0.5}, {2.0, cplx(0, 0.3)}});
  const Molecule back = molecule_from_json(to_json(m));
  REQUIRE(back.size() == m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    CHECK(back.terms()[k].lambda == m.terms()[k].lambda);
    CHECK(back.terms()[k].z == m.terms()[k].z);
  }
  const VectorBlochMap f({normalize(identity()), normalize(log1mz())}, NormKind::L1);
  const VectorBlochMap g = vector_from_json(to_json(f));
  CHECK(g.norm() == NormKind::L1);
  CHECK(to_json(g) == to_json(f));
}

TEST_CASE("run config round trip and validation") {
  RunConfig c;
  c.radial = 32;
  c.seed = 99;
  c.eps_list = {0.3};
  c.format = "csv";
  const RunConfig d = run_config_from_json(to_json(c));
  CHECK(to_json(d) == to_json(c));
  const RunConfig partial = run_config_from_json(json::parse(R"({"seed": 5})"), c);
  CHECK(partial.seed == 5);
  CHECK(partial.radial == 32);
  RunConfig bad;
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = RunConfig{};
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("csv writers") {
  std::ostringstream os;
  write_tail_csv(os, TailProfile{{0.5, 0.9}, {1.5, 1.9}});
  CHECK(os.str().rfind("r,sup_value\n", 0) == 0);
  std::ostringstream rs;
  const VectorBlochMap f({normalize(identity()), normalize(monomial(2))});
  const std::vector<cplx> pts{0.0, 0.5};
  write_range_csv(rs, sample_range(f, pts));
  std::string header;
  std::istringstream is(rs.str());
  std::getline(is, header);
  CHECK(header == "z_re,z_im,v0_re,v0_im,v1_re,v1_im");
}

TEST_CASE("verify reports serialize without timings") {
  SuiteReport r{"atoms", {{"p", true, 0.0, 1e-12, 3}}, 1.5};
  const json j = to_json(r);
  CHECK(j["suite"] == "atoms");
  CHECK(j["pass"] == true);
  CHECK(!j.contains("seconds"));
  CHECK_THROWS_AS(run_verify("nope"), Error);
}
