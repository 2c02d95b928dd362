#include "blochcalc/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace blochcalc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<cplx> complex_list(const json& j) {
  if (!j.is_array()) parse_error("coefficient list must be an array");
  std::vector<cplx> out;
  for (const auto& x : j) out.push_back(complex_from_json(x));
  return out;
}

json complex_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(to_json(z));
  return a;
}

// Leaves whose self-map flag never needs restating.
bool structurally_self_map(const HoloFn& f) {
  switch (f.kind()) {
    case Kind::Identity:
    case Kind::Monomial:
    case Kind::MobiusSelfMap:
      return true;
    default:
      return false;
  }
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_error("complex values are [re, im] or a real number");
}

json to_json(const HoloFn& f) {
  json j = std::visit(
      overloaded{
          [](const node::Identity&) -> json { return {{"kind", "identity"}}; },
          [](const node::Monomial& m) -> json { return {{"kind", "monomial"}, {"m", m.m}}; },
          [](const node::Polynomial& p) -> json { return {{"kind", "polynomial"}, {"coeffs", complex_list(p.coeffs)}}; },
          [](const node::PowerSeries& s) -> json {
            json j{{"kind", "power_series"}, {"coeffs", complex_list(s.coeffs)}, {"radius", s.radius}};
            if (s.majorant.declared) j["majorant"] = {{"C", s.majorant.C}, {"q", s.majorant.q}, {"p", s.majorant.p}};
            return j;
          },
          [](const node::MobiusSelfMap& m) -> json {
            return {{"kind", "mobius"}, {"a", to_json(m.a)}, {"lambda", to_json(m.lambda)}};
          },
          [](const node::Peaking& p) -> json { return {{"kind", "peaking"}, {"z0", to_json(p.z0)}}; },
          [](const node::Log1mz&) -> json { return {{"kind", "log1mz"}}; },
          [](const node::Sum& s) -> json { return {{"kind", "sum"}, {"l", to_json(s.l)}, {"r", to_json(s.r)}}; },
          [](const node::ScalarMul& s) -> json { return {{"kind", "scale"}, {"c", to_json(s.c)}, {"f", to_json(s.f)}}; },
          [](const node::Product& p) -> json {
            return {{"kind", "product"}, {"l", to_json(p.l)}, {"r", to_json(p.r)}};
          },
          [](const node::Compose& c) -> json {
            return {{"kind", "compose"}, {"outer", to_json(c.outer)}, {"inner", to_json(c.inner)}};
          },
          [](const node::Derivative& d) -> json { return {{"kind", "derivative"}, {"f", to_json(d.f)}}; },
          [](const node::Antiderivative0& a) -> json { return {{"kind", "antiderivative0"}, {"f", to_json(a.f)}}; },
      },
      f.node().v);
  if (f.is_self_map() && !structurally_self_map(f)) j["self_map"] = true;
  return j;
}

HoloFn holo_from_json(const json& j) {
  if (!j.is_object()) parse_error("function spec must be an object");
  const json& kind_j = field(j, "kind");
  if (!kind_j.is_string()) parse_error("\"kind\" must be a string");
  const std::string kind = kind_j.get<std::string>();
  HoloFn f;
  if (kind == "identity") {
    f = identity();
  } else if (kind == "monomial") {
    const json& m = field(j, "m");
    if (!m.is_number_integer() || m.get<long long>() < 0) parse_error("monomial degree must be a nonnegative integer");
    f = monomial(m.get<unsigned>());
  } else if (kind == "polynomial") {
    f = polynomial(complex_list(field(j, "coeffs")));
  } else if (kind == "constant") {
    f = constant(complex_from_json(field(j, "c")));
  } else if (kind == "power_series") {
    auto coeffs = complex_list(field(j, "coeffs"));
    const double radius = j.contains("radius") ? number(j["radius"], "radius") : kSeriesRadiusCap;
    if (!(radius > 0.0 && radius <= kSeriesRadiusCap)) parse_error("series radius must lie in (0, 0.999]");
    if (j.contains("majorant")) {
      const json& mj = j["majorant"];
      Majorant maj;
      maj.C = number(field(mj, "C"), "majorant C");
      maj.q = number(field(mj, "q"), "majorant q");
      maj.p = static_cast<int>(number(field(mj, "p"), "majorant p"));
      f = power_series(std::move(coeffs), radius, maj);
    } else {
      f = power_series(std::move(coeffs), radius);
    }
  } else if (kind == "mobius") {
    f = mobius_self_map(complex_from_json(field(j, "a")),
                        j.contains("lambda") ? complex_from_json(j["lambda"]) : cplx(1.0));
  } else if (kind == "peaking") {
    f = peaking(complex_from_json(field(j, "z0")));
  } else if (kind == "log1mz") {
    f = log1mz();
  } else if (kind == "sum") {
    f = holo_from_json(field(j, "l")) + holo_from_json(field(j, "r"));
  } else if (kind == "scale") {
    f = complex_from_json(field(j, "c")) * holo_from_json(field(j, "f"));
  } else if (kind == "product") {
    f = holo_from_json(field(j, "l")) * holo_from_json(field(j, "r"));
  } else if (kind == "compose") {
    HoloFn inner = holo_from_json(field(j, "inner"));
    f = compose(holo_from_json(field(j, "outer")), certify_self_map(inner));
  } else if (kind == "derivative") {
    f = derivative(holo_from_json(field(j, "f")));
  } else if (kind == "antiderivative0") {
    f = antiderivative0(holo_from_json(field(j, "f")));
  } else if (kind == "dilate") {
    f = dilate(holo_from_json(field(j, "f")), number(field(j, "r"), "dilation radius"));
  } else {
    parse_error("unknown function kind: " + kind);
  }
  if (j.contains("self_map") && j["self_map"].is_boolean() && j["self_map"].get<bool>()) f = certify_self_map(f);
  return f;
}

json to_json(const VectorBlochMap& f) {
  json comps = json::array();
  for (const auto& c : f.components()) comps.push_back(to_json(c.fn()));
  return {{"norm", to_string(f.norm())}, {"components", comps}};
}

VectorBlochMap vector_from_json(const json& j) {
  const json& comps = field(j, "components");
  if (!comps.is_array() || comps.empty()) parse_error("\"components\" must be a nonempty array");
  NormKind k = NormKind::L2;
  if (j.contains("norm")) {
    if (!j["norm"].is_string()) parse_error("\"norm\" must be a string");
    k = norm_kind_from_string(j["norm"].get<std::string>());
  }
  std::vector<BlochFn> fs;
  for (const auto& c : comps) fs.emplace_back(holo_from_json(c));
  return VectorBlochMap(std::move(fs), k);
}

json to_json(const Molecule& m) {
  json terms = json::array();
  for (const auto& t : m.terms()) {
    terms.push_back({{"re", t.lambda.real()}, {"im", t.lambda.imag()}, {"z_re", t.z.real()}, {"z_im", t.z.imag()}});
  }
  return {{"terms", terms}};
}

Molecule molecule_from_json(const json& j) {
  const json& terms = field(j, "terms");
  if (!terms.is_array()) parse_error("\"terms\" must be an array");
  std::vector<Term> out;
  for (const auto& t : terms) {
    out.push_back({{number(field(t, "re"), "re"), number(field(t, "im"), "im")},
                   {number(field(t, "z_re"), "z_re"), number(field(t, "z_im"), "z_im")}});
  }
  return Molecule(std::move(out));
}

json to_json(const SupBracket& b) {
  json pts = json::array();
  for (cplx z : b.argmax) pts.push_back(to_json(z));
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"certified", b.certified},
          {"argmax_points", pts},
          {"evaluations", b.evaluations}};
}

json to_json(const NormBracket& b) {
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"certificate", b.lower_certificate},
          {"upper_is_projective_cost", b.upper_is_projective_cost}};
}

json to_json(const Factorization& f) {
  json T = json::array();
  for (Eigen::Index i = 0; i < f.T.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < f.T.cols(); ++k) row.push_back(to_json(f.T(i, k)));
    T.push_back(row);
  }
  json g = json::array();
  for (const auto& c : f.g.components()) g.push_back(to_json(c.fn()));
  return {{"T", T}, {"g", g}, {"residual", f.residual}, {"sigma_max", f.sigma_max}};
}

json to_json(const RangeDiagnostics& d) {
  json covers = json::array();
  for (const auto& [eps, n] : d.cover_numbers) {
    covers.push_back({{"eps", eps}, {"cover_number", n}, {"magnitude_cover_number", d.magnitude_cover_numbers.at(eps)}});
  }
  json tail = json::array();
  for (std::size_t i = 0; i < d.tail.radii.size(); ++i) tail.push_back({{"r", d.tail.radii[i]}, {"sup_value", d.tail.values[i]}});
  return {{"cover_numbers", covers}, {"tail", tail}, {"rank", d.rank}};
}

void write_tail_csv(std::ostream& os, const TailProfile& t) {
  os << "r,sup_value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < t.radii.size(); ++i) os << t.radii[i] << ',' << t.values[i] << '\n';
}

void write_range_csv(std::ostream& os, const RangeSample& s) {
  const Eigen::Index n = s.vectors.empty() ? 0 : s.vectors.front().size();
  os << "z_re,z_im";
  for (Eigen::Index i = 0; i < n; ++i) os << ",v" << i << "_re,v" << i << "_im";
  os << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < s.points.size(); ++j) {
    os << s.points[j].real() << ',' << s.points[j].imag();
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << s.vectors[j](i).real() << ',' << s.vectors[j](i).imag();
    os << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

void RunConfig::validate() const {
  if (radial < 2 || angular < 1 || rounds < 0 || refine_k < 1) parse_error("grid counts must be positive");
  if (!(tol > 0.0)) parse_error("tolerance must be positive");
  for (double e : eps_list)
    if (!(e > 0.0)) parse_error("eps values must be positive");
  if (format != "json" && format != "csv") parse_error("format must be json or csv");
}

SamplingConfig RunConfig::sampling() const {
  SamplingConfig s;
  s.radial = radial;
  s.angular = angular;
  s.rounds = rounds;
  s.refine_k = refine_k;
  return s;
}

json to_json(const RunConfig& c) {
  return {{"grid", {{"radial", c.radial}, {"angular", c.angular}, {"rounds", c.rounds}, {"refine_k", c.refine_k}}},
          {"seed", c.seed},
          {"tol", c.tol},
          {"eps_list", c.eps_list},
          {"out", c.out},
          {"format", c.format}};
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) parse_error("config must be an object");
  try {
    if (j.contains("grid")) {
      const json& g = j["grid"];
      if (g.contains("radial")) c.radial = g["radial"].get<int>();
      if (g.contains("angular")) c.angular = g["angular"].get<int>();
      if (g.contains("rounds")) c.rounds = g["rounds"].get<int>();
      if (g.contains("refine_k")) c.refine_k = g["refine_k"].get<int>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("eps_list")) c.eps_list = j["eps_list"].get<std::vector<double>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
  } catch (const json::exception& e) {
    parse_error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace blochcalc
