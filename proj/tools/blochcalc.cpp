// blochcalc: Bloch seminorms, molecule brackets, vector-valued Bloch maps and the
// verification suites from the command line.
//
// Exit codes: 0 success, 1 failing property, 2 parse error, 3 domain error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blochcalc/verify.hpp"

using namespace blochcalc;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kParseError = 2, kDomainError = 3 };

struct Flags {
  std::string config;
  int radial = 0, angular = 0, rounds = 0, refine_k = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::string out, format;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Runner {
 public:
  Runner(RunConfig cfg, std::string command, bool format_given)
      : cfg_(std::move(cfg)), command_(std::move(command)), format_given_(format_given) {}

  const RunConfig& cfg() const { return cfg_; }
  /// range defaults to its CSV point cloud; everything else defaults to JSON.
  bool csv(bool csv_default = false) const { return format_given_ ? cfg_.format == "csv" : csv_default; }

  // Adds the config echo, seed and timestamp, then writes to --out or stdout.
  void emit_json(json body) const {
    body["command"] = command_;
    body["config"] = to_json(cfg_);
    body["seed"] = cfg_.seed;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    body["timestamp"] = {{"utc", utc_now()}, {"elapsed_seconds", elapsed}};
    write(body.dump(2) + "\n");
  }

  void write(const std::string& text) const {
    if (cfg_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream os(cfg_.out);
    if (!os) throw Error(ErrorKind::Parse, "cannot open output file " + cfg_.out);
    os << text;
  }

 private:
  RunConfig cfg_;
  std::string command_;
  bool format_given_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool is_vector_spec(const json& j) { return j.is_object() && j.contains("components"); }
bool is_molecule_spec(const json& j) { return j.is_object() && j.contains("terms"); }

VectorBlochMap read_vector(const std::string& path) {
  const json j = read_json_file(path);
  if (is_vector_spec(j)) return vector_from_json(j);
  return VectorBlochMap(std::vector<BlochFn>{normalize(holo_from_json(j))});
}

int cmd_norm(const Runner& run, const std::string& path) {
  const json spec = read_json_file(path);
  const SamplingConfig s = run.cfg().sampling();
  if (is_molecule_spec(spec)) {
    CertificateConfig cc;
    cc.seminorm = s;
    const Molecule gamma = molecule_from_json(spec);
    json body = to_json(norm_bracket(gamma, cc));
    body["projective_cost"] = projective_cost(gamma);
    run.emit_json(std::move(body));
    return kOk;
  }
  if (is_vector_spec(spec)) {
    const VectorBlochMap f = vector_from_json(spec);
    json body = to_json(vector_seminorm(f, s));
    body["norm"] = to_string(f.norm());
    run.emit_json(std::move(body));
    return kOk;
  }
  const HoloFn fn = holo_from_json(spec);
  json body = to_json(bloch_seminorm(normalize(fn), s));
  body["f0"] = to_json(eval(fn, 0.0));
  run.emit_json(std::move(body));
  return kOk;
}

int cmd_pair(const Runner& run, const std::string& mol_path, const std::string& spec_path) {
  const Molecule gamma = molecule_from_json(read_json_file(mol_path));
  const BlochFn f = with_seminorm(normalize(holo_from_json(read_json_file(spec_path))), run.cfg().sampling());
  const cplx v = pair(gamma, f);
  const double cost = projective_cost(gamma);
  run.emit_json({{"value", to_json(v)},
                 {"projective_cost", cost},
                 {"seminorm", to_json(*f.bracket())},
                 {"bound", cost * f.bracket()->upper}});
  return kOk;
}

int cmd_rank(const Runner& run, const std::string& path) {
  const RankResult r = bloch_rank(read_vector(path), run.cfg().tol);
  std::vector<double> sv(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
  run.emit_json({{"rank", r.rank}, {"singular_values", sv}, {"degenerate", r.degenerate}});
  return kOk;
}

int cmd_factorize(const Runner& run, const std::string& path) {
  const VectorBlochMap f = read_vector(path);
  json body = to_json(factorize(f, run.cfg().tol));
  body["rank"] = bloch_rank(f, run.cfg().tol).rank;
  run.emit_json(std::move(body));
  return kOk;
}

int cmd_range(const Runner& run, const std::string& path) {
  const VectorBlochMap f = read_vector(path);
  RangeConfig rc;
  rc.eps_list = run.cfg().eps_list;
  rc.rank_tol = run.cfg().tol;
  if (run.csv(true)) {
    std::ostringstream os;
    write_range_csv(os, sample_range(f, halton_disc(rc.count, rc.radius)));
    run.write(os.str());
    return kOk;
  }
  json body = to_json(range_diagnostics(f, rc));
  body["norm"] = to_string(f.norm());
  run.emit_json(std::move(body));
  return kOk;
}

int cmd_tail(const Runner& run, const std::string& path) {
  const json spec = read_json_file(path);
  const auto radii = default_tail_radii();
  const TailProfile t = is_vector_spec(spec) ? vector_tail(vector_from_json(spec), radii)
                                             : little_bloch_tail(normalize(holo_from_json(spec)), radii);
  if (run.csv()) {
    std::ostringstream os;
    write_tail_csv(os, t);
    run.write(os.str());
    return kOk;
  }
  run.emit_json({{"radii", t.radii}, {"values", t.values}, {"little_bloch_heuristic", is_little_bloch(t)}});
  return kOk;
}

int cmd_lift(const Runner& run, const std::string& h_path, const std::string& mol_path) {
  const HoloFn h = certify_self_map(holo_from_json(read_json_file(h_path)));
  const Molecule gamma = molecule_from_json(read_json_file(mol_path));
  const Molecule lifted = lift_composition(h, gamma);
  json body = to_json(lifted);
  body["projective_cost"] = projective_cost(lifted);
  body["source_projective_cost"] = projective_cost(gamma);
  run.emit_json(std::move(body));
  return kOk;
}

int cmd_verify(const Runner& run, const std::string& suite) {
  VerifyConfig vc;
  vc.seed = run.cfg().seed;
  vc.sampling = run.cfg().sampling();
  const auto reports = run_verify(suite, vc);
  bool pass = true;
  json suites = json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass();
    suites.push_back(to_json(r));
    std::cerr << (r.pass() ? "PASS " : "FAIL ") << r.suite << " (" << std::fixed << std::setprecision(2) << r.seconds
              << " s)\n";
  }
  run.emit_json({{"suite", suite}, {"pass", pass}, {"suites", suites}});
  return pass ? kOk : kPropertyFailure;
}

RunConfig effective_config(const CLI::App& app, const Flags& fl, bool& format_given) {
  RunConfig cfg;
  format_given = false;
  if (!fl.config.empty()) {
    const json j = read_json_file(fl.config);
    format_given = j.is_object() && j.contains("format");
    cfg = run_config_from_json(j, cfg);
  }
  auto given = [&app](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--grid-radial")) cfg.radial = fl.radial;
  if (given("--grid-angular")) cfg.angular = fl.angular;
  if (given("--rounds")) cfg.rounds = fl.rounds;
  if (given("--refine-k")) cfg.refine_k = fl.refine_k;
  if (given("--tol")) cfg.tol = fl.tol;
  if (given("--seed")) cfg.seed = fl.seed;
  if (given("--eps")) cfg.eps_list = fl.eps;
  if (given("--out")) cfg.out = fl.out;
  if (given("--format")) {
    cfg.format = fl.format;
    format_given = true;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch seminorms, molecules and vector-valued Bloch maps"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags fl;
  app.add_option("--config", fl.config, "JSON run configuration; flags override it");
  app.add_option("--grid-radial", fl.radial, "radial rings of the starting grid");
  app.add_option("--grid-angular", fl.angular, "points per ring of the starting grid");
  app.add_option("--rounds", fl.rounds, "local refinement rounds");
  app.add_option("--refine-k", fl.refine_k, "cells refined per round");
  app.add_option("--tol", fl.tol, "relative SVD tolerance for rank and factorization");
  app.add_option("--seed", fl.seed, "seed for randomized checks");
  app.add_option("--eps", fl.eps, "covering radii for range diagnostics")->delimiter(',');
  app.add_option("--out", fl.out, "output file (default stdout)");
  app.add_option("--format", fl.format, "json or csv (csv for range and tail)");

  std::string spec, mol, h, suite = "all";
  auto* norm = app.add_subcommand("norm", "seminorm bracket of a function or vector spec, or norm bracket of a molecule");
  norm->add_option("spec", spec, "function, vector or molecule JSON")->required();
  auto* pr = app.add_subcommand("pair", "pairing <molecule, f>");
  pr->add_option("molecule", mol, "molecule JSON")->required();
  pr->add_option("spec", spec, "function JSON")->required();
  auto* rank = app.add_subcommand("rank", "Bloch rank of a vector map");
  rank->add_option("spec", spec, "vector map JSON")->required();
  auto* fact = app.add_subcommand("factorize", "factorization f' = T g'");
  fact->add_option("spec", spec, "vector map JSON")->required();
  auto* range = app.add_subcommand("range", "range point cloud (csv, default) or range diagnostics (--format json)");
  range->add_option("spec", spec, "vector map JSON")->required();
  auto* tail = app.add_subcommand("tail", "little-Bloch tail profile");
  tail->add_option("spec", spec, "function or vector map JSON")->required();
  auto* lift = app.add_subcommand("lift", "lift of a molecule along a self-map");
  lift->add_option("self_map", h, "self-map JSON")->required();
  lift->add_option("molecule", mol, "molecule JSON")->required();
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite, "suite name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    bool format_given = false;
    const RunConfig cfg = effective_config(app, fl, format_given);
    const Runner run(cfg, sub->get_name(), format_given);
    if (sub == norm) return cmd_norm(run, spec);
    if (sub == pr) return cmd_pair(run, mol, spec);
    if (sub == rank) return cmd_rank(run, spec);
    if (sub == fact) return cmd_factorize(run, spec);
    if (sub == range) return cmd_range(run, spec);
    if (sub == tail) return cmd_tail(run, spec);
    if (sub == lift) return cmd_lift(run, h, mol);
    return cmd_verify(run, suite);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Parse ? kParseError : kDomainError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
}
