#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "blochcalc/vector_map.hpp"

namespace blochcalc {

using json = nlohmann::json;

/// Complex numbers are [re, im]; a bare number is read as real.
json to_json(cplx z);
cplx complex_from_json(const json& j);

/// Function specs: {"kind": ..., params}. See docs/formats.md.
json to_json(const HoloFn& f);
HoloFn holo_from_json(const json& j);

/// {"norm": "sup" | "l1" | "l2", "components": [spec, ...]}
json to_json(const VectorBlochMap& f);
VectorBlochMap vector_from_json(const json& j);

/// {"terms": [{"re", "im", "z_re", "z_im"}, ...]}
json to_json(const Molecule& m);
Molecule molecule_from_json(const json& j);

json to_json(const SupBracket& b);
json to_json(const NormBracket& b);
json to_json(const Factorization& f);
json to_json(const RangeDiagnostics& d);

/// CSV with columns r, sup_value.
void write_tail_csv(std::ostream& os, const TailProfile& t);
/// CSV with columns z_re, z_im, then re/im parts of each vector entry.
void write_range_csv(std::ostream& os, const RangeSample& s);

/// Reads and parses a JSON file; failures raise ErrorKind::Parse.
json read_json_file(const std::string& path);

struct RunConfig {
  int radial = 128;
  int angular = 256;
  int rounds = 3;
  int refine_k = 16;
  std::uint64_t seed = 20240611;
  double tol = 1e-8;
  std::vector<double> eps_list{0.5, 0.2, 0.1, 0.05};
  std::string out;
  std::string format = "json";

  /// Counts >= 1, tol > 0, format json or csv. Throws ErrorKind::Parse.
  void validate() const;
  SamplingConfig sampling() const;
};

json to_json(const RunConfig& c);
/// Missing keys keep the values already in `base`.
RunConfig run_config_from_json(const json& j, RunConfig base = {});

}  // namespace blochcalc
