#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blochcalc/io.hpp"

namespace blochcalc {

struct PropertyResult {
  std::string name;
  bool pass = true;
  /// Largest observed violation, in the units of the tolerance.
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  double seconds = 0.0;
  bool pass() const;
};

struct VerifyConfig {
  std::uint64_t seed = 20240611;
  SamplingConfig sampling;
};

/// peaking, atoms, mobius, pick-schwarz, pairing, lift, linearization, rank, transpose,
/// ideal, series, tail, landmarks.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Unknown names raise ErrorKind::Parse.
std::vector<SuiteReport> run_verify(const std::string& suite, const VerifyConfig& cfg = {});

json to_json(const PropertyResult& p);
/// Omits `seconds` so that reports are reproducible byte for byte.
json to_json(const SuiteReport& s);

}  // namespace blochcalc
