#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace blochcalc {

using cplx = std::complex<double>;

/// Grid and certification parameters for sup-maximisation over the disc.
struct SamplingConfig {
  int radial = 128;
  int angular = 256;
  int rounds = 3;
  int refine_k = 16;
  /// Outermost sampled radius for trees containing series nodes.
  double r_max = 0.999;
  /// Outermost sampled radius for purely closed-form trees.
  double closed_form_r_max = 1.0 - 1e-6;
  /// Relative inflation of the heuristic upper bound when nothing certifies one.
  double slack = 0.05;
  bool certify = true;
  /// Branch-and-bound stops once upper <= lower * (1 + bb_rel_tol) + bb_abs_tol.
  double bb_rel_tol = 1e-3;
  double bb_abs_tol = 1e-12;
  std::size_t bb_budget = 60000;
  /// Branch and bound also stops once the certified upper drops to this value.
  double bb_target = -std::numeric_limits<double>::infinity();
};

/// Result of maximising a non-negative function over the disc.
struct SupBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = false;
  /// Evaluated points within 1e-9 of the best value (deduplicated).
  std::vector<cplx> argmax;
  std::size_t evaluations = 0;
};

/// Upper bound of the objective over the disc D(center, rho) intersected with |z| >= r_inner.
using CellBound = std::function<std::optional<double>(cplx center, double rho, double r_inner)>;

/// Radii clustered toward r_max: r_i = r_max * sin(pi/2 * i/(n-1)).
std::vector<double> chebyshev_radii(int n, double r_max);

/// Maximises `objective` on |z| <= r_max with an adaptive polar grid.
/// When `cell_bound` is given and cfg.certify is set, refines an upper bound by
/// branch-and-bound; `outer_bound` must bound the objective on r_max < |z| < 1.
/// `known_upper` is an externally certified bound that may close the bracket early.
SupBracket maximize_on_disc(const std::function<double(cplx)>& objective, const SamplingConfig& cfg,
                            double r_max, const CellBound& cell_bound = {},
                            std::optional<double> outer_bound = std::nullopt,
                            std::optional<double> known_upper = std::nullopt);

/// Deterministic low-discrepancy points in |z| <= radius (Halton bases 2 and 3, area-uniform).
std::vector<cplx> halton_disc(std::size_t count, double radius);

/// Worker count from BLOCHCALC_THREADS, else hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n); nested calls run serially. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace blochcalc
