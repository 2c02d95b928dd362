#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "blochcalc/molecule.hpp"

namespace blochcalc {

enum class NormKind { Sup, L1, L2 };

/// sup and l1 are dual to each other, l2 is self-dual.
NormKind dual_kind(NormKind k);
const char* to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

template <typename Derived>
double vector_norm(const Eigen::MatrixBase<Derived>& v, NormKind k) {
  switch (k) {
    case NormKind::Sup:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case NormKind::L1:
      return v.cwiseAbs().sum();
    case NormKind::L2:
      break;
  }
  return v.norm();
}

/// Operator norm of T : (C^n, k) -> (C^m, k).
double operator_norm(const Eigen::MatrixXcd& T, NormKind k);

/// f = (f_1, ..., f_n) into (C^n, norm). Components must be normalized.
class VectorBlochMap {
 public:
  VectorBlochMap(std::vector<BlochFn> components, NormKind norm = NormKind::L2);

  const std::vector<BlochFn>& components() const { return components_; }
  std::size_t dim() const { return components_.size(); }
  NormKind norm() const { return norm_; }

 private:
  std::vector<BlochFn> components_;
  NormKind norm_;
};

/// f'(z) in C^n.
Eigen::VectorXcd derivative_vector(const VectorBlochMap& f, cplx z);

/// T o f for an m x n matrix T; zero rows give the zero function.
VectorBlochMap apply_matrix(const Eigen::MatrixXcd& T, const VectorBlochMap& f);

/// f o h componentwise; h must be a certified self-map with h(0) = 0.
VectorBlochMap precompose(const VectorBlochMap& f, const HoloFn& h);

/// Bracket for sup (1 - |z|^2) ||f'(z)||. Equals bloch_seminorm when n = 1.
SupBracket vector_seminorm(const VectorBlochMap& f, const SamplingConfig& cfg = {});

/// S_f(gamma) = sum_k lambda_k f'(z_k).
Eigen::VectorXcd linearize_apply(const VectorBlochMap& f, const Molecule& gamma);

/// ||S_f|| = p_B(f): the bracket of vector_seminorm.
SupBracket operator_norm_estimate(const VectorBlochMap& f, const SamplingConfig& cfg = {});

struct RankConfig {
  std::size_t count = 200;
  double radius = 0.9;
};

struct RankResult {
  int rank = 0;
  Eigen::VectorXd singular_values;
  /// Every sampled derivative vanished.
  bool degenerate = false;
};

RankResult bloch_rank(const VectorBlochMap& f, double tol = 1e-8, const RankConfig& cfg = {});

struct Factorization {
  /// n x r with orthonormal columns.
  Eigen::MatrixXcd T;
  VectorBlochMap g;
  double residual = 0.0;
  double sigma_max = 0.0;
};

/// f' = T g' with g(0) = 0. Throws RankZero.
Factorization factorize(const VectorBlochMap& f, double tol = 1e-8, const RankConfig& cfg = {});

/// x* o f = sum_i x*_i f_i. Throws DimensionMismatch.
BlochFn transpose_apply(const VectorBlochMap& f, const Eigen::VectorXcd& xstar);

struct SphereConfig {
  std::size_t random_count = 512;
  std::uint64_t seed = 20240611;
  SamplingConfig seminorm;
};

struct TransposeEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = false;
  std::size_t duals = 0;
  std::uint64_t seed = 0;
};

/// Dual-unit vectors in the dual norm of f.norm(): 2n axis vectors then random ones.
std::vector<Eigen::VectorXcd> dual_sphere_sample(std::size_t n, NormKind k, std::size_t random_count,
                                                 std::uint64_t seed);

/// lower = max over sampled dual-unit x* of a seminorm lower bound of x* o f; upper = upper of p_B(f).
TransposeEstimate transpose_norm_estimate(const VectorBlochMap& f, const SphereConfig& cfg = {});

struct RangeSample {
  std::vector<cplx> points;
  std::vector<Eigen::VectorXcd> vectors;
};

/// (1 - |z|^2) f'(z) at the given points.
RangeSample sample_range(const VectorBlochMap& f, std::span<const cplx> points);

/// Greedy sweep eps-net size for a point cloud under the given norm.
std::size_t cover_number(const std::vector<Eigen::VectorXcd>& cloud, double eps, NormKind k);

/// Same for the magnitudes ||v||, a one-dimensional cloud.
std::size_t magnitude_cover_number(const std::vector<Eigen::VectorXcd>& cloud, double eps, NormKind k);

/// Circular sups of (1 - |z|^2) ||f'(z)||.
TailProfile vector_tail(const VectorBlochMap& f, std::span<const double> radii, int angular = 256);

struct RangeConfig {
  std::vector<double> eps_list{0.5, 0.2, 0.1, 0.05};
  std::size_t count = 4096;
  double radius = 0.999;
  std::vector<double> tail_radii = default_tail_radii();
  double rank_tol = 1e-8;
};

struct RangeDiagnostics {
  std::map<double, std::size_t> cover_numbers;
  std::map<double, std::size_t> magnitude_cover_numbers;
  TailProfile tail;
  int rank = 0;
};

/// Quantitative diagnostics only: in finite dimension every Bloch map has relatively compact range.
RangeDiagnostics range_diagnostics(const VectorBlochMap& f, const RangeConfig& cfg = {});

struct IdealReport {
  double composite_lower = 0.0;
  double composite_upper = 0.0;
  double t_norm = 0.0;
  double f_upper = 0.0;
  bool bound_ok = false;
  double max_linearization_error = 0.0;
  bool linearization_ok = false;
  bool ok() const { return bound_ok && linearization_ok; }
};

struct IdealConfig {
  std::size_t molecules = 8;
  std::uint64_t seed = 7;
  SamplingConfig seminorm;
};

/// Checks p_B(T o f o h) <= ||T|| p_B(f) and S_{T o f o h} = T o S_f o lift_h on random molecules.
IdealReport ideal_inequality_check(const Eigen::MatrixXcd& T, const VectorBlochMap& f, const HoloFn& h,
                                   const IdealConfig& cfg = {});

}  // namespace blochcalc
