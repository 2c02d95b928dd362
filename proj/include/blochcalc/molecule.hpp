#pragma once

#include <span>
#include <string>
#include <vector>

#include "blochcalc/bloch.hpp"

namespace blochcalc {

/// Points closer than this are one atom.
inline constexpr double kMergeTolerance = 1e-14;

/// gamma_z (f) = f'(z); the normalized atom is (1 - |z|^2) gamma_z.
struct Atom {
  cplx z;
  bool normalized = false;
};

struct Term {
  cplx lambda;
  cplx z;
};

/// Finite combination sum_k lambda_k gamma_{z_k} of Bloch atoms.
class Molecule {
 public:
  Molecule() = default;
  explicit Molecule(std::vector<Term> terms);
  Molecule(const Atom& atom, cplx lambda = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Points pairwise farther apart than kMergeTolerance and no zero coefficients.
  bool canonical() const { return canonical_; }
  Molecule canonicalized() const;
  std::vector<cplx> points() const;

 private:
  std::vector<Term> terms_;
  bool canonical_ = false;
};

Molecule operator+(const Molecule& a, const Molecule& b);
Molecule operator-(const Molecule& a, const Molecule& b);
Molecule operator*(cplx c, const Molecule& m);

/// ||gamma_z|| = 1 / (1 - |z|^2).
double atom_norm(cplx z);

/// <gamma, f> = sum_k lambda_k f'(z_k). When f carries a bracket the bound
/// |<gamma, f>| <= projective_cost(gamma) * upper is checked.
cplx pair(const Molecule& gamma, const BlochFn& f);

/// sum_k |lambda_k| / (1 - |z_k|^2) over the canonical representation (an upper bound for ||gamma||).
double projective_cost(const Molecule& gamma);

struct CertificateConfig {
  bool use_peaking = true;
  bool use_interpolating = true;
  bool use_monomials = true;
  /// Extra peaking centres sampled in |z| <= extra_radius.
  int extra_points = 64;
  double extra_radius = 0.95;
  int max_degree = 8;
  /// Polynomial search: f' of degree < lp_degree, weighted modulus <= 1 on lp_grid points,
  /// moduli linearized by a 16-gon.
  bool lp_search = false;
  int lp_degree = 8;
  int lp_grid = 64;
  SamplingConfig seminorm;
};

struct LowerBound {
  double value = 0.0;
  /// p_B(certificate) <= 1 and <gamma, certificate> = value.
  BlochFn certificate{HoloFn()};
  std::string description;
};

/// Largest |<gamma, f>| / upper(p_B(f)) over the certificate family; always <= ||gamma||.
LowerBound norm_lower(const Molecule& gamma, const CertificateConfig& cfg = {});

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_certificate;
  bool upper_is_projective_cost = true;
};

NormBracket norm_bracket(const Molecule& gamma, const CertificateConfig& cfg = {});

/// P_j with P_j(0) = 0 and P_j'(z_k) = delta_jk. Throws DuplicatePoints.
std::vector<BlochFn> interpolating_certificates(std::span<const cplx> points);

/// sum_k lambda_k h'(z_k) gamma_{h(z_k)} for a certified self-map with h(0) = 0.
Molecule lift_composition(const HoloFn& h, const Molecule& gamma);

struct SeriesExpansion {
  /// (lambda_n, z_n) coefficients of normalized atoms.
  std::vector<Term> terms;
  double residual_lower = 0.0;
  double coefficient_mass = 0.0;
};

/// sum_n lambda_n (1 - |z_n|^2) gamma_{z_n}.
Molecule to_molecule(const SeriesExpansion& s);

/// Greedy expansion over normalized atoms at dictionary points. Throws DictionaryTooCoarse.
SeriesExpansion series_approximation(const Molecule& gamma, double eps, std::span<const cplx> dictionary,
                                     const CertificateConfig& cfg = {});

}  // namespace blochcalc
