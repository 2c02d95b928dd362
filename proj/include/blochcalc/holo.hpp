#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "blochcalc/errors.hpp"
#include "blochcalc/jet.hpp"

namespace blochcalc {

using cplx = std::complex<double>;

/// Default number of stored coefficients when a function is expanded into a series.
inline constexpr int kDefaultSeriesTerms = 256;
/// Largest modulus at which series nodes may be evaluated.
inline constexpr double kSeriesRadiusCap = 0.999;

/// |a_m| <= C * m^p * q^m for every m past the stored coefficients.
struct Majorant {
  double C = 0.0;
  double q = 1.0;
  int p = 0;
  bool declared = false;  // false: estimated from the trailing coefficients
};

class HoloFn;

namespace node {
struct Identity {};
struct Monomial { unsigned m; };
struct Polynomial { std::vector<cplx> coeffs; };
struct PowerSeries {
  std::vector<cplx> coeffs;
  double radius;
  Majorant majorant;
  double tail_bound;
};
/// lambda * (a - z) / (1 - conj(a) z)
struct MobiusSelfMap { cplx a; cplx lambda; };
/// (1 - |z0|^2) w / (1 - conj(z0) w)
struct Peaking { cplx z0; };
/// principal branch of log(1 - z)
struct Log1mz {};
struct Sum;
struct ScalarMul;
struct Product;
struct Compose;
struct Derivative;
struct Antiderivative0;
}  // namespace node

enum class Kind {
  Identity, Monomial, Polynomial, PowerSeries, MobiusSelfMap, Peaking, Log1mz,
  Sum, ScalarMul, Product, Compose, Derivative, Antiderivative0
};

struct Node;

/// Immutable expression tree for a holomorphic function on the unit disc.
/// Copies share structure; all operations are pure.
class HoloFn {
 public:
  HoloFn();  // the zero function

  Kind kind() const;
  const Node& node() const { return *node_; }

  /// Carries a certificate that the function maps the disc into itself.
  bool is_self_map() const;
  /// True when any series node is reachable; such functions evaluate only on |z| <= radius.
  bool has_series() const;
  /// Depth of nested Derivative nodes, i.e. extra jet order needed for evaluation.
  int derivative_depth() const;

  bool same_node(const HoloFn& other) const { return node_ == other.node_; }

  explicit HoloFn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

namespace node {
struct Sum { HoloFn l, r; };
struct ScalarMul { cplx c; HoloFn f; };
struct Product { HoloFn l, r; };
struct Compose { HoloFn outer, inner; };
struct Derivative { HoloFn f; };
struct Antiderivative0 { HoloFn f; };
}  // namespace node

using NodeVariant = std::variant<node::Identity, node::Monomial, node::Polynomial, node::PowerSeries,
                                 node::MobiusSelfMap, node::Peaking, node::Log1mz, node::Sum,
                                 node::ScalarMul, node::Product, node::Compose, node::Derivative,
                                 node::Antiderivative0>;

struct Node {
  NodeVariant v;
  bool self_map = false;
  bool has_series = false;
  int derivative_depth = 0;
};

// Primitives.
HoloFn identity();
HoloFn monomial(unsigned m);
HoloFn constant(cplx c);
HoloFn polynomial(std::vector<cplx> coeffs);
/// Series with a majorant estimated from the trailing coefficients.
HoloFn power_series(std::vector<cplx> coeffs, double radius = kSeriesRadiusCap);
/// Series with a caller-declared majorant (rigorous tail bound).
HoloFn power_series(std::vector<cplx> coeffs, double radius, const Majorant& majorant);
HoloFn mobius_self_map(cplx a, cplx lambda = 1.0);
HoloFn peaking(cplx z0);
HoloFn log1mz();

// Combinators.
HoloFn operator+(const HoloFn& l, const HoloFn& r);
HoloFn operator-(const HoloFn& l, const HoloFn& r);
HoloFn operator*(cplx c, const HoloFn& f);
HoloFn operator*(const HoloFn& l, const HoloFn& r);
/// outer ∘ inner; throws NotSelfMap unless `inner` carries a self-map certificate.
HoloFn compose(const HoloFn& outer, const HoloFn& inner);
/// Symbolic derivative (chain, product and linearity rules; closed forms wrap in a Derivative node).
HoloFn derivative(const HoloFn& f);
/// The antiderivative vanishing at 0.
HoloFn antiderivative0(const HoloFn& F);
/// z -> f(r z); throws BadRadius unless 0 < r < 1.
HoloFn dilate(const HoloFn& f, double r);
/// f - f(0).
HoloFn normalized(const HoloFn& f);

/// Grid verification of sup |h| < 1 - 1e-9 on a 256x256 polar grid at radius 0.999.
/// Returns h with the certificate set, or throws NotSelfMap.
HoloFn certify_self_map(const HoloFn& h);

// Evaluation.
cplx eval(const HoloFn& f, cplx z);
/// f'(z), exact for closed-form trees.
cplx eval_derivative(const HoloFn& f, cplx z);
/// Taylor jet of the given order at z.
Jet<cplx> jet(const HoloFn& f, cplx z, int order);

/// Uniform bound on the absolute evaluation error (0 for closed-form trees; +inf if unknown).
double error_bound(const HoloFn& f);

/// Bounds b[k] >= sup_{|w - c| <= rho} |f^(k)(w)| / k! for k = 0..order, or nullopt
/// when the tree offers no closed-form bound on that disc.
std::optional<Jet<double>> derivative_bounds(const HoloFn& f, cplx center, double rho, int order);

/// Closed-form upper bound for the Bloch seminorm p_B(f), when the tree structure gives one.
std::optional<double> structural_seminorm_bound(const HoloFn& f);

/// Upper bound for sup_{r <= |z| < 1} (1 - |z|^2)|f'(z)|.
std::optional<double> annulus_seminorm_bound(const HoloFn& f, double r);

/// Upper bound for (1 - |z|^2)|f'(z)| over D(center, rho) intersected with |z| >= r_inner.
std::optional<double> cell_seminorm_bound(const HoloFn& f, cplx center, double rho, double r_inner);

/// Tail bound sum_{m >= N} |a_m| m^(k) r^(m-k) under a majorant (k-th derivative of the tail).
double series_tail(const Majorant& maj, std::size_t n_terms, double r, int k);

}  // namespace blochcalc
