#include "blochcalc/vector_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace blochcalc {

namespace {

double one_minus_sq(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

void require_self_map_fixing_zero(const HoloFn& h) {
  if (!h.is_self_map()) throw Error(ErrorKind::NotSelfMap, "h must be a certified self-map");
  if (std::abs(eval(h, 0.0)) > 1e-12) throw Error(ErrorKind::NotSelfMap, "h must fix the origin");
}

// sum_i c_i f_i, skipping zero coefficients and not wrapping unit ones.
HoloFn combination(const std::vector<HoloFn>& fs, const std::vector<cplx>& c) {
  std::optional<HoloFn> acc;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (c[i] == 0.0) continue;
    HoloFn term = c[i] == 1.0 ? fs[i] : c[i] * fs[i];
    acc = acc ? *acc + term : term;
  }
  return acc ? *acc : HoloFn();
}

Molecule random_molecule(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  std::vector<Term> terms;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    const cplx z = std::polar(0.9 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    terms.push_back({cplx(normal(rng), normal(rng)), z});
  }
  return Molecule(std::move(terms)).canonicalized();
}

}  // namespace

NormKind dual_kind(NormKind k) {
  switch (k) {
    case NormKind::Sup:
      return NormKind::L1;
    case NormKind::L1:
      return NormKind::Sup;
    case NormKind::L2:
      break;
  }
  return NormKind::L2;
}

const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::Sup:
      return "sup";
    case NormKind::L1:
      return "l1";
    case NormKind::L2:
      break;
  }
  return "l2";
}

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "sup") return NormKind::Sup;
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  throw Error(ErrorKind::Parse, "unknown norm kind: " + s);
}

double operator_norm(const Eigen::MatrixXcd& T, NormKind k) {
  if (T.size() == 0) return 0.0;
  switch (k) {
    case NormKind::Sup:
      return T.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::L1:
      return T.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::L2:
      break;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
  return svd.singularValues()(0);
}

VectorBlochMap::VectorBlochMap(std::vector<BlochFn> components, NormKind norm)
    : components_(std::move(components)), norm_(norm) {
  if (components_.empty()) throw Error(ErrorKind::DimensionMismatch, "a vector map needs at least one component");
  for (const auto& c : components_) {
    if (!c.normalized()) throw Error(ErrorKind::NotNormalized, "vector map components must vanish at 0");
  }
}

Eigen::VectorXcd derivative_vector(const VectorBlochMap& f, cplx z) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.dim()));
  for (std::size_t i = 0; i < f.dim(); ++i) v(static_cast<Eigen::Index>(i)) = eval_derivative(f.components()[i].fn(), z);
  return v;
}

VectorBlochMap apply_matrix(const Eigen::MatrixXcd& T, const VectorBlochMap& f) {
  if (static_cast<std::size_t>(T.cols()) != f.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix columns must match the map dimension");
  }
  std::vector<HoloFn> fs;
  for (const auto& c : f.components()) fs.push_back(c.fn());
  std::vector<BlochFn> out;
  for (Eigen::Index j = 0; j < T.rows(); ++j) {
    std::vector<cplx> row(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) row[i] = T(j, static_cast<Eigen::Index>(i));
    out.emplace_back(combination(fs, row));
  }
  return VectorBlochMap(std::move(out), f.norm());
}

VectorBlochMap precompose(const VectorBlochMap& f, const HoloFn& h) {
  require_self_map_fixing_zero(h);
  if (h.kind() == Kind::Identity) return f;
  std::vector<BlochFn> out;
  for (const auto& c : f.components()) out.emplace_back(compose(c.fn(), h));
  return VectorBlochMap(std::move(out), f.norm());
}

namespace {

// Seminorm of T∘g (T = nullptr for g itself). Region bounds take the smaller of the
// componentwise bound of T∘g and ||T|| times the componentwise bound of g.
// `annulus_hint` is an extra bound for the region outside the sampled radius.
SupBracket seminorm_through(const Eigen::MatrixXcd* T, const VectorBlochMap& g, const SamplingConfig& cfg,
                            std::optional<double> annulus_hint = std::nullopt) {
  const NormKind k = g.norm();
  const auto n = static_cast<Eigen::Index>(g.dim());
  const VectorBlochMap f = T ? apply_matrix(*T, g) : g;
  if (!T && n == 1) return bloch_seminorm(g.components()[0], cfg);
  const double t_norm = T ? operator_norm(*T, k) : 0.0;
  double r_max = 1.0;
  for (const auto& c : f.components()) r_max = std::min(r_max, sampling_radius(c.fn(), cfg));
  for (const auto& c : g.components()) r_max = std::min(r_max, sampling_radius(c.fn(), cfg));

  // Applies `bound` to each component and returns the norm, or nullopt if any is missing.
  auto combine = [k](const VectorBlochMap& v, auto&& bound) -> std::optional<double> {
    Eigen::VectorXd d(static_cast<Eigen::Index>(v.dim()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      auto b = bound(v.components()[static_cast<std::size_t>(i)].fn());
      if (!b) return std::nullopt;
      d(i) = *b;
    }
    return vector_norm(d, k);
  };
  // The direct bound of T∘g is costlier; it is only computed when ||T|| times the bound
  // of g does not already settle the region against the target.
  auto smaller = [&](auto&& bound) -> std::optional<double> {
    if (!T) return combine(f, bound);
    auto via = combine(g, bound);
    if (via) {
      *via *= t_norm;
      if (*via <= cfg.bb_target) return via;
    }
    auto direct = combine(f, bound);
    if (direct && via) return std::min(*direct, *via);
    return direct ? direct : via;
  };

  auto objective = [&](cplx z) {
    const Eigen::VectorXcd d = derivative_vector(g, z);
    return one_minus_sq(z) * (T ? vector_norm(*T * d, k) : vector_norm(d, k));
  };
  CellBound cell = [&](cplx c, double rho, double r_inner) {
    return smaller([&](const HoloFn& fn) { return cell_seminorm_bound(fn, c, rho, r_inner); });
  };
  auto outer = smaller([&](const HoloFn& fn) { return annulus_seminorm_bound(fn, r_max); });
  if (annulus_hint && (!outer || *annulus_hint < *outer)) outer = annulus_hint;
  const auto known = smaller([](const HoloFn& fn) { return structural_seminorm_bound(fn); });
  return maximize_on_disc(objective, cfg, r_max, cell, outer, known);
}

}  // namespace

SupBracket vector_seminorm(const VectorBlochMap& f, const SamplingConfig& cfg) {
  return seminorm_through(nullptr, f, cfg);
}

Eigen::VectorXcd linearize_apply(const VectorBlochMap& f, const Molecule& gamma) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(f.dim()));
  for (const auto& t : gamma.terms()) v += t.lambda * derivative_vector(f, t.z);
  return v;
}

SupBracket operator_norm_estimate(const VectorBlochMap& f, const SamplingConfig& cfg) {
  return vector_seminorm(f, cfg);
}

RankResult bloch_rank(const VectorBlochMap& f, double tol, const RankConfig& cfg) {
  if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be positive");
  const auto pts = halton_disc(cfg.count, cfg.radius);
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(f.dim()));
  for (std::size_t j = 0; j < pts.size(); ++j) A.row(static_cast<Eigen::Index>(j)) = derivative_vector(f, pts[j]).transpose();
  RankResult out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  if (!(smax > 0.0)) {
    out.degenerate = true;
    return out;
  }
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) out.rank += out.singular_values(i) > tol * smax;
  return out;
}

Factorization factorize(const VectorBlochMap& f, double tol, const RankConfig& cfg) {
  const auto pts = halton_disc(cfg.count, cfg.radius);
  const auto n = static_cast<Eigen::Index>(f.dim());
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(pts.size()), n);
  for (std::size_t j = 0; j < pts.size(); ++j) A.row(static_cast<Eigen::Index>(j)) = derivative_vector(f, pts[j]).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * smax;
  if (r == 0) throw Error(ErrorKind::RankZero, "cannot factorize a map with vanishing derivative");

  // Rows of A are f'(z_j)^T = sum_k U_jk s_k V(:,k)^*, so span{f'(z_j)} = span conj(V(:, :r)).
  Eigen::MatrixXcd V = svd.matrixV().leftCols(r);
  for (int k = 0; k < r; ++k) {
    Eigen::Index arg = 0;
    V.col(k).cwiseAbs().maxCoeff(&arg);
    V.col(k) *= std::conj(V(arg, k)) / std::abs(V(arg, k));
  }

  std::vector<HoloFn> fs, dfs;
  for (const auto& c : f.components()) {
    fs.push_back(c.fn());
    dfs.push_back(derivative(c.fn()));
  }
  std::vector<BlochFn> g;
  for (int k = 0; k < r; ++k) {
    std::vector<cplx> col(fs.size());
    std::size_t nonzero = 0, last = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      col[i] = V(static_cast<Eigen::Index>(i), k);
      if (std::abs(col[i]) <= 1e-15) col[i] = 0.0;
      if (col[i] != 0.0) {
        ++nonzero;
        last = i;
      }
    }
    if (nonzero == 1 && std::abs(col[last] - 1.0) <= 1e-15) {
      g.emplace_back(fs[last]);
    } else {
      g.emplace_back(antiderivative0(combination(dfs, col)));
    }
  }

  Factorization out{V.conjugate(), VectorBlochMap(std::move(g), f.norm()), 0.0, smax};
  for (cplx z : pts) {
    const Eigen::VectorXcd d = derivative_vector(f, z) - out.T * derivative_vector(out.g, z);
    out.residual = std::max(out.residual, vector_norm(d, f.norm()));
  }
  return out;
}

BlochFn transpose_apply(const VectorBlochMap& f, const Eigen::VectorXcd& xstar) {
  if (static_cast<std::size_t>(xstar.size()) != f.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "dual vector length must match the map dimension");
  }
  std::vector<HoloFn> fs;
  std::vector<cplx> c;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    fs.push_back(f.components()[i].fn());
    c.push_back(xstar(static_cast<Eigen::Index>(i)));
  }
  return BlochFn(combination(fs, c));
}

std::vector<Eigen::VectorXcd> dual_sphere_sample(std::size_t n, NormKind k, std::size_t random_count,
                                                 std::uint64_t seed) {
  const auto N = static_cast<Eigen::Index>(n);
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index i = 0; i < N; ++i) {
    for (cplx unit : {cplx(1.0), cplx(0.0, 1.0)}) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
      e(i) = unit;
      out.push_back(e);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const NormKind dk = dual_kind(k);
  while (out.size() < 2 * n + random_count) {
    Eigen::VectorXcd v(N);
    for (Eigen::Index i = 0; i < N; ++i) v(i) = {normal(rng), normal(rng)};
    const double s = vector_norm(v, dk);
    if (s > 0.0) out.push_back(v / s);
  }
  return out;
}

TransposeEstimate transpose_norm_estimate(const VectorBlochMap& f, const SphereConfig& cfg) {
  const SupBracket fb = vector_seminorm(f, cfg.seminorm);
  double r_max = 1.0;
  for (const auto& c : f.components()) r_max = std::min(r_max, sampling_radius(c.fn(), cfg.seminorm));
  std::vector<cplx> pts{0.0};
  const int A = std::max(cfg.seminorm.angular, 1);
  for (double r : chebyshev_radii(std::max(cfg.seminorm.radial, 2), r_max)) {
    if (r == 0.0) continue;
    for (int j = 0; j < A; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / A));
  }
  pts.insert(pts.end(), fb.argmax.begin(), fb.argmax.end());

  const auto n = static_cast<Eigen::Index>(f.dim());
  Eigen::MatrixXcd W(static_cast<Eigen::Index>(pts.size()), n);
  parallel_for(pts.size(), [&](std::size_t j) {
    W.row(static_cast<Eigen::Index>(j)) = one_minus_sq(pts[j]) * derivative_vector(f, pts[j]).transpose();
  });

  const auto duals = dual_sphere_sample(f.dim(), f.norm(), cfg.random_count, cfg.seed);
  std::vector<double> best(duals.size());
  parallel_for(duals.size(), [&](std::size_t d) { best[d] = (W * duals[d]).cwiseAbs().maxCoeff(); });

  TransposeEstimate out;
  out.lower = std::min(*std::max_element(best.begin(), best.end()), fb.upper);
  out.upper = fb.upper;
  out.certified = fb.certified;
  out.duals = duals.size();
  out.seed = cfg.seed;
  return out;
}

RangeSample sample_range(const VectorBlochMap& f, std::span<const cplx> points) {
  RangeSample s;
  s.points.assign(points.begin(), points.end());
  s.vectors.resize(points.size());
  parallel_for(points.size(), [&](std::size_t j) {
    s.vectors[j] = one_minus_sq(points[j]) * derivative_vector(f, points[j]);
  });
  return s;
}

std::size_t cover_number(const std::vector<Eigen::VectorXcd>& cloud, double eps, NormKind k) {
  if (cloud.empty()) return 0;
  const Eigen::Index n = cloud.front().size();
  const auto P = static_cast<Eigen::Index>(cloud.size());
  // Sweep along the principal real direction of the cloud.
  Eigen::MatrixXd X(P, 2 * n);
  for (Eigen::Index j = 0; j < P; ++j) {
    X.row(j).head(n) = cloud[static_cast<std::size_t>(j)].real().transpose();
    X.row(j).tail(n) = cloud[static_cast<std::size_t>(j)].imag().transpose();
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd C = (X.rowwise() - mean).transpose() * (X.rowwise() - mean);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  const Eigen::VectorXd dir = eig.eigenvectors().col(2 * n - 1);
  const Eigen::VectorXd t = X * dir;

  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t(static_cast<Eigen::Index>(a)) < t(static_cast<Eigen::Index>(b));
  });
  // |t_a - t_b| <= ||a - b||_2 <= sqrt(n) ||a - b|| for each of the three norms.
  const double window = eps * std::sqrt(static_cast<double>(n));
  std::vector<char> covered(cloud.size(), 0);
  std::size_t centres = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t p = order[pos];
    if (covered[p]) continue;
    std::size_t c = p;
    for (std::size_t q = pos + 1; q < order.size(); ++q) {
      const std::size_t cand = order[q];
      if (t(static_cast<Eigen::Index>(cand)) - t(static_cast<Eigen::Index>(p)) > window) break;
      if (vector_norm(cloud[cand] - cloud[p], k) <= eps) c = cand;
    }
    ++centres;
    for (std::size_t q = 0; q < cloud.size(); ++q) {
      if (!covered[q] && vector_norm(cloud[q] - cloud[c], k) <= eps) covered[q] = 1;
    }
  }
  return centres;
}

std::size_t magnitude_cover_number(const std::vector<Eigen::VectorXcd>& cloud, double eps, NormKind k) {
  std::vector<double> m;
  m.reserve(cloud.size());
  for (const auto& v : cloud) m.push_back(vector_norm(v, k));
  std::sort(m.begin(), m.end());
  std::size_t centres = 0, i = 0;
  while (i < m.size()) {
    const double start = m[i];
    std::size_t j = i;
    while (j + 1 < m.size() && m[j + 1] <= start + eps) ++j;
    const double centre = m[j];
    ++centres;
    i = j + 1;
    while (i < m.size() && m[i] <= centre + eps) ++i;
  }
  return centres;
}

TailProfile vector_tail(const VectorBlochMap& f, std::span<const double> radii, int angular) {
  if (f.dim() == 1) return little_bloch_tail(f.components()[0], radii, angular);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorKind::BadRadius, "tail radii must be strictly increasing in (0,1)");
    }
  }
  TailProfile tail;
  tail.radii.assign(radii.begin(), radii.end());
  tail.values.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    double sup = 0.0;
    for (int j = 0; j < angular; ++j) {
      const cplx z = std::polar(radii[i], 2.0 * std::numbers::pi * j / angular);
      sup = std::max(sup, one_minus_sq(z) * vector_norm(derivative_vector(f, z), f.norm()));
    }
    tail.values[i] = sup;
  });
  return tail;
}

RangeDiagnostics range_diagnostics(const VectorBlochMap& f, const RangeConfig& cfg) {
  RangeDiagnostics d;
  const auto pts = halton_disc(cfg.count, cfg.radius);
  const RangeSample s = sample_range(f, pts);
  for (double eps : cfg.eps_list) {
    d.cover_numbers[eps] = cover_number(s.vectors, eps, f.norm());
    d.magnitude_cover_numbers[eps] = magnitude_cover_number(s.vectors, eps, f.norm());
  }
  d.tail = vector_tail(f, cfg.tail_radii);
  d.rank = bloch_rank(f, cfg.rank_tol).rank;
  return d;
}

IdealReport ideal_inequality_check(const Eigen::MatrixXcd& T, const VectorBlochMap& f, const HoloFn& h,
                                   const IdealConfig& cfg) {
  if (static_cast<std::size_t>(T.cols()) != f.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix columns must match the map dimension");
  }
  require_self_map_fixing_zero(h);
  const VectorBlochMap composite = apply_matrix(T, precompose(f, h));

  IdealReport rep;
  rep.f_upper = vector_seminorm(f, cfg.seminorm).upper;
  rep.t_norm = operator_norm(T, f.norm());
  SamplingConfig decide = cfg.seminorm;
  decide.bb_target = rep.t_norm * rep.f_upper;
  // Pick's lemma bounds the annulus |z| >= r_max by ||T|| p_B(f); the sampled disc is certified cell by cell.
  const SupBracket comp = seminorm_through(&T, precompose(f, h), decide, rep.t_norm * rep.f_upper);
  rep.composite_lower = comp.lower;
  rep.composite_upper = comp.upper;
  rep.bound_ok = rep.composite_upper <= rep.t_norm * rep.f_upper + 1e-8;

  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.molecules; ++i) {
    const Molecule gamma = random_molecule(rng);
    const Eigen::VectorXcd lhs = linearize_apply(composite, gamma);
    const Eigen::VectorXcd rhs = T * linearize_apply(f, lift_composition(h, gamma));
    const double scale = std::max(1.0, lhs.norm());
    rep.max_linearization_error = std::max(rep.max_linearization_error, (lhs - rhs).norm() / scale);
  }
  rep.linearization_ok = rep.max_linearization_error <= 1e-9;
  return rep;
}

}  // namespace blochcalc
