#include "blochcalc/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace blochcalc {

LpResult maximize_free(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       int max_iterations) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (c.size() != n || b.size() != m) throw std::invalid_argument("LP dimension mismatch");
  if ((b.array() < 0.0).any()) throw std::invalid_argument("LP requires b >= 0");

  // Columns: u (n), v (n), slacks (m), rhs. x = u - v.
  const Eigen::Index cols = 2 * n + m;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  T.topLeftCorner(m, n) = A;
  T.block(0, n, m, n) = -A;
  T.block(0, 2 * n, m, m).setIdentity();
  T.topRightCorner(m, 1) = b;
  T.block(m, 0, 1, n) = -c.transpose();
  T.block(m, n, 1, n) = c.transpose();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = 2 * n + i;

  constexpr double eps = 1e-11;
  LpResult res;
  int degenerate_run = 0;
  for (int it = 0; it < max_iterations; ++it) {
    // Dantzig pricing; Bland's rule after a run of degenerate pivots.
    Eigen::Index enter = -1;
    if (degenerate_run < 50) {
      double most = -eps;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (T(m, j) < most) {
          most = T(m, j);
          enter = j;
        }
      }
    } else {
      for (Eigen::Index j = 0; j < cols && enter < 0; ++j)
        if (T(m, j) < -eps) enter = j;
    }
    if (enter < 0) {
      res.optimal = true;
      break;
    }
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a > eps) {
        const double ratio = T(i, cols) / a;
        if (ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return res;  // unbounded
    degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  if (!res.optimal) return res;
  Eigen::VectorXd uv = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < m; ++i) uv(basis[static_cast<std::size_t>(i)]) = T(i, cols);
  res.x = uv.head(n) - uv.segment(n, n);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace blochcalc
