#pragma once

#include <Eigen/Dense>

namespace blochcalc {

struct LpResult {
  bool optimal = false;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// maximize c.x subject to A x <= b with x free and b >= 0 (the origin is feasible).
/// Dense tableau simplex; intended for a few thousand rows at most.
LpResult maximize_free(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       int max_iterations = 100000);

}  // namespace blochcalc
