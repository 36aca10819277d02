#pragma once

#include <Eigen/Dense>

namespace kansa {

/// Value, gradient and Hessian of a scalar field at a point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;

  static Jet2 zero(int d) {
    return {0.0, Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  }
};

}  // namespace kansa
