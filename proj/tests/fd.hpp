#pragma once

// Central finite differences, used as an independent oracle for jets.

#include <functional>

#include <Eigen/Dense>

namespace fd {

using Scalar = std::function<double(const Eigen::VectorXd&)>;

inline Eigen::VectorXd gradient(const Scalar& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p[i] += step;
    m[i] -= step;
    g[i] = (f(p) - f(m)) / (2.0 * step);
  }
  return g;
}

inline Eigen::MatrixXd hessian(const Scalar& f, const Eigen::VectorXd& x, double step) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      auto at = [&](double si, double sj) {
        Eigen::VectorXd y = x;
        y[i] += si * step;
        y[j] += sj * step;
        return f(y);
      };
      h(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * step * step);
    }
  }
  return h;
}

// max |a - b| / max(scale, max |b|)
inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double scale = 1.0) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(scale, b.cwiseAbs().maxCoeff());
}

}  // namespace fd
