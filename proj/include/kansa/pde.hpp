#pragma once

// Second-order elliptic operators in expanded (non-divergence) form and
// manufactured exact solutions for Dirichlet problems.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kansa/geometry.hpp"
#include "kansa/jet.hpp"
#include "kansa/kernels.hpp"

namespace kansa {

/// Coefficients of L u = sum_ij A_ij d_i d_j u + sum_j B_j d_j u + C u at one point.
struct OperatorCoefficients {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double c = 0.0;
};

struct EllipticOperator {
  std::string name;
  int d = 2;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> second_order;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> first_order;
  std::function<double(const Eigen::VectorXd&)> zeroth_order;

  OperatorCoefficients coefficients_at(const Eigen::VectorXd& x) const;
};

/// Names accepted by builtin_operator().
const std::vector<std::string>& builtin_operator_names();

/// laplace:      Delta u
/// convdiff:     Delta u + [2, 3]^T grad u - 4 u
/// helmholtz_x2: Delta u + (x^2 + 1) u
/// helmholtz_x:  Delta u + x u
EllipticOperator builtin_operator(const std::string& name);

double apply_coefficients(const OperatorCoefficients& coefficients, const Jet2& jet);

/// L applied to a 2-jet taken at x.
double apply_operator(const EllipticOperator& op, const Jet2& jet, const Eigen::VectorXd& x);

struct ManufacturedSolution {
  std::string name;
  int d = 2;
  std::function<Jet2(const Eigen::VectorXd&)> evaluator;
};

Jet2 solution_jet(const ManufacturedSolution& solution, const Eigen::VectorXd& x);

/// Names accepted by builtin_solution().
const std::vector<std::string>& builtin_solution_names();

/// trig:   sin(pi x / 2) cos(pi y / 2)
/// peaks3: peaks(3x, 3y)
/// peaks1: peaks(x, y)
/// franke: franke(2x - 1, 2y - 1)
/// Jets come from hyper-dual forward-mode differentiation.
ManufacturedSolution builtin_solution(const std::string& name);

/// MATLAB-style peaks surface and the Franke test function, plain values.
double peaks(double s, double t);
double franke(double s, double t);

/// u(x) = Phi(x - center); lies in any trial space containing `center`.
ManufacturedSolution kernel_translate_solution(const Kernel& kernel, const Eigen::VectorXd& center);

/// L u* = f in the domain, u* = g on its boundary.
struct BoundaryValueProblem {
  EllipticOperator op;
  Domain domain;
  ManufacturedSolution exact;

  double f(const Eigen::VectorXd& x) const;
  double g(const Eigen::VectorXd& y) const;
};

/// Built-in problem on [-1, 1]^2.
BoundaryValueProblem make_problem(const std::string& solution_name, const std::string& operator_name);

}  // namespace kansa
