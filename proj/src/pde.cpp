#include "kansa/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kansa/errors.hpp"
#include "kansa/hyperdual.hpp"

namespace kansa {

OperatorCoefficients EllipticOperator::coefficients_at(const Eigen::VectorXd& x) const {
  OperatorCoefficients c;
  c.a = second_order ? second_order(x) : Eigen::MatrixXd::Identity(d, d);
  c.b = first_order ? first_order(x) : Eigen::VectorXd::Zero(d);
  c.c = zeroth_order ? zeroth_order(x) : 0.0;
  return c;
}

const std::vector<std::string>& builtin_operator_names() {
  static const std::vector<std::string> names{"laplace", "convdiff", "helmholtz_x2", "helmholtz_x"};
  return names;
}

EllipticOperator builtin_operator(const std::string& name) {
  EllipticOperator op;
  op.name = name;
  op.d = 2;
  op.second_order = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(2, 2); };
  op.first_order = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2); };
  op.zeroth_order = [](const Eigen::VectorXd&) { return 0.0; };
  if (name == "laplace") return op;
  if (name == "convdiff") {
    op.first_order = [](const Eigen::VectorXd&) { return Eigen::Vector2d(2.0, 3.0).eval(); };
    op.zeroth_order = [](const Eigen::VectorXd&) { return -4.0; };
    return op;
  }
  if (name == "helmholtz_x2") {
    op.zeroth_order = [](const Eigen::VectorXd& x) { return x[0] * x[0] + 1.0; };
    return op;
  }
  if (name == "helmholtz_x") {
    op.zeroth_order = [](const Eigen::VectorXd& x) { return x[0]; };
    return op;
  }
  throw ParameterError("unknown operator '" + name + "'");
}

double apply_coefficients(const OperatorCoefficients& coefficients, const Jet2& jet) {
  return (coefficients.a.array() * jet.hessian.array()).sum() + coefficients.b.dot(jet.gradient) +
         coefficients.c * jet.value;
}

double apply_operator(const EllipticOperator& op, const Jet2& jet, const Eigen::VectorXd& x) {
  if (jet.gradient.size() != op.d || jet.hessian.rows() != op.d || x.size() != op.d) {
    throw ParameterError("apply_operator: jet dimension does not match operator");
  }
  return apply_coefficients(op.coefficients_at(x), jet);
}

Jet2 solution_jet(const ManufacturedSolution& solution, const Eigen::VectorXd& x) {
  return solution.evaluator(x);
}

namespace {

template <class T>
T trig_solution(const T& x, const T& y) {
  using std::cos;
  using std::sin;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  return sin(half_pi * x) * cos(half_pi * y);
}

template <class T>
T peaks_surface(const T& s, const T& t) {
  using std::exp;
  using std::pow;
  const T one_minus_s = 1.0 - s;
  const T t_plus_1 = t + 1.0;
  const T s_plus_1 = s + 1.0;
  return 3.0 * one_minus_s * one_minus_s * exp(-(s * s) - t_plus_1 * t_plus_1) -
         10.0 * (s / 5.0 - s * s * s - pow(t, 5.0)) * exp(-(s * s) - t * t) -
         (1.0 / 3.0) * exp(-(s_plus_1 * s_plus_1) - t * t);
}

template <class T>
T franke_surface(const T& s, const T& t) {
  using std::exp;
  const T a = 9.0 * s;
  const T b = 9.0 * t;
  const T a2 = a - 2.0, b2 = b - 2.0;
  const T a1 = a + 1.0, b1 = b + 1.0;
  const T a7 = a - 7.0, b3 = b - 3.0;
  const T a4 = a - 4.0, b7 = b - 7.0;
  return 0.75 * exp(-(a2 * a2 + b2 * b2) / 4.0) + 0.75 * exp(-(a1 * a1) / 49.0 - b1 / 10.0) +
         0.5 * exp(-(a7 * a7 + b3 * b3) / 4.0) - 0.2 * exp(-(a4 * a4) - b7 * b7);
}

using Dual2 = HyperDual<2>;

template <class Field>
ManufacturedSolution planar_solution(std::string name, Field field) {
  ManufacturedSolution s;
  s.name = std::move(name);
  s.d = 2;
  s.evaluator = [field](const Eigen::VectorXd& p) {
    if (p.size() != 2) throw ParameterError("manufactured solution: expected a 2D point");
    return field(Dual2::variable(p[0], 0), Dual2::variable(p[1], 1)).to_jet();
  };
  return s;
}

}  // namespace

double peaks(double s, double t) { return peaks_surface(s, t); }
double franke(double s, double t) { return franke_surface(s, t); }

const std::vector<std::string>& builtin_solution_names() {
  static const std::vector<std::string> names{"trig", "peaks3", "peaks1", "franke"};
  return names;
}

ManufacturedSolution builtin_solution(const std::string& name) {
  if (name == "trig") {
    return planar_solution(name, [](const Dual2& x, const Dual2& y) { return trig_solution(x, y); });
  }
  if (name == "peaks3") {
    return planar_solution(
        name, [](const Dual2& x, const Dual2& y) { return peaks_surface(3.0 * x, 3.0 * y); });
  }
  if (name == "peaks1") {
    return planar_solution(name, [](const Dual2& x, const Dual2& y) { return peaks_surface(x, y); });
  }
  if (name == "franke") {
    return planar_solution(name, [](const Dual2& x, const Dual2& y) {
      return franke_surface(2.0 * x - 1.0, 2.0 * y - 1.0);
    });
  }
  throw ParameterError("unknown exact solution '" + name + "'");
}

ManufacturedSolution kernel_translate_solution(const Kernel& kernel, const Eigen::VectorXd& center) {
  kernel.validate();
  ManufacturedSolution s;
  s.name = "kernel_translate";
  s.d = kernel.d;
  s.evaluator = [kernel, center](const Eigen::VectorXd& x) { return kernel_jet(kernel, x, center); };
  return s;
}

double BoundaryValueProblem::f(const Eigen::VectorXd& x) const {
  return apply_operator(op, solution_jet(exact, x), x);
}

double BoundaryValueProblem::g(const Eigen::VectorXd& y) const {
  return solution_jet(exact, y).value;
}

BoundaryValueProblem make_problem(const std::string& solution_name, const std::string& operator_name) {
  return {builtin_operator(operator_name), Domain::symmetric_box(2), builtin_solution(solution_name)};
}

}  // namespace kansa
