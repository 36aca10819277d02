#include "kansa/assembly.hpp"

#include <ostream>

#include "kansa/errors.hpp"

namespace kansa {

const char* to_string(TrialSpace trial) {
  return trial == TrialSpace::z_only ? "Z" : "Z_union_Y";
}

TrialSpace trial_space_from_string(const std::string& name) {
  if (name == "Z" || name == "z" || name == "z_only") return TrialSpace::z_only;
  if (name == "Z_union_Y" || name == "ZuY" || name == "z_union_y") return TrialSpace::z_union_y;
  throw ParameterError("unknown trial space '" + name + "' (expected Z or Z_union_Y)");
}

namespace {

constexpr double kDuplicateSq = kDuplicateTolerance * kDuplicateTolerance;

bool has_match(const Eigen::MatrixXd& points, Eigen::Index count, const Eigen::RowVectorXd& p) {
  for (Eigen::Index j = 0; j < count; ++j) {
    if ((points.row(j) - p).squaredNorm() <= kDuplicateSq) return true;
  }
  return false;
}

}  // namespace

PointSet trial_center_set(const PointSet& z, const PointSet& y, TrialSpace trial, int* removed) {
  for (Eigen::Index i = 1; i < z.size(); ++i) {
    if (has_match(z.points, i, z.points.row(i))) {
      throw AssemblyError("assemble: trial set Z contains duplicate centers (row " + std::to_string(i) + ")");
    }
  }
  PointSet centers;
  centers.domain = z.domain;
  centers.location = Location::mixed;
  int dropped = 0;
  if (trial == TrialSpace::z_only) {
    centers.points = z.points;
  } else {
    if (y.size() > 0 && y.dimension() != z.dimension()) {
      throw AssemblyError("assemble: Z and Y have different dimensions");
    }
    centers.points.resize(z.size() + y.size(), z.dimension());
    centers.points.topRows(z.size()) = z.points;
    Eigen::Index count = z.size();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (has_match(centers.points, count, y.points.row(i))) {
        ++dropped;
        continue;
      }
      centers.points.row(count++) = y.points.row(i);
    }
    centers.points.conservativeResize(count, Eigen::NoChange);
  }
  if (removed) *removed = dropped;
  return centers;
}

Eigen::MatrixXd pde_matrix(const EllipticOperator& op, const Kernel& kernel, const PointSet& x,
                           const PointSet& centers) {
  kernel.validate();
  const int d = kernel.d;
  if (x.size() > 0 && x.dimension() != d) throw AssemblyError("assemble: X dimension mismatch");
  if (centers.dimension() != d || op.d != d) throw AssemblyError("assemble: dimension mismatch");
  Eigen::MatrixXd matrix(x.size(), centers.size());
  Eigen::VectorXd delta(d);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Eigen::VectorXd xi = x.point(i);
    const OperatorCoefficients c = op.coefficients_at(xi);
    const double trace_a = c.a.trace();
    // With hessian = diag I + outer delta delta^T and gradient = slope delta,
    // L Phi = diag tr(A) + outer delta^T A delta + slope B.delta + C Phi.
    for (Eigen::Index j = 0; j < centers.size(); ++j) {
      delta = xi - centers.points.row(j).transpose();
      const RadialJet jet = radial_jet(kernel, delta.norm());
      matrix(i, j) = jet.diag * trace_a + jet.outer * delta.dot(c.a * delta) +
                     jet.slope * c.b.dot(delta) + c.c * jet.value;
    }
  }
  return matrix;
}

Eigen::MatrixXd boundary_matrix(const Kernel& kernel, const PointSet& y, const PointSet& centers) {
  kernel.validate();
  if (y.size() > 0 && y.dimension() != centers.dimension()) throw AssemblyError("assemble: Y dimension mismatch");
  Eigen::MatrixXd matrix(y.size(), centers.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    for (Eigen::Index j = 0; j < centers.size(); ++j) {
      matrix(i, j) = radial_jet(kernel, (y.points.row(i) - centers.points.row(j)).norm()).value;
    }
  }
  return matrix;
}

void reassign_rhs(CollocationSystem& system, const BoundaryValueProblem& problem, const PointSet& x,
                  const PointSet& y) {
  system.f.resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) system.f[i] = problem.f(x.point(i));
  system.g.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) system.g[i] = problem.g(y.point(i));
}

CollocationSystem assemble(const BoundaryValueProblem& problem, const Kernel& kernel, const PointSet& x,
                           const PointSet& y, TrialSpace trial, const PointSet& z) {
  kernel.validate();
  CollocationSystem system;
  system.kernel = kernel;
  system.trial = trial;
  int removed = 0;
  system.trial_centers = trial_center_set(z, y, trial, &removed);
  if (removed > 0) {
    system.warnings.push_back(std::to_string(removed) +
                              " boundary points coincide with Z centers and were merged");
  }
  system.pde = pde_matrix(problem.op, kernel, x, system.trial_centers);
  system.bdy = boundary_matrix(kernel, y, system.trial_centers);
  reassign_rhs(system, problem, x, y);
  if (x.size() + y.size() < system.n_trial()) {
    system.warnings.push_back("underdetermined: n_X + n_Y < n_T");
  }
  return system;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  out << "# rows=" << matrix.rows() << " cols=" << matrix.cols() << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) out << (j ? "," : "") << matrix(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kansa
