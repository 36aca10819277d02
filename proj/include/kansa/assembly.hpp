#pragma once

// Dense collocation matrices for the overdetermined Kansa system
//   A_pde lambda = f|X   (entries L Phi(x_i - t_j))
//   A_bdy lambda = g|Y   (entries Phi(y_i - t_j))
// over trial centers T = Z or T = Z u Y.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kansa/geometry.hpp"
#include "kansa/kernels.hpp"
#include "kansa/pde.hpp"

namespace kansa {

enum class TrialSpace { z_only, z_union_y };

const char* to_string(TrialSpace trial);
TrialSpace trial_space_from_string(const std::string& name);

/// Centers closer than this are treated as the same point.
inline constexpr double kDuplicateTolerance = 1e-12;

struct CollocationSystem {
  Eigen::MatrixXd pde;  // n_X x n_T
  Eigen::MatrixXd bdy;  // n_Y x n_T
  Eigen::VectorXd f;    // f(x_i)
  Eigen::VectorXd g;    // g(y_i)
  PointSet trial_centers;
  TrialSpace trial = TrialSpace::z_union_y;
  Kernel kernel;
  std::vector<std::string> warnings;

  Eigen::Index n_trial() const { return trial_centers.size(); }
};

/// Z, or Z followed by the points of Y that do not coincide (within
/// kDuplicateTolerance) with a point of Z. Duplicates inside Z itself throw
/// AssemblyError. `removed` receives the number of Y points dropped.
PointSet trial_center_set(const PointSet& z, const PointSet& y, TrialSpace trial, int* removed = nullptr);

/// Rows of L Phi(x_i - t_j).
Eigen::MatrixXd pde_matrix(const EllipticOperator& op, const Kernel& kernel, const PointSet& x,
                           const PointSet& centers);

/// Rows of Phi(y_i - t_j).
Eigen::MatrixXd boundary_matrix(const Kernel& kernel, const PointSet& y, const PointSet& centers);

CollocationSystem assemble(const BoundaryValueProblem& problem, const Kernel& kernel, const PointSet& x,
                           const PointSet& y, TrialSpace trial, const PointSet& z);

/// Replaces f and g with the data of another problem sharing the operator.
void reassign_rhs(CollocationSystem& system, const BoundaryValueProblem& problem, const PointSet& x,
                  const PointSet& y);

/// Row-major CSV dump. The first line is "# rows=<r> cols=<c>", followed by
/// one comma-separated matrix row per line at full double precision.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

}  // namespace kansa
