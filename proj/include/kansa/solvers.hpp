#pragma once

// Dense SVD-based least-squares solvers for the collocation system:
//   CLS:     min |A_pde l - f|  subject to  A_bdy l = g   (null-space elimination)
//   WLS(th): min |A_pde l - f|^2 + W(th) |A_bdy l - g|^2   (weighted stacking)

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "kansa/assembly.hpp"

namespace kansa {

/// Relative truncation tolerance. std::nullopt selects the default
/// max(rows, cols) * machine epsilon for each decomposed matrix.
using Rcond = std::optional<double>;

double default_rcond(Eigen::Index rows, Eigen::Index cols);

struct SvdLstsqResult {
  Eigen::VectorXd solution;
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;  // descending
  double threshold = 0.0;           // rcond * sigma_max
};

/// Minimum-norm least-squares solution of M x ~ b, discarding singular
/// values below rcond * sigma_max. Tall matrices are reduced by Householder
/// QR before the SVD of the triangular factor.
/// Throws NumericError on non-finite input and ParameterError on empty M.
SvdLstsqResult svd_lstsq(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, Rcond rcond = std::nullopt);

/// Orthonormal basis of null(M) from the trailing right singular vectors.
/// Returns an n_cols x 0 matrix when M has full column rank.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& m, Rcond rcond = std::nullopt);

/// Number of singular values above rcond * sigma_max.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, Rcond rcond = std::nullopt);

struct SolveDiagnostics {
  std::string method;                // "CLS", "WLS" or "LS" (constraint-free fallback)
  Eigen::Index bdy_rank = 0;         // numerical rank of A_bdy
  double rcond = 0.0;                // tolerance used on the solved system
  double truncation_threshold = 0.0; // rcond * sigma_max of the solved system
  Eigen::Index system_rank = 0;      // rank of the solved (reduced or stacked) system
  double pde_residual = 0.0;         // |A_pde l - f|_2
  double bdy_residual = 0.0;         // |A_bdy l - g|_2
  double cond_estimate = 0.0;        // sigma_max / sigma_min of the solved system
  bool constraint_free = false;      // CLS with empty A_bdy
};

struct LeastSquaresSolution {
  Eigen::VectorXd coefficients;
  PointSet trial_centers;
  Kernel kernel;
  SolveDiagnostics diagnostics;
};

struct WlsWeight {
  double theta = 0.0;
  double h_x = 1.0;
  double h_y = 1.0;
  int d = 2;
  double w = 1.0;  // +infinity encodes the CLS limit

  bool is_cls() const { return std::isinf(theta); }
};

inline constexpr double kThetaInfinity = std::numeric_limits<double>::infinity();

/// W(theta) = (h_Y / h_X)^{d theta / 2} h_Y^{-2 theta}; theta = infinity gives W = infinity.
WlsWeight wls_weight(double theta, double h_x, double h_y, int d);

/// How W enters the stacked system [A_pde; s A_bdy] l = [f; s g]:
/// squared: s = sqrt(W), so W weights the squared boundary residual;
/// linear:  s = W (rows scaled by W itself).
enum class WeightConvention { squared, linear };

const char* to_string(WeightConvention convention);
WeightConvention weight_convention_from_string(const std::string& name);

LeastSquaresSolution solve_cls(const CollocationSystem& system, Rcond rcond = std::nullopt);

/// Dispatches to solve_cls when weight.is_cls().
LeastSquaresSolution solve_wls(const CollocationSystem& system, const WlsWeight& weight,
                               Rcond rcond = std::nullopt,
                               WeightConvention convention = WeightConvention::squared);

/// J_W(l) = sqrt(|A_pde l - f|^2 + W |A_bdy l - g|^2).
double objective_j(const CollocationSystem& system, double w, const Eigen::VectorXd& coefficients);

}  // namespace kansa
