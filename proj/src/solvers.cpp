#include "kansa/solvers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "kansa/errors.hpp"

namespace kansa {

double default_rcond(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

double resolve_rcond(Rcond rcond, const Eigen::MatrixXd& m) {
  const double value = rcond.value_or(default_rcond(m.rows(), m.cols()));
  if (!(value >= 0.0)) throw ParameterError("rcond must be non-negative");
  return value;
}

Eigen::Index count_above(const Eigen::VectorXd& sigma, double threshold) {
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > threshold) ++rank;
  return rank;
}

double condition_of(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) return 0.0;
  const double smallest = sigma[sigma.size() - 1];
  return smallest > 0.0 ? sigma[0] / smallest : std::numeric_limits<double>::infinity();
}

// x = V_r diag(1/sigma_r) U_r^T b
Eigen::VectorXd truncated_apply(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma, const Eigen::MatrixXd& v,
                                Eigen::Index rank, const Eigen::VectorXd& b) {
  Eigen::VectorXd coeffs = u.leftCols(rank).transpose() * b;
  coeffs.array() /= sigma.head(rank).array();
  return v.leftCols(rank) * coeffs;
}

}  // namespace

SvdLstsqResult svd_lstsq(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, Rcond rcond) {
  if (m.rows() == 0 || m.cols() == 0) throw ParameterError("svd_lstsq: empty matrix");
  if (b.size() != m.rows()) throw ParameterError("svd_lstsq: right-hand side length mismatch");
  require_finite(m, "svd_lstsq");
  require_finite(b, "svd_lstsq");
  const double tol = resolve_rcond(rcond, m);

  SvdLstsqResult result;
  if (m.rows() > m.cols()) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::Index n = m.cols();
    const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Eigen::VectorXd qtb = (qr.householderQ().adjoint() * b).head(n);
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    result.singular_values = svd.singularValues();
    result.threshold = tol * (n > 0 ? result.singular_values[0] : 0.0);
    result.rank = count_above(result.singular_values, result.threshold);
    result.solution = truncated_apply(svd.matrixU(), result.singular_values, svd.matrixV(), result.rank, qtb);
  } else {
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    result.singular_values = svd.singularValues();
    result.threshold = tol * result.singular_values[0];
    result.rank = count_above(result.singular_values, result.threshold);
    result.solution = truncated_apply(svd.matrixU(), result.singular_values, svd.matrixV(), result.rank, b);
  }
  if (!result.solution.allFinite()) throw NumericError("svd_lstsq: non-finite solution");
  return result;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& m, Rcond rcond) {
  if (m.rows() == 0 || m.cols() == 0) throw ParameterError("nullspace_basis: empty matrix");
  require_finite(m, "nullspace_basis");
  const double tol = resolve_rcond(rcond, m);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::Index rank = count_above(sigma, tol * sigma[0]);
  return svd.matrixV().rightCols(m.cols() - rank);
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, Rcond rcond) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  require_finite(m, "numerical_rank");
  const double tol = resolve_rcond(rcond, m);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sigma = svd.singularValues();
  return count_above(sigma, tol * sigma[0]);
}

WlsWeight wls_weight(double theta, double h_x, double h_y, int d) {
  if (!(h_x > 0.0) || !(h_y > 0.0)) throw ParameterError("wls_weight: fill distances must be positive");
  if (!(theta >= 0.0)) throw ParameterError("wls_weight: theta must be >= 0 or infinity");
  if (d < 1) throw ParameterError("wls_weight: dimension must be >= 1");
  WlsWeight weight{theta, h_x, h_y, d, 1.0};
  if (std::isinf(theta)) {
    weight.w = std::numeric_limits<double>::infinity();
  } else if (theta > 0.0) {
    weight.w = std::pow(h_y / h_x, 0.5 * d * theta) * std::pow(h_y, -2.0 * theta);
  }
  return weight;
}

const char* to_string(WeightConvention convention) {
  return convention == WeightConvention::squared ? "squared" : "linear";
}

WeightConvention weight_convention_from_string(const std::string& name) {
  if (name == "squared") return WeightConvention::squared;
  if (name == "linear") return WeightConvention::linear;
  throw ParameterError("unknown weight convention '" + name + "' (expected squared or linear)");
}

namespace {

LeastSquaresSolution finish(const CollocationSystem& system, Eigen::VectorXd coefficients,
                            SolveDiagnostics diagnostics) {
  if (!coefficients.allFinite()) throw NumericError("solver produced non-finite coefficients");
  diagnostics.pde_residual = system.pde.rows() ? (system.pde * coefficients - system.f).norm() : 0.0;
  diagnostics.bdy_residual = system.bdy.rows() ? (system.bdy * coefficients - system.g).norm() : 0.0;
  return {std::move(coefficients), system.trial_centers, system.kernel, std::move(diagnostics)};
}

void check_shapes(const CollocationSystem& system) {
  const Eigen::Index n = system.n_trial();
  if (system.pde.cols() != n || system.bdy.cols() != n || system.f.size() != system.pde.rows() ||
      system.g.size() != system.bdy.rows()) {
    throw ParameterError("collocation system has inconsistent dimensions");
  }
  require_finite(system.pde, "collocation system");
  require_finite(system.bdy, "collocation system");
}

}  // namespace

LeastSquaresSolution solve_cls(const CollocationSystem& system, Rcond rcond) {
  check_shapes(system);
  SolveDiagnostics diag;
  diag.method = "CLS";
  const Eigen::Index n = system.n_trial();

  if (system.bdy.rows() == 0) {
    diag.method = "LS";
    diag.constraint_free = true;
    const SvdLstsqResult ls = svd_lstsq(system.pde, system.f, rcond);
    diag.rcond = resolve_rcond(rcond, system.pde);
    diag.truncation_threshold = ls.threshold;
    diag.system_rank = ls.rank;
    diag.cond_estimate = condition_of(ls.singular_values);
    return finish(system, ls.solution, diag);
  }

  // One SVD of A_bdy yields both the pseudoinverse and the null space.
  const double bdy_tol = resolve_rcond(rcond, system.bdy);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(system.bdy, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::Index bdy_rank = count_above(sigma, bdy_tol * sigma[0]);
  diag.bdy_rank = bdy_rank;

  const Eigen::VectorXd particular = truncated_apply(svd.matrixU(), sigma, svd.matrixV(), bdy_rank, system.g);
  const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(n - bdy_rank);
  if (null_basis.cols() == 0 || system.pde.rows() == 0) {
    diag.rcond = bdy_tol;
    diag.truncation_threshold = bdy_tol * sigma[0];
    diag.system_rank = bdy_rank;
    diag.cond_estimate = condition_of(sigma.head(bdy_rank));
    return finish(system, particular, diag);
  }

  const Eigen::MatrixXd reduced = system.pde * null_basis;
  const Eigen::VectorXd rhs = system.f - system.pde * particular;
  const SvdLstsqResult inner = svd_lstsq(reduced, rhs, rcond);
  diag.rcond = resolve_rcond(rcond, reduced);
  diag.truncation_threshold = inner.threshold;
  diag.system_rank = inner.rank;
  diag.cond_estimate = condition_of(inner.singular_values);
  return finish(system, particular + null_basis * inner.solution, diag);
}

LeastSquaresSolution solve_wls(const CollocationSystem& system, const WlsWeight& weight, Rcond rcond,
                               WeightConvention convention) {
  if (weight.is_cls()) return solve_cls(system, rcond);
  check_shapes(system);
  if (!(weight.w >= 0.0) || std::isinf(weight.w)) throw ParameterError("solve_wls: weight must be finite and >= 0");
  const double scale = convention == WeightConvention::squared ? std::sqrt(weight.w) : weight.w;
  const Eigen::Index nx = system.pde.rows();
  const Eigen::Index ny = system.bdy.rows();
  Eigen::MatrixXd stacked(nx + ny, system.n_trial());
  stacked << system.pde, scale * system.bdy;
  Eigen::VectorXd rhs(nx + ny);
  rhs << system.f, scale * system.g;

  SolveDiagnostics diag;
  diag.method = "WLS";
  diag.bdy_rank = numerical_rank(system.bdy, rcond);
  const SvdLstsqResult ls = svd_lstsq(stacked, rhs, rcond);
  diag.rcond = resolve_rcond(rcond, stacked);
  diag.truncation_threshold = ls.threshold;
  diag.system_rank = ls.rank;
  diag.cond_estimate = condition_of(ls.singular_values);
  return finish(system, ls.solution, diag);
}

double objective_j(const CollocationSystem& system, double w, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != system.n_trial()) throw ParameterError("objective_j: coefficient length mismatch");
  const double pde_sq = system.pde.rows() ? (system.pde * coefficients - system.f).squaredNorm() : 0.0;
  const double bdy_sq = system.bdy.rows() ? (system.bdy * coefficients - system.g).squaredNorm() : 0.0;
  if (std::isinf(w)) return bdy_sq > 0.0 ? std::numeric_limits<double>::infinity() : std::sqrt(pde_sq);
  return std::sqrt(pde_sq + w * bdy_sq);
}

}  // namespace kansa
