#pragma once

// Error measurement and convergence tabulation for collocation solutions.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kansa/geometry.hpp"
#include "kansa/jet.hpp"
#include "kansa/pde.hpp"
#include "kansa/solvers.hpp"

namespace kansa {

/// Jets of u = sum_j lambda_j Phi(. - t_j) at every point of the set.
std::vector<Jet2> evaluate_solution(const LeastSquaresSolution& solution, const PointSet& points);

/// Same for several coefficient vectors (columns) over one center set;
/// result[k][i] is the jet of expansion k at point i.
std::vector<std::vector<Jet2>> evaluate_expansions(const Kernel& kernel, const PointSet& centers,
                                                   const Eigen::MatrixXd& coefficients, const PointSet& points);

/// Discrete error norms over an evaluation set of n points.
/// RMS values divide the plain l2 sums by sqrt(n).
struct ErrorReport {
  double l2 = 0.0;      // RMS of the value error
  double h2 = 0.0;      // RMS discrete H^2 error, sum over all |alpha| <= 2
  double l2_raw = 0.0;  // plain l2 norm
  double h2_raw = 0.0;
  /// RMS error per derivative, keyed "u", "u_x0", "u_x0x1", ...
  std::map<std::string, double> per_derivative;
  Eigen::Index eval_set_size = 0;
};

/// Norms of an error field given by its jets at the evaluation points.
ErrorReport error_norms(std::span<const Jet2> error_jets);

/// Closed tensor grid of eval_grid_n^d points on the box (boundary included).
PointSet evaluation_grid(const Domain& domain, int eval_grid_n);

/// Errors of `solution` against `exact` on evaluation_grid(domain, eval_grid_n).
ErrorReport error_report(const LeastSquaresSolution& solution, const ManufacturedSolution& exact,
                         int eval_grid_n);

/// Batched error_report: column k of `coefficients` is compared with *exact[k].
std::vector<ErrorReport> error_reports(const Kernel& kernel, const PointSet& centers,
                                       const Eigen::MatrixXd& coefficients,
                                       const std::vector<const ManufacturedSolution*>& exact, int eval_grid_n);

/// Slope of the least-squares line through (log h, log error).
/// Throws DomainError for fewer than two pairs, non-positive entries, or
/// all-equal h.
double fit_rate(std::span<const std::pair<double, double>> pairs);

struct StudyRow {
  std::string problem;
  std::string op;
  int n_z = 0;
  double h_z = 0.0;
  double h_x = 0.0;
  double h_y = 0.0;
  double theta = kThetaInfinity;
  double weight_w = kThetaInfinity;
  double l2_rms = 0.0;
  double h2_rms = 0.0;
  double l2_raw = 0.0;
  double h2_raw = 0.0;
  Eigen::Index bdy_rank = 0;
  double cond_est = 0.0;
  double solve_seconds = 0.0;
  bool ok = true;
  std::string status = "ok";
};

/// Fitted rates for one (problem, operator, theta) series.
struct RateFit {
  std::string problem;
  std::string op;
  double theta = kThetaInfinity;
  std::size_t levels = 0;  // rows used in the fit
  bool valid = false;      // false when fewer than two usable rows
  double l2_rate = 0.0;
  double h2_rate = 0.0;
};

struct ConvergenceStudy {
  std::vector<StudyRow> rows;
  std::vector<RateFit> fitted_rates;

  /// Stable sort by decreasing h_Z.
  void sort_rows();

  /// Fits rates per series against h_Z, dropping the `drop_last` finest
  /// successful levels of each series.
  void fit(int drop_last = 0);

  /// Rows of one series in sorted order.
  std::vector<StudyRow> series(const std::string& problem, const std::string& op, double theta) const;

  const RateFit* rate(const std::string& problem, const std::string& op, double theta) const;
};

/// Column order of write_study_csv.
const std::vector<std::string>& study_csv_columns();

/// One line per row; theta / weight_W are written as "inf" for CLS.
void write_study_csv(std::ostream& out, const ConvergenceStudy& study);
void write_rates_csv(std::ostream& out, const ConvergenceStudy& study);
void write_summary(std::ostream& out, const ConvergenceStudy& study);

std::string format_theta(double theta);

}  // namespace kansa
