#include "kansa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kansa/errors.hpp"

namespace kansa {

std::vector<std::vector<Jet2>> evaluate_expansions(const Kernel& kernel, const PointSet& centers,
                                                   const Eigen::MatrixXd& coefficients, const PointSet& points) {
  const int d = kernel.d;
  const Eigen::Index n_centers = centers.size();
  const Eigen::Index n_sets = coefficients.cols();
  if (coefficients.rows() != n_centers) {
    throw ParameterError("evaluate_solution: coefficient count does not match trial centers");
  }
  if (points.size() > 0 && points.dimension() != d) throw ParameterError("evaluate_solution: dimension mismatch");
  if (n_centers > 0 && centers.dimension() != d) throw ParameterError("evaluate_solution: center dimension mismatch");

  std::vector<std::vector<Jet2>> jets(static_cast<std::size_t>(n_sets));
  for (auto& column : jets) column.reserve(static_cast<std::size_t>(points.size()));
  // Per point and coefficient set: value, d gradient entries, d*d Hessian entries, diagonal sum.
  const Eigen::Index stride = 2 + d + d * d;
  std::vector<double> acc(static_cast<std::size_t>(stride * n_sets));
  Eigen::VectorXd delta(d);
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (Eigen::Index j = 0; j < n_centers; ++j) {
      delta = points.points.row(i) - centers.points.row(j);
      const RadialJet radial = radial_jet(kernel, delta.norm());
      for (Eigen::Index k = 0; k < n_sets; ++k) {
        const double lambda = coefficients(j, k);
        if (lambda == 0.0) continue;
        double* a = acc.data() + k * stride;
        a[0] += lambda * radial.value;
        const double slope = lambda * radial.slope;
        const double outer = lambda * radial.outer;
        for (int p = 0; p < d; ++p) {
          a[1 + p] += slope * delta[p];
          for (int q = 0; q < d; ++q) a[1 + d + p * d + q] += outer * delta[p] * delta[q];
        }
        a[stride - 1] += lambda * radial.diag;
      }
    }
    for (Eigen::Index k = 0; k < n_sets; ++k) {
      const double* a = acc.data() + k * stride;
      Jet2 jet = Jet2::zero(d);
      jet.value = a[0];
      for (int p = 0; p < d; ++p) {
        jet.gradient[p] = a[1 + p];
        for (int q = 0; q < d; ++q) jet.hessian(p, q) = a[1 + d + p * d + q];
        jet.hessian(p, p) += a[stride - 1];
      }
      jets[static_cast<std::size_t>(k)].push_back(std::move(jet));
    }
  }
  return jets;
}

std::vector<Jet2> evaluate_solution(const LeastSquaresSolution& solution, const PointSet& points) {
  return evaluate_expansions(solution.kernel, solution.trial_centers, solution.coefficients, points).front();
}

ErrorReport error_norms(std::span<const Jet2> error_jets) {
  ErrorReport report;
  report.eval_set_size = static_cast<Eigen::Index>(error_jets.size());
  if (error_jets.empty()) return report;
  const int d = static_cast<int>(error_jets.front().gradient.size());

  std::vector<std::pair<std::string, double>> sums;
  double value_sq = 0.0;
  for (const Jet2& e : error_jets) value_sq += e.value * e.value;
  sums.emplace_back("u", value_sq);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (const Jet2& e : error_jets) s += e.gradient[i] * e.gradient[i];
    sums.emplace_back("u_x" + std::to_string(i), s);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      double s = 0.0;
      for (const Jet2& e : error_jets) s += e.hessian(i, j) * e.hessian(i, j);
      sums.emplace_back("u_x" + std::to_string(i) + "x" + std::to_string(j), s);
    }
  }

  const double n = static_cast<double>(error_jets.size());
  double total = 0.0;
  for (const auto& [key, s] : sums) {
    total += s;
    report.per_derivative[key] = std::sqrt(s / n);
  }
  report.l2_raw = std::sqrt(value_sq);
  report.h2_raw = std::sqrt(total);
  report.l2 = report.l2_raw / std::sqrt(n);
  report.h2 = report.h2_raw / std::sqrt(n);
  return report;
}

PointSet evaluation_grid(const Domain& domain, int eval_grid_n) {
  auto [interior, boundary] = regular_grid(domain, eval_grid_n);
  PointSet grid;
  grid.domain = domain;
  grid.location = Location::mixed;
  grid.points.resize(interior.size() + boundary.size(), domain.dimension());
  grid.points << interior.points, boundary.points;
  return grid;
}

std::vector<ErrorReport> error_reports(const Kernel& kernel, const PointSet& centers,
                                       const Eigen::MatrixXd& coefficients,
                                       const std::vector<const ManufacturedSolution*>& exact, int eval_grid_n) {
  if (exact.size() != static_cast<std::size_t>(coefficients.cols())) {
    throw ParameterError("error_reports: one exact solution per coefficient column required");
  }
  const PointSet grid = evaluation_grid(centers.domain, eval_grid_n);
  std::vector<std::vector<Jet2>> errors = evaluate_expansions(kernel, centers, coefficients, grid);
  // Consecutive columns usually share an exact solution; reuse its jet.
  const ManufacturedSolution* cached_for = nullptr;
  Jet2 truth;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    cached_for = nullptr;
    const Eigen::VectorXd p = grid.point(i);
    for (std::size_t k = 0; k < exact.size(); ++k) {
      if (exact[k] != cached_for) {
        truth = solution_jet(*exact[k], p);
        cached_for = exact[k];
      }
      Jet2& e = errors[k][static_cast<std::size_t>(i)];
      e.value -= truth.value;
      e.gradient -= truth.gradient;
      e.hessian -= truth.hessian;
    }
  }
  std::vector<ErrorReport> reports;
  reports.reserve(errors.size());
  for (const auto& column : errors) reports.push_back(error_norms(column));
  return reports;
}

ErrorReport error_report(const LeastSquaresSolution& solution, const ManufacturedSolution& exact,
                         int eval_grid_n) {
  return error_reports(solution.kernel, solution.trial_centers, solution.coefficients, {&exact}, eval_grid_n).front();
}

double fit_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw DomainError("fit_rate: need at least two (h, error) pairs");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [h, err] : pairs) {
    if (!(h > 0.0) || !(err > 0.0)) throw DomainError("fit_rate: h and error must be positive");
    mean_x += std::log(h);
    mean_y += std::log(err);
  }
  const double n = static_cast<double>(pairs.size());
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [h, err] : pairs) {
    const double dx = std::log(h) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - mean_y);
  }
  if (sxx == 0.0) throw DomainError("fit_rate: all h values are equal");
  return sxy / sxx;
}

void ConvergenceStudy::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) { return a.h_z > b.h_z; });
}

namespace {

bool same_series(const StudyRow& row, const std::string& problem, const std::string& op, double theta) {
  return row.problem == problem && row.op == op && (row.theta == theta || (std::isinf(row.theta) && std::isinf(theta)));
}

}  // namespace

std::vector<StudyRow> ConvergenceStudy::series(const std::string& problem, const std::string& op,
                                               double theta) const {
  std::vector<StudyRow> out;
  for (const StudyRow& row : rows) {
    if (same_series(row, problem, op, theta)) out.push_back(row);
  }
  return out;
}

const RateFit* ConvergenceStudy::rate(const std::string& problem, const std::string& op, double theta) const {
  for (const RateFit& fit : fitted_rates) {
    if (fit.problem == problem && fit.op == op && (fit.theta == theta || (std::isinf(fit.theta) && std::isinf(theta)))) {
      return &fit;
    }
  }
  return nullptr;
}

void ConvergenceStudy::fit(int drop_last) {
  fitted_rates.clear();
  for (const StudyRow& row : rows) {
    if (rate(row.problem, row.op, row.theta)) continue;
    RateFit fit;
    fit.problem = row.problem;
    fit.op = row.op;
    fit.theta = row.theta;
    std::vector<StudyRow> usable;
    for (const StudyRow& r : series(row.problem, row.op, row.theta)) {
      if (r.ok && r.l2_rms > 0.0 && r.h2_rms > 0.0) usable.push_back(r);
    }
    std::stable_sort(usable.begin(), usable.end(), [](const StudyRow& a, const StudyRow& b) { return a.h_z > b.h_z; });
    const std::size_t keep = usable.size() > static_cast<std::size_t>(std::max(drop_last, 0))
                                 ? usable.size() - static_cast<std::size_t>(std::max(drop_last, 0))
                                 : 0;
    usable.resize(keep);
    fit.levels = usable.size();
    if (usable.size() >= 2) {
      std::vector<std::pair<double, double>> l2;
      std::vector<std::pair<double, double>> h2;
      for (const StudyRow& r : usable) {
        l2.emplace_back(r.h_z, r.l2_rms);
        h2.emplace_back(r.h_z, r.h2_rms);
      }
      try {
        fit.l2_rate = fit_rate(l2);
        fit.h2_rate = fit_rate(h2);
        fit.valid = true;
      } catch (const DomainError&) {
        fit.valid = false;
      }
    }
    fitted_rates.push_back(fit);
  }
}

std::string format_theta(double theta) {
  if (std::isinf(theta)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", theta);
  return buf;
}

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& study_csv_columns() {
  static const std::vector<std::string> columns{
      "n_Z",     "h_Z",    "h_X",     "h_Y",      "theta",  "weight_W", "l2_rms",
      "h2_rms",  "bdy_rank", "cond_est", "solve_seconds", "problem", "operator", "l2_raw",
      "h2_raw",  "status"};
  return columns;
}

void write_study_csv(std::ostream& out, const ConvergenceStudy& study) {
  const auto& columns = study_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const StudyRow& r : study.rows) {
    out << r.n_z << ',' << num(r.h_z) << ',' << num(r.h_x) << ',' << num(r.h_y) << ',' << format_theta(r.theta)
        << ',' << num(r.weight_w) << ',' << num(r.l2_rms) << ',' << num(r.h2_rms) << ',' << r.bdy_rank << ','
        << num(r.cond_est) << ',' << num(r.solve_seconds) << ',' << csv_escape(r.problem) << ','
        << csv_escape(r.op) << ',' << num(r.l2_raw) << ',' << num(r.h2_raw) << ',' << csv_escape(r.status)
        << '\n';
  }
}

void write_rates_csv(std::ostream& out, const ConvergenceStudy& study) {
  out << "problem,operator,theta,levels,l2_rate,h2_rate\n";
  for (const RateFit& f : study.fitted_rates) {
    out << csv_escape(f.problem) << ',' << csv_escape(f.op) << ',' << format_theta(f.theta) << ',' << f.levels << ','
        << (f.valid ? num(f.l2_rate) : "") << ',' << (f.valid ? num(f.h2_rate) : "") << '\n';
  }
}

void write_summary(std::ostream& out, const ConvergenceStudy& study) {
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-13s %6s %10s %8s %11s %11s %6s %10s  %s\n", "problem", "operator", "n_Z",
                "h_Z", "theta", "L2 (rms)", "H2 (rms)", "rank", "cond", "status");
  out << line;
  for (const StudyRow& r : study.rows) {
    std::snprintf(line, sizeof line, "%-8s %-13s %6d %10.4g %8s %11.3e %11.3e %6ld %10.2e  %s\n", r.problem.c_str(),
                  r.op.c_str(), r.n_z, r.h_z, format_theta(r.theta).c_str(), r.l2_rms, r.h2_rms,
                  static_cast<long>(r.bdy_rank), r.cond_est, r.status.c_str());
    out << line;
  }
  out << "\nfitted rates (least squares over log h_Z):\n";
  for (const RateFit& f : study.fitted_rates) {
    if (f.valid) {
      std::snprintf(line, sizeof line, "  %-8s %-13s theta=%-6s levels=%zu  L2 %.2f  H2 %.2f\n", f.problem.c_str(),
                    f.op.c_str(), format_theta(f.theta).c_str(), f.levels, f.l2_rate, f.h2_rate);
    } else {
      std::snprintf(line, sizeof line, "  %-8s %-13s theta=%-6s levels=%zu  (rates need >= 2 levels)\n",
                    f.problem.c_str(), f.op.c_str(), format_theta(f.theta).c_str(), f.levels);
    }
    out << line;
  }
}

}  // namespace kansa
