// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kansa/experiment.hpp"
#include "kansa/special_functions.hpp"

using namespace kansa;

namespace {

namespace tol {
constexpr double c1_h2_lo = 1.6, c1_h2_hi = 2.6, c1_l2_min = 3.2, c1_seconds = 300.0;
constexpr double c2_band = 0.7;
constexpr double c3_h2_min = 1.6, c3_factor = 10.0;
constexpr long c4_exact = 80, c4_lo = 85, c4_hi = 115;
constexpr double c5_factor = 20.0, c5_local_rate = 1.5;
constexpr double c6_coef = 1e-5, c6_residual = 1e-6;
constexpr double c7_oracle = 1e-12, c7_recurrence = 1e-10, c7_jet = 1e-5;
constexpr double c8_ratio = 1e3, c8_mq_rate = 6.0;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
  std::printf("%s  criterion %d  %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.problems = {"trig"};
  c.operators = {"laplace"};
  c.m = 4;
  c.trial = TrialSpace::z_union_y;
  c.n_z = {121, 256, 441, 676};
  c.delta_interior = 0.5;
  c.delta_boundary = 0.5;
  c.eval_grid_n = 100;
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double local_rate(const std::vector<StudyRow>& s, double StudyRow::*field) {
  const auto& a = s[s.size() - 2];
  const auto& b = s.back();
  return std::log(a.*field / b.*field) / std::log(a.h_z / b.h_z);
}

PointSet full_grid(int n) {
  auto [in, bd] = regular_grid(Domain::symmetric_box(2), n);
  PointSet z = in;
  z.points.conservativeResize(in.size() + bd.size(), 2);
  z.points.bottomRows(bd.size()) = bd.points;
  z.location = Location::mixed;
  return z;
}

// ---------------------------------------------------------------------------

ConvergenceStudy c1_study;  // reused by criteria 2, 3 and 5

Outcome criterion1() {
  auto c = base_config();
  c.thetas = {kThetaInfinity, 0.5, 1.0, 2.0};
  const auto t0 = std::chrono::steady_clock::now();
  c1_study = run_experiment(c);
  const double elapsed = seconds_since(t0);
  const RateFit* fit = c1_study.rate("trig", "laplace", kThetaInfinity);
  Outcome o;
  if (!fit || !fit->valid) return {false, "no CLS rate fitted"};
  o.pass = fit->h2_rate >= tol::c1_h2_lo && fit->h2_rate <= tol::c1_h2_hi && fit->l2_rate >= tol::c1_l2_min &&
           elapsed <= tol::c1_seconds;
  o.detail = "H2 rate " + fmt("%.3f", fit->h2_rate) + " in [1.6, 2.6]; L2 rate " + fmt("%.3f", fit->l2_rate) +
             " >= 3.2; sweep incl. 3 WLS thetas " + fmt("%.1f", elapsed) + " s <= 300 s";
  return o;
}

Outcome criterion2() {
  std::vector<double> rates;
  std::ostringstream detail;
  bool band_ok = true;
  for (int m : {3, 4, 5}) {
    auto c = base_config();
    c.m = m;
    c.n_z = {121, 256, 441};
    auto study = run_experiment(c);
    double rate = study.rate("trig", "laplace", kThetaInfinity)->h2_rate;
    bool ok = std::abs(rate - (m - 2)) <= tol::c2_band;
    std::string note;
    if (!ok) {
      study.fit(1);
      const RateFit* dropped = study.rate("trig", "laplace", kThetaInfinity);
      if (dropped->valid) {
        note = " (all levels " + fmt("%.3f", rate) + ", drop-last 1)";
        rate = dropped->h2_rate;
        ok = std::abs(rate - (m - 2)) <= tol::c2_band;
      }
    }
    band_ok = band_ok && ok;
    rates.push_back(rate);
    detail << "m=" << m << " H2 " << fmt("%.3f", rate) << note << " vs " << m - 2 << "; ";
  }
  const bool monotone = rates[0] < rates[1] && rates[1] < rates[2];
  detail << (monotone ? "increasing in m" : "NOT increasing in m");
  return {band_ok && monotone, detail.str()};
}

Outcome criterion3() {
  Outcome o;
  std::ostringstream detail;
  for (double theta : {0.5, 1.0, 2.0}) {
    const RateFit* fit = c1_study.rate("trig", "laplace", theta);
    const double r = fit && fit->valid ? fit->h2_rate : NAN;
    o.pass = o.pass && r >= tol::c3_h2_min;
    detail << "theta=" << theta << " H2 " << fmt("%.3f", r) << "; ";
  }
  const auto cls = c1_study.series("trig", "laplace", kThetaInfinity);
  const auto one = c1_study.series("trig", "laplace", 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < cls.size() && i < one.size(); ++i) {
    worst = std::max({worst, one[i].l2_rms / cls[i].l2_rms, cls[i].l2_rms / one[i].l2_rms,
                      one[i].h2_rms / cls[i].h2_rms, cls[i].h2_rms / one[i].h2_rms});
  }
  o.pass = o.pass && cls.size() == 4 && one.size() == 4 && worst <= tol::c3_factor;
  detail << "max theta=1 vs CLS error ratio (L2 and H2) " << fmt("%.2f", worst) << " <= 10";
  o.detail = detail.str();
  return o;
}

Outcome criterion4() {
  const auto k = Kernel::matern_sobolev(4, 2);
  const auto z = full_grid(21);
  std::vector<long> ranks, loose;
  for (int side : {21, 41, 62, 83}) {  // n_Y = 80, 160, 244, 328
    const auto a = boundary_matrix(k, boundary_grid(Domain::symmetric_box(2), side), z);
    ranks.push_back(numerical_rank(a));
    loose.push_back(numerical_rank(a, 1e-12));
  }
  bool pass = ranks[0] == tol::c4_exact;
  for (int i = 1; i < 4; ++i) pass = pass && ranks[i] >= tol::c4_lo && ranks[i] <= tol::c4_hi;
  std::ostringstream detail;
  detail << "ranks (default rcond) n_Y=80/160/244/328: " << ranks[0] << "/" << ranks[1] << "/" << ranks[2] << "/"
         << ranks[3] << "; need 80 then [85, 115]; at rcond=1e-12: " << loose[0] << "/" << loose[1] << "/"
         << loose[2] << "/" << loose[3];
  return {pass, detail.str()};
}

Outcome criterion5() {
  auto c = base_config();
  c.trial = TrialSpace::z_only;
  const auto zonly = run_experiment(c).series("trig", "laplace", kThetaInfinity);
  const auto zy = c1_study.series("trig", "laplace", kThetaInfinity);
  if (zonly.size() != zy.size() || zonly.size() < 2) return {false, "missing levels"};
  const double ratio_l2 = zonly.back().l2_rms / zy.back().l2_rms;
  const double ratio_h2 = zonly.back().h2_rms / zy.back().h2_rms;
  const double rate_l2 = local_rate(zonly, &StudyRow::l2_rms);
  const double rate_h2 = local_rate(zonly, &StudyRow::h2_rms);
  const bool pass = ratio_l2 <= tol::c5_factor && ratio_h2 <= tol::c5_factor && rate_l2 >= tol::c5_local_rate &&
                    rate_h2 >= tol::c5_local_rate;
  return {pass, "n_Z=676 U_Z/U_ZuY error ratio L2 " + fmt("%.2f", ratio_l2) + ", H2 " + fmt("%.2f", ratio_h2) +
                    " <= 20; U_Z last-two-level rate L2 " + fmt("%.2f", rate_l2) + ", H2 " + fmt("%.2f", rate_h2) +
                    " >= 1.5"};
}

Outcome criterion6() {
  const auto k = Kernel::matern_sobolev(4, 2);
  const auto z = full_grid(5);
  double worst_coef = 0.0, worst_res = 0.0;
  for (const auto& op : builtin_operator_names()) {
    BoundaryValueProblem p{builtin_operator(op), Domain::symmetric_box(2), kernel_translate_solution(k, z.point(0))};
    auto [x, y] = refined_collocation(p.domain, 5, 2, 2);
    for (auto trial : {TrialSpace::z_only, TrialSpace::z_union_y}) {
      const auto sys = assemble(p, k, x, y, trial, z);
      Eigen::VectorXd e1 = Eigen::VectorXd::Zero(sys.n_trial());
      e1[0] = 1.0;
      const double hx = density_stats(x, 33).h, hy = density_stats(y, 33).h;
      for (const auto& sol : {solve_cls(sys), solve_wls(sys, wls_weight(1.0, hx, hy, 2))}) {
        worst_coef = std::max(worst_coef, (sol.coefficients - e1).cwiseAbs().maxCoeff());
        worst_res = std::max(worst_res, sol.diagnostics.pde_residual / sys.f.norm());
      }
    }
  }
  return {worst_coef <= tol::c6_coef && worst_res <= tol::c6_residual,
          "CLS and WLS(1), 4 operators, both trial spaces: max |lambda - e1| " + fmt("%.2e", worst_coef) +
              " <= 1e-5; max PDE residual / |f| " + fmt("%.2e", worst_res) + " <= 1e-6"};
}

struct OracleRow {
  double order, x, value;
};
const OracleRow kOracle[] = {
#include "oracles/bessel_k_table.inc"
};

Outcome criterion7() {
  std::ostringstream detail;
  bool pass = true;
  auto check = [&](const char* label, bool ok, const std::string& what) {
    pass = pass && ok;
    detail << label << (ok ? " ok" : " FAILED") << " (" << what << "); ";
  };

  double oracle = 0.0;
  for (const auto& r : kOracle) oracle = std::max(oracle, std::abs(bessel_k(r.order, r.x) - r.value) / r.value);
  check("bessel oracle", oracle <= tol::c7_oracle, fmt("%.1e", oracle));

  double rec = 0.0;
  for (int nu = 1; nu < 30; ++nu) {
    for (double x = 0.01; x <= 30.0; x *= 1.37) {
      const double lhs = bessel_k(nu + 1, x);
      if (!std::isfinite(lhs)) continue;
      rec = std::max(rec, std::abs(lhs - bessel_k(nu - 1, x) - 2.0 * nu / x * bessel_k(nu, x)) / lhs);
    }
  }
  check("recurrence", rec <= tol::c7_recurrence, fmt("%.1e", rec));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double jet_err = 0.0;
  for (const auto& k : {Kernel::matern_sobolev(4, 2), Kernel::gaussian(2), Kernel::multiquadric(2)}) {
    for (int n = 0; n < 50;) {
      const Eigen::Vector2d x(u(rng), u(rng)), z(u(rng), u(rng));
      const double r = (x - z).norm();
      if (r < 0.05 || r > 3.0) continue;
      ++n;
      const auto jet = kernel_jet(k, x, z);
      const double s = 1e-5;
      for (int a = 0; a < 2; ++a) {
        Eigen::Vector2d p = x, m = x;
        p[a] += s;
        m[a] -= s;
        const double g = (kernel_value(k, p, z) - kernel_value(k, m, z)) / (2 * s);
        const Eigen::Vector2d h = (kernel_jet(k, p, z).gradient - kernel_jet(k, m, z).gradient) / (2 * s);
        jet_err = std::max(jet_err, std::abs(g - jet.gradient[a]) / std::max(1e-3, std::abs(jet.gradient[a])));
        jet_err = std::max(jet_err, (h - jet.hessian.col(a)).cwiseAbs().maxCoeff() /
                                        std::max(1e-3, jet.hessian.col(a).cwiseAbs().maxCoeff()));
      }
    }
  }
  check("kernel jets vs FD", jet_err <= tol::c7_jet, fmt("%.1e", jet_err));

  const auto pts = halton_points(Domain::symmetric_box(2), 50, 2);
  double min_eig = INFINITY;
  for (const auto& k : {Kernel::matern_sobolev(4, 2), Kernel::gaussian(2, 3.0)}) {
    Eigen::MatrixXd a(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) a(i, j) = kernel_value(k, pts.point(i), pts.point(j));
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff());
  }
  check("SPD", min_eig > 0.0, "min eig " + fmt("%.1e", min_eig));

  auto c = base_config();
  c.n_z = {36, 64};
  c.eval_grid_n = 30;
  c.record_timing = false;
  c.thetas = {kThetaInfinity, 1.0};
  const auto s1 = run_experiment(c);
  const auto s2 = run_experiment(c);
  std::ostringstream a, b;
  write_study_csv(a, s1);
  write_study_csv(b, s2);
  check("determinism", a.str() == b.str(), "byte-identical CSV");

  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const auto p = make_problem("trig", "laplace");
  auto [x, y] = refined_collocation(p.domain, 6, 2, 2);
  const auto sys = assemble(p, Kernel::matern_sobolev(4, 2), x, y, TrialSpace::z_only, full_grid(6));
  bool mono = true;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd lam(sys.n_trial());
    for (auto& v : lam) v = coeff(rng);
    const double hy = 0.05 + 0.9 * (trial / 20.0), hx = hy * (0.2 + 0.8 * trial / 20.0);
    double prev = 0.0;
    for (double theta : {2.0, 2.5, 3.0, 4.0, 6.0}) {
      const double j = objective_j(sys, wls_weight(theta, hx, hy, 2).w, lam);
      mono = mono && j >= prev;
      prev = j;
    }
  }
  check("J monotone in theta", mono, "20 random u");

  const std::vector<std::pair<double, double>> p2{{0.2, 4e-2}, {0.1, 1e-2}, {0.05, 2.5e-3}};
  const std::vector<std::pair<double, double>> p4{{0.1, 1e-4}, {0.05, 6.25e-6}};
  const double r2 = fit_rate(p2), r4 = fit_rate(p4);
  check("fit_rate", std::abs(r2 - 2.0) < 1e-12 && std::abs(r4 - 4.0) < 1e-12,
        fmt("%.15g", r2) + ", " + fmt("%.15g", r4));

  std::string d = detail.str();
  d.resize(d.size() - 2);
  return {pass, d};
}

Outcome criterion8() {
  auto g = preset("example4_gaussian");
  g.eval_grid_n = 100;
  const auto gs = run_experiment(g);
  const auto zoom = gs.series("peaks1", "laplace", kThetaInfinity);
  const auto full = gs.series("peaks3", "laplace", kThetaInfinity);
  if (zoom.empty() || full.empty()) return {false, "missing Gaussian rows"};
  const double ratio = full[0].l2_rms / zoom[0].l2_rms;

  ExperimentConfig mq;
  mq.problems = {"peaks3"};
  mq.kernel_family = KernelFamily::multiquadric;
  mq.epsilon = 1.0;
  mq.trial = TrialSpace::z_only;
  mq.n_z = {121, 256, 441, 676};
  const auto ms = run_experiment(mq);
  const RateFit* fit = ms.rate("peaks3", "laplace", kThetaInfinity);
  const double rate = fit && fit->valid ? fit->l2_rate : NAN;
  return {ratio >= tol::c8_ratio && rate >= tol::c8_mq_rate,
          "Gaussian n_Z=1296: peaks1 L2 " + fmt("%.2e", zoom[0].l2_rms) + ", peaks3 L2 " +
              fmt("%.2e", full[0].l2_rms) + ", ratio " + fmt("%.2e", ratio) + " >= 1e3; MQ peaks3 L2 rate " +
              fmt("%.2f", rate) + " >= 6"};
}

void run(int id, const char* name, const std::function<Outcome()>& f) {
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, name, o);
}

}  // namespace

int main() {
  run(1, "cls_optimal_rate", criterion1);
  run(2, "smoothness_scaling", criterion2);
  run(3, "wls_theta_family", criterion3);
  run(4, "boundary_rank_saturation", criterion4);
  run(5, "small_trial_space_lag", criterion5);
  run(6, "exact_recovery", criterion6);
  run(7, "invariant_suites", criterion7);
  run(8, "gaussian_mq_qualitative", criterion8);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
