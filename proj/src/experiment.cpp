#include "kansa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kansa/errors.hpp"
#include "kansa/geometry.hpp"
#include "kansa/pde.hpp"

namespace kansa {

using nlohmann::json;

namespace {

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string delta_to_string(double delta) {
  const long k = std::lround(1.0 / delta);
  if (k == 1) return "1";
  return "1/" + std::to_string(k);
}

}  // namespace

int side_from_count(int n_z) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_z))));
  if (n_z < 4 || side * side != n_z) {
    throw ConfigError("n_Z", std::to_string(n_z) + " is not a perfect square >= 4");
  }
  return side;
}

void ExperimentConfig::validate() const {
  if (problems.empty()) throw ConfigError("problems", "list is empty");
  for (const auto& p : problems) {
    if (!contains(builtin_solution_names(), p)) throw ConfigError("problems", "unknown exact solution '" + p + "'");
  }
  if (operators.empty()) throw ConfigError("operators", "list is empty");
  for (const auto& o : operators) {
    if (!contains(builtin_operator_names(), o)) throw ConfigError("operators", "unknown operator '" + o + "'");
  }
  try {
    Kernel{kernel_family, m, 2, epsilon}.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("kernel", e.what());
  }
  if (thetas.empty()) throw ConfigError("solver.thetas", "list is empty");
  for (double t : thetas) {
    if (!(t >= 0.0)) throw ConfigError("solver.thetas", "theta must be >= 0 or inf");
  }
  if (n_z.empty()) throw ConfigError("n_Z", "list is empty");
  for (int n : n_z) side_from_count(n);
  try {
    refinement_from_delta(delta_interior, 3);
  } catch (const ParameterError&) {
    throw ConfigError("delta_interior", "must be 1, 1/2 or 1/3");
  }
  try {
    refinement_from_delta(delta_boundary, 2);
  } catch (const ParameterError&) {
    throw ConfigError("delta_boundary", "must be 1 or 1/2");
  }
  if (x_source == XSource::halton && !n_x.empty() && n_x.size() != n_z.size()) {
    throw ConfigError("n_X", "needs one entry per n_Z value");
  }
  for (int n : n_x) {
    if (n < 1) throw ConfigError("n_X", "counts must be positive");
  }
  if (eval_grid_n < 2) throw ConfigError("eval_grid_n", "must be >= 2");
  if (rcond && !(*rcond >= 0.0)) throw ConfigError("solver.rcond", "must be >= 0");
  if (fit_drop_last < 0) throw ConfigError("fit_drop_last", "must be >= 0");
  if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  if (probe_resolution != 0 && probe_resolution < 2) throw ConfigError("probe_resolution", "must be 0 (auto) or >= 2");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

double parse_theta(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Inf" || s == "CLS") return kThetaInfinity;
    try {
      std::size_t used = 0;
      const double value = std::stod(s, &used);
      if (used == s.size()) return value;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("solver.thetas", "entries must be numbers or \"inf\"");
}

double parse_delta(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "1") return 1.0;
    if (s.rfind("1/", 0) == 0) {
      try {
        return 1.0 / std::stod(s.substr(2));
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError(field, "expected a number or a string like \"1/2\"");
}

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

template <class T>
T get_field(const json& object, const std::string& key, const std::string& field) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("invalid value: ") + e.what());
  }
}

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw ConfigError(field, "expected a string or list of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(field, "expected strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "top level must be an object");
  reject_unknown(doc,
                 {"name", "problems", "operators", "kernel", "trial_space", "solver", "n_Z", "delta_interior",
                  "delta_boundary", "x_source", "n_X", "eval_grid_n", "output_dir", "seed", "fit_drop_last", "jobs",
                  "record_timing", "probe_resolution", "dump_matrices"},
                 "");
  ExperimentConfig c;
  if (doc.contains("name")) c.name = get_field<std::string>(doc, "name", "name");
  if (doc.contains("problems")) c.problems = string_list(doc["problems"], "problems");
  if (doc.contains("operators")) c.operators = string_list(doc["operators"], "operators");
  if (doc.contains("kernel")) {
    const json& k = doc["kernel"];
    if (!k.is_object()) throw ConfigError("kernel", "expected an object");
    reject_unknown(k, {"family", "m", "epsilon"}, "kernel.");
    if (k.contains("family")) {
      try {
        c.kernel_family = kernel_family_from_string(get_field<std::string>(k, "family", "kernel.family"));
      } catch (const ParameterError& e) {
        throw ConfigError("kernel.family", e.what());
      }
    }
    if (k.contains("m")) c.m = get_field<int>(k, "m", "kernel.m");
    if (k.contains("epsilon")) c.epsilon = get_field<double>(k, "epsilon", "kernel.epsilon");
  }
  if (doc.contains("trial_space")) {
    try {
      c.trial = trial_space_from_string(get_field<std::string>(doc, "trial_space", "trial_space"));
    } catch (const ParameterError& e) {
      throw ConfigError("trial_space", e.what());
    }
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) throw ConfigError("solver", "expected an object");
    reject_unknown(s, {"thetas", "rcond", "weight_convention"}, "solver.");
    if (s.contains("thetas")) {
      const json& t = s["thetas"];
      c.thetas.clear();
      if (t.is_array()) {
        for (const auto& e : t) c.thetas.push_back(parse_theta(e));
      } else {
        c.thetas.push_back(parse_theta(t));
      }
    }
    if (s.contains("rcond") && !s["rcond"].is_null()) c.rcond = get_field<double>(s, "rcond", "solver.rcond");
    if (s.contains("weight_convention")) {
      try {
        c.weight_convention =
            weight_convention_from_string(get_field<std::string>(s, "weight_convention", "solver.weight_convention"));
      } catch (const ParameterError& e) {
        throw ConfigError("solver.weight_convention", e.what());
      }
    }
  }
  if (doc.contains("n_Z")) c.n_z = get_field<std::vector<int>>(doc, "n_Z", "n_Z");
  if (doc.contains("delta_interior")) c.delta_interior = parse_delta(doc["delta_interior"], "delta_interior");
  if (doc.contains("delta_boundary")) c.delta_boundary = parse_delta(doc["delta_boundary"], "delta_boundary");
  if (doc.contains("x_source")) {
    const auto s = get_field<std::string>(doc, "x_source", "x_source");
    if (s == "regular") {
      c.x_source = XSource::regular;
    } else if (s == "halton") {
      c.x_source = XSource::halton;
    } else {
      throw ConfigError("x_source", "expected \"regular\" or \"halton\"");
    }
  }
  if (doc.contains("n_X")) c.n_x = get_field<std::vector<int>>(doc, "n_X", "n_X");
  if (doc.contains("eval_grid_n")) c.eval_grid_n = get_field<int>(doc, "eval_grid_n", "eval_grid_n");
  if (doc.contains("output_dir")) c.output_dir = get_field<std::string>(doc, "output_dir", "output_dir");
  if (doc.contains("seed")) c.seed = get_field<std::uint64_t>(doc, "seed", "seed");
  if (doc.contains("fit_drop_last")) c.fit_drop_last = get_field<int>(doc, "fit_drop_last", "fit_drop_last");
  if (doc.contains("jobs")) c.jobs = get_field<int>(doc, "jobs", "jobs");
  if (doc.contains("record_timing")) c.record_timing = get_field<bool>(doc, "record_timing", "record_timing");
  if (doc.contains("probe_resolution")) {
    c.probe_resolution = get_field<int>(doc, "probe_resolution", "probe_resolution");
  }
  if (doc.contains("dump_matrices")) c.dump_matrices = get_field<bool>(doc, "dump_matrices", "dump_matrices");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["problems"] = c.problems;
  doc["operators"] = c.operators;
  doc["kernel"] = {{"family", to_string(c.kernel_family)}, {"m", c.m}, {"epsilon", c.epsilon}};
  doc["trial_space"] = to_string(c.trial);
  json thetas = json::array();
  for (double t : c.thetas) {
    if (std::isinf(t)) {
      thetas.push_back("inf");
    } else {
      thetas.push_back(t);
    }
  }
  doc["solver"] = {{"thetas", thetas},
                   {"rcond", c.rcond ? json(*c.rcond) : json(nullptr)},
                   {"weight_convention", to_string(c.weight_convention)}};
  doc["n_Z"] = c.n_z;
  doc["delta_interior"] = delta_to_string(c.delta_interior);
  doc["delta_boundary"] = delta_to_string(c.delta_boundary);
  doc["x_source"] = c.x_source == XSource::regular ? "regular" : "halton";
  doc["n_X"] = c.n_x;
  doc["eval_grid_n"] = c.eval_grid_n;
  doc["output_dir"] = c.output_dir;
  doc["seed"] = c.seed;
  doc["fit_drop_last"] = c.fit_drop_last;
  doc["jobs"] = c.jobs;
  doc["record_timing"] = c.record_timing;
  doc["probe_resolution"] = c.probe_resolution;
  doc["dump_matrices"] = c.dump_matrices;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Presets

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"example1",          "example2",          "example3",
                                              "example3_scattered", "example4_gaussian", "example4_mq"};
  return names;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.n_z = {121, 256, 441, 676, 961, 1296};
  c.delta_interior = 0.5;
  c.delta_boundary = 0.5;
  c.kernel_family = KernelFamily::matern_sobolev;
  c.m = 4;
  if (name == "example1") {
    c.problems = {"trig"};
    c.trial = TrialSpace::z_union_y;
    c.thetas = {kThetaInfinity};
  } else if (name == "example2") {
    c.problems = {"trig"};
    c.trial = TrialSpace::z_only;
    c.thetas = {kThetaInfinity};
  } else if (name == "example3") {
    c.problems = {"trig", "peaks3"};
    c.trial = TrialSpace::z_union_y;
    c.thetas = {kThetaInfinity, 0.0, 0.5, 1.0, 2.0};
  } else if (name == "example3_scattered") {
    c.problems = {"peaks3"};
    c.operators = {"convdiff", "helmholtz_x2", "helmholtz_x"};
    c.trial = TrialSpace::z_union_y;
    c.thetas = {kThetaInfinity, 0.0, 0.5, 1.0, 2.0};
    c.x_source = XSource::halton;
  } else if (name == "example4_gaussian") {
    c.problems = {"peaks1", "peaks3"};
    c.kernel_family = KernelFamily::gaussian;
    c.epsilon = 1.0;
    c.trial = TrialSpace::z_only;
    c.thetas = {kThetaInfinity};
    c.n_z = {1296};
  } else if (name == "example4_mq") {
    c.problems = {"peaks1", "peaks3"};
    c.kernel_family = KernelFamily::multiquadric;
    c.epsilon = 1.0;
    c.trial = TrialSpace::z_only;
    c.thetas = {kThetaInfinity, 0.5, 1.0};
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

PointSet merge(const PointSet& a, const PointSet& b, Location location) {
  PointSet out;
  out.domain = a.domain;
  out.location = location;
  out.points.resize(a.size() + b.size(), a.domain.dimension());
  out.points << a.points, b.points;
  return out;
}

struct CellPoints {
  PointSet z;
  PointSet x;
  PointSet y;
  double h_z = 0.0;
  double h_x = 0.0;
  double h_y = 0.0;
};

CellPoints build_cell_points(const ExperimentConfig& config, std::size_t cell) {
  const Domain domain = Domain::symmetric_box(2);
  const int side = side_from_count(config.n_z[cell]);
  const int interior_refinement = refinement_from_delta(config.delta_interior, 3);
  const int boundary_refinement = refinement_from_delta(config.delta_boundary, 2);
  CellPoints cp;
  auto [z_interior, z_boundary] = regular_grid(domain, side);
  cp.z = merge(z_interior, z_boundary, Location::mixed);
  auto [x_regular, y] = refined_collocation(domain, side, interior_refinement, boundary_refinement);
  cp.y = std::move(y);
  if (config.x_source == XSource::halton) {
    const int n_x = config.n_x.empty() ? static_cast<int>(x_regular.size()) : config.n_x[cell];
    cp.x = halton_points(domain, n_x, 2);
  } else {
    cp.x = std::move(x_regular);
  }
  const int finest = (side - 1) * std::max(interior_refinement, boundary_refinement) + 1;
  const int resolution = config.probe_resolution > 0 ? config.probe_resolution : 2 * (finest - 1) + 1;
  cp.h_z = density_stats(cp.z, resolution).h;
  cp.h_x = cp.x.size() >= 2 ? density_stats(cp.x, resolution).h : std::numeric_limits<double>::quiet_NaN();
  cp.h_y = density_stats(cp.y, resolution).h;
  return cp;
}

void dump_system(const ExperimentConfig& config, const CollocationSystem& system, int n_z, const std::string& op) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(config.output_dir) / "matrices";
  fs::create_directories(dir);
  const std::string stem = "nZ" + std::to_string(n_z) + "_" + op;
  std::ofstream pde(dir / ("A_pde_" + stem + ".csv"));
  write_matrix_csv(pde, system.pde);
  std::ofstream bdy(dir / ("A_bdy_" + stem + ".csv"));
  write_matrix_csv(bdy, system.bdy);
}

StudyRow base_row(const CellPoints& cp, int n_z, const std::string& problem, const std::string& op, double theta) {
  StudyRow row;
  row.problem = problem;
  row.op = op;
  row.n_z = n_z;
  row.h_z = cp.h_z;
  row.h_x = cp.h_x;
  row.h_y = cp.h_y;
  row.theta = theta;
  return row;
}

StudyRow failed(StudyRow row, const std::string& message) {
  row.ok = false;
  row.status = "error: " + message;
  row.l2_rms = row.h2_rms = row.l2_raw = row.h2_raw = std::numeric_limits<double>::quiet_NaN();
  row.cond_est = std::numeric_limits<double>::quiet_NaN();
  return row;
}

std::vector<StudyRow> run_cell(const ExperimentConfig& config, std::size_t cell) {
  const int n_z = config.n_z[cell];
  std::vector<StudyRow> rows;
  CellPoints cp;
  try {
    cp = build_cell_points(config, cell);
  } catch (const std::exception& e) {
    for (const auto& op : config.operators) {
      for (const auto& problem : config.problems) {
        for (double theta : config.thetas) rows.push_back(failed(base_row(cp, n_z, problem, op, theta), e.what()));
      }
    }
    return rows;
  }
  const Kernel kernel{config.kernel_family, config.m, 2, config.epsilon};

  for (const auto& op_name : config.operators) {
    std::vector<BoundaryValueProblem> problems;
    for (const auto& p : config.problems) problems.push_back(make_problem(p, op_name));

    CollocationSystem system;
    try {
      system = assemble(problems.front(), kernel, cp.x, cp.y, config.trial, cp.z);
      if (config.dump_matrices && !config.output_dir.empty()) dump_system(config, system, n_z, op_name);
    } catch (const std::exception& e) {
      for (const auto& problem : config.problems) {
        for (double theta : config.thetas) rows.push_back(failed(base_row(cp, n_z, problem, op_name, theta), e.what()));
      }
      continue;
    }

    // Rows in config order; column[k] indexes `solved` or is -1 for a failed solve.
    std::vector<StudyRow> ordered;
    std::vector<Eigen::Index> column;
    std::vector<Eigen::VectorXd> solved;
    std::vector<const ManufacturedSolution*> exact;
    for (std::size_t p = 0; p < problems.size(); ++p) {
      if (p > 0) reassign_rhs(system, problems[p], cp.x, cp.y);
      for (double theta : config.thetas) {
        StudyRow row = base_row(cp, n_z, config.problems[p], op_name, theta);
        try {
          const WlsWeight weight = wls_weight(theta, cp.h_x, cp.h_y, 2);
          row.weight_w = weight.w;
          const auto start = std::chrono::steady_clock::now();
          const LeastSquaresSolution sol = solve_wls(system, weight, config.rcond, config.weight_convention);
          const auto stop = std::chrono::steady_clock::now();
          if (config.record_timing) row.solve_seconds = std::chrono::duration<double>(stop - start).count();
          row.bdy_rank = sol.diagnostics.bdy_rank;
          row.cond_est = sol.diagnostics.cond_estimate;
          column.push_back(static_cast<Eigen::Index>(solved.size()));
          solved.push_back(sol.coefficients);
          exact.push_back(&problems[p].exact);
          ordered.push_back(row);
        } catch (const std::exception& e) {
          column.push_back(-1);
          ordered.push_back(failed(row, e.what()));
        }
      }
    }
    if (!solved.empty()) {
      Eigen::MatrixXd coefficients(system.n_trial(), static_cast<Eigen::Index>(solved.size()));
      for (std::size_t k = 0; k < solved.size(); ++k) coefficients.col(static_cast<Eigen::Index>(k)) = solved[k];
      try {
        const auto reports = error_reports(kernel, system.trial_centers, coefficients, exact, config.eval_grid_n);
        for (std::size_t k = 0; k < ordered.size(); ++k) {
          if (column[k] < 0) continue;
          const ErrorReport& report = reports[static_cast<std::size_t>(column[k])];
          ordered[k].l2_rms = report.l2;
          ordered[k].h2_rms = report.h2;
          ordered[k].l2_raw = report.l2_raw;
          ordered[k].h2_raw = report.h2_raw;
        }
      } catch (const std::exception& e) {
        for (std::size_t k = 0; k < ordered.size(); ++k) {
          if (column[k] >= 0) ordered[k] = failed(ordered[k], e.what());
        }
      }
    }
    for (auto& row : ordered) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ConvergenceStudy run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_cells = config.n_z.size();
  std::vector<std::vector<StudyRow>> per_cell(n_cells);

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), n_cells);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_cells; ++i) per_cell[i] = run_cell(config, i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_cells; i = next++) per_cell[i] = run_cell(config, i);
      });
    }
    for (auto& t : pool) t.join();
  }

  ConvergenceStudy study;
  for (auto& rows : per_cell) {
    for (auto& row : rows) study.rows.push_back(std::move(row));
  }
  study.sort_rows();
  study.fit(config.fit_drop_last);
  return study;
}

}  // namespace kansa
