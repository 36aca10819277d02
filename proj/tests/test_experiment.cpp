#include <cmath>
#include <sstream>

#include <doctest.h>

#include "kansa/errors.hpp"
#include "kansa/experiment.hpp"

using namespace kansa;

namespace {

std::string csv_of(const ConvergenceStudy& s) {
  std::ostringstream out;
  write_study_csv(out, s);
  return out.str();
}

ExperimentConfig quick() {
  ExperimentConfig c;
  c.n_z = {25, 49};
  c.eval_grid_n = 25;
  c.record_timing = false;
  return c;
}

std::string field_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_config reads nested sections") {
  const auto c = parse_config(R"({
    "name": "demo",
    "problems": ["peaks3", "franke"],
    "operators": ["convdiff"],
    "kernel": {"family": "mq", "epsilon": 2.5},
    "trial_space": "Z",
    "solver": {"thetas": [0, 0.5, "inf"], "rcond": 1e-12, "weight_convention": "linear"},
    "n_Z": [121, 256],
    "delta_interior": "1/3",
    "delta_boundary": 1,
    "x_source": "halton",
    "n_X": [300, 700],
    "eval_grid_n": 50
  })");
  CHECK(c.name == "demo");
  CHECK(c.problems.size() == 2);
  CHECK(c.kernel_family == KernelFamily::multiquadric);
  CHECK(c.epsilon == 2.5);
  CHECK(c.trial == TrialSpace::z_only);
  REQUIRE(c.thetas.size() == 3);
  CHECK(std::isinf(c.thetas[2]));
  CHECK(*c.rcond == 1e-12);
  CHECK(c.weight_convention == WeightConvention::linear);
  CHECK(c.delta_interior == doctest::Approx(1.0 / 3.0));
  CHECK(c.delta_boundary == 1.0);
  CHECK(c.x_source == XSource::halton);
  CHECK(c.n_x == std::vector<int>{300, 700});

  // round trip
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
}

TEST_CASE("config errors name the field") {
  CHECK(field_of(R"({"n_Z": [120]})") == "n_Z");
  CHECK(field_of(R"({"n_Z": []})") == "n_Z");
  CHECK(field_of(R"({"problems": ["nope"]})") == "problems");
  CHECK(field_of(R"({"operators": []})") == "operators");
  CHECK(field_of(R"({"delta_interior": 0.25})") == "delta_interior");
  CHECK(field_of(R"({"delta_boundary": "1/3"})") == "delta_boundary");
  CHECK(field_of(R"({"kernel": {"m": 2}})") == "kernel");
  CHECK(field_of(R"({"solver": {"thetas": [-1]}})") == "solver.thetas");
  CHECK(field_of(R"({"x_source": "sobol"})") == "x_source");
  CHECK(field_of(R"({"x_source": "halton", "n_X": [10, 20]})") == "n_X");
  CHECK(field_of(R"({"eval_grid_n": 1})") == "eval_grid_n");
  CHECK(!field_of(R"({"colour": 1})").empty());
  CHECK(!field_of(R"({"kernel": {"shape": 1}})").empty());
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK(side_from_count(441) == 21);
  CHECK_THROWS_AS(side_from_count(440), ConfigError);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 6);
  CHECK(preset("example1").n_z == std::vector<int>{121, 256, 441, 676, 961, 1296});
  const auto ex3 = preset("example3");
  REQUIRE(ex3.thetas.size() == 5);
  CHECK(std::isinf(ex3.thetas[0]));
  CHECK(ex3.thetas[1] == 0.0);
  CHECK(ex3.thetas[4] == 2.0);
  const auto g = preset("example4_gaussian");
  CHECK(g.n_z == std::vector<int>{1296});
  CHECK(g.kernel_family == KernelFamily::gaussian);
  CHECK(g.trial == TrialSpace::z_only);
  CHECK(g.delta_interior == 0.5);
  CHECK(g.delta_boundary == 0.5);
  CHECK(preset("example2").trial == TrialSpace::z_only);
  CHECK(preset("example3_scattered").x_source == XSource::halton);
  CHECK(preset("example4_mq").kernel_family == KernelFamily::multiquadric);
  CHECK_THROWS_AS(preset("example9"), ConfigError);
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
}

TEST_CASE("single-cell study has no rates") {
  auto c = quick();
  c.n_z = {9};
  const auto s = run_experiment(c);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].ok);
  REQUIRE(s.fitted_rates.size() == 1);
  CHECK_FALSE(s.fitted_rates[0].valid);
}

TEST_CASE("theta sweep shares one system") {
  auto c = quick();
  c.n_z = {36};
  c.thetas = {0.0, 0.5, 1.0, 2.0, kThetaInfinity};
  const auto s = run_experiment(c);
  REQUIRE(s.rows.size() == 5);
  for (const auto& r : s.rows) {
    CHECK(r.ok);
    CHECK(r.h_x == s.rows[0].h_x);
    CHECK(r.bdy_rank == s.rows[0].bdy_rank);
  }
  CHECK(s.rows[0].weight_w == 1.0);
  CHECK(std::isinf(s.rows[4].weight_w));
  // weights grow with theta (h_Y < 1, h_X comparable)
  CHECK(s.rows[3].weight_w > s.rows[2].weight_w);
}

TEST_CASE("run_experiment is deterministic and cells are isolated") {
  auto c = quick();
  c.problems = {"trig", "peaks3"};
  c.thetas = {kThetaInfinity, 1.0};
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(a.rows.size() == 8);

  auto parallel = c;
  parallel.jobs = 2;
  CHECK(csv_of(run_experiment(parallel)) == csv_of(a));

  auto one = c;
  one.n_z = {49};
  const auto lone = run_experiment(one);
  for (const auto& r : lone.rows) {
    bool matched = false;
    for (const auto& q : a.rows) {
      if (q.n_z == r.n_z && q.problem == r.problem && q.theta == r.theta) {
        CHECK(q.l2_rms == r.l2_rms);
        matched = true;
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("halton collocation sets") {
  auto c = quick();
  c.x_source = XSource::halton;
  c.operators = {"helmholtz_x"};
  const auto s = run_experiment(c);
  REQUIRE(s.rows.size() == 2);
  for (const auto& r : s.rows) CHECK(r.ok);
  CHECK(s.rows[1].l2_rms < s.rows[0].l2_rms);
}
