// kansa: run kernel-collocation convergence experiments.
//
//   kansa run <config.json> [--out dir] [--jobs N] [--fit-drop-last k]
//             [--weight-convention squared|linear] [--no-timing] [--dump-matrices]
//   kansa preset <name> --print
//   kansa presets

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kansa/errors.hpp"
#include "kansa/experiment.hpp"

namespace fs = std::filesystem;

namespace {

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

bool all_ok(const kansa::ConvergenceStudy& study) {
  for (const auto& row : study.rows) {
    if (!row.ok) return false;
  }
  return true;
}

int run(kansa::ExperimentConfig config) {
  config.validate();
  const kansa::ConvergenceStudy study = kansa::run_experiment(config);
  kansa::write_summary(std::cout, study);
  if (!config.output_dir.empty()) {
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    {
      std::ofstream csv(dir / "study.csv");
      csv << "# kansa study '" << config.name << "' generated " << timestamp() << '\n';
      kansa::write_study_csv(csv, study);
    }
    {
      std::ofstream rates(dir / "rates.csv");
      kansa::write_rates_csv(rates, study);
    }
    {
      std::ofstream summary(dir / "summary.txt");
      kansa::write_summary(summary, study);
    }
    {
      std::ofstream resolved(dir / "config.json");
      resolved << kansa::config_to_json(config) << '\n';
    }
    std::cout << "\nwrote " << (dir / "study.csv").string() << '\n';
  }
  return all_ok(study) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel collocation (Kansa) least-squares solver experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  int drop_last = -1;
  std::string convention;
  bool no_timing = false;
  bool dump_matrices = false;
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run_cmd->add_option("--jobs", jobs, "Run n_Z cells in parallel")->check(CLI::PositiveNumber);
  run_cmd->add_option("--fit-drop-last", drop_last, "Exclude the k finest levels from rate fits")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--weight-convention", convention, "How W enters the stacked WLS system")
      ->check(CLI::IsMember({"squared", "linear"}));
  run_cmd->add_flag("--no-timing", no_timing, "Write solve_seconds as 0 (byte-reproducible CSV)");
  run_cmd->add_flag("--dump-matrices", dump_matrices, "Write A_pde/A_bdy as CSV under <out>/matrices");

  auto* preset_cmd = app.add_subcommand("preset", "Show a built-in experiment preset");
  std::string preset_name;
  bool print = false;
  std::string preset_out;
  preset_cmd->add_option("name", preset_name, "Preset name")->required();
  preset_cmd->add_flag("--print", print, "Print the preset as JSON");
  preset_cmd->add_option("--run", preset_out, "Run the preset, writing results to this directory");

  auto* list_cmd = app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      kansa::ExperimentConfig config = kansa::load_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (jobs > 0) config.jobs = jobs;
      if (drop_last >= 0) config.fit_drop_last = drop_last;
      if (!convention.empty()) config.weight_convention = kansa::weight_convention_from_string(convention);
      if (no_timing) config.record_timing = false;
      if (dump_matrices) config.dump_matrices = true;
      return run(config);
    }
    if (*preset_cmd) {
      kansa::ExperimentConfig config = kansa::preset(preset_name);
      if (!preset_out.empty()) {
        config.output_dir = preset_out;
        return run(config);
      }
      if (print || preset_out.empty()) std::cout << kansa::config_to_json(config) << '\n';
      return 0;
    }
    if (*list_cmd) {
      for (const auto& name : kansa::preset_names()) std::cout << name << '\n';
      return 0;
    }
  } catch (const kansa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
