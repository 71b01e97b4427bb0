// Command-line front end: train / sweep / weights subcommands over flat
// key=value experiment configs. See the README for formats and examples.

#include "pada/config.hpp"
#include "pada/errors.hpp"
#include "pada/io.hpp"
#include "pada/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

pada::ExperimentConfig assemble_config(const std::string& config_path,
                                       const std::vector<std::string>& sets,
                                       const std::string& out_dir, const std::string& mode) {
  pada::ExperimentConfig config;
  if (!config_path.empty()) config = pada::load_config(config_path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw pada::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    pada::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!mode.empty()) pada::apply_setting(config, "mode", mode);
  if (!out_dir.empty()) config.out_dir = out_dir;
  return config;
}

std::vector<pada::TrainMode> parse_modes(const std::string& csv) {
  std::vector<pada::TrainMode> modes;
  for (const auto& name : pada::split(csv, ',')) {
    modes.push_back(pada::parse_mode(pada::trim(name)));
  }
  return modes;
}

std::vector<int> parse_ks(const std::string& csv) {
  std::vector<int> ks;
  for (const auto& item : pada::split(csv, ',')) {
    long long v = 0;
    if (!pada::try_parse_int(item, v)) {
      throw pada::ParameterError("--ks expects a comma-separated integer list, got '" + csv + "'");
    }
    ks.push_back(static_cast<int>(v));
  }
  return ks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial adversarial domain adaptation experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode;
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value experiment config file");
    cmd->add_option("--set", sets, "override a config key (key=value, repeatable)");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* train = app.add_subcommand("train", "train one model and export its artifacts");
  add_common(train);
  train->add_option("--mode", mode, "training mode");

  std::string ks_csv, modes_csv = "dann,pada";
  int jobs = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "accuracy vs. number of target classes");
  add_common(sweep);
  sweep->add_option("--ks", ks_csv, "comma-separated target class counts")->required();
  sweep->add_option("--mode", modes_csv, "comma-separated training modes");
  sweep->add_option("--jobs", jobs, "parallel workers (default: available cores)");

  std::string history_path;
  CLI::App* weights = app.add_subcommand("weights", "export final-epoch class weights");
  weights->add_option("history", history_path, "history.csv from a training run")->required();
  weights->add_option("--config", config_path, "config used for the run (enables shared/outlier means)");
  weights->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      return pada::run_train_command(assemble_config(config_path, sets, out_dir, mode));
    }
    if (sweep->parsed()) {
      const auto config = assemble_config(config_path, sets, out_dir, "");
      return pada::run_sweep_command(config, parse_ks(ks_csv), parse_modes(modes_csv), jobs);
    }
    if (weights->parsed()) {
      std::optional<pada::ExperimentConfig> config;
      if (!config_path.empty()) config = pada::load_config(config_path);
      return pada::run_weights_command(history_path, config,
                                       out_dir.empty() ? "." : out_dir);
    }
  } catch (const pada::DivergenceError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const pada::ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
