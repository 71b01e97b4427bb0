#pragma once

#include "pada/dataset.hpp"
#include "pada/model.hpp"
#include "pada/train.hpp"

#include <string>
#include <vector>

namespace pada {

// Flat key=value experiment description. Unknown keys are rejected so typos
// cannot silently fall back to defaults. See the README for the key list.
struct ExperimentConfig {
  // Data: synthetic by default; set both CSV paths to load external features.
  std::string source_csv;
  std::string target_csv;
  SynthConfig synth;

  // Model (input_dim is taken from the data).
  std::vector<int> feature_dims = {16, 8};
  std::vector<int> discriminator_dims = {8};
  double init_scale = 1.0;
  std::uint64_t model_seed = 1;

  TrainConfig train;

  std::string out_dir = "out";

  bool uses_csv() const { return !source_csv.empty() || !target_csv.empty(); }
};

// Apply one key=value setting; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// Parse `key=value` lines ('#' comments and blank lines allowed).
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

void validate(const ExperimentConfig& config);

Dataset build_dataset(const ExperimentConfig& config);
ModelConfig make_model_config(const ExperimentConfig& config, int input_dim,
                              int num_source_classes);

}  // namespace pada
