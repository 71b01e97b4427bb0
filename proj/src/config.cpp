#include "pada/config.hpp"

#include "pada/errors.hpp"
#include "pada/io.hpp"

#include <sstream>

namespace pada {

namespace {

long long parse_int_value(const std::string& key, const std::string& value) {
  long long out = 0;
  if (!try_parse_int(value, out)) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_double_value(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!try_parse_double(value, out)) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split(value, ',')) {
    out.push_back(static_cast<int>(parse_int_value(key, item)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) {
    out.push_back(parse_double_value(key, item));
  }
  return out;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  // data
  if (key == "source_csv") { c.source_csv = value; return; }
  if (key == "target_csv") { c.target_csv = value; return; }
  if (key == "num_source_classes") {
    c.synth.num_source_classes = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "num_target_classes") {
    c.synth.num_target_classes = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "samples_per_class_source") {
    c.synth.samples_per_class_source = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "samples_per_class_target") {
    c.synth.samples_per_class_target = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "feature_dim") {
    c.synth.feature_dim = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "class_separation") { c.synth.class_separation = parse_double_value(key, value); return; }
  if (key == "shift_rotation") { c.synth.shift_rotation = parse_double_value(key, value); return; }
  if (key == "shift_translation") { c.synth.shift_translation = parse_double_list(key, value); return; }
  if (key == "noise_std") { c.synth.noise_std = parse_double_value(key, value); return; }
  if (key == "data_seed") {
    c.synth.seed = static_cast<std::uint64_t>(parse_int_value(key, value));
    return;
  }
  // model
  if (key == "feature_dims") { c.feature_dims = parse_int_list(key, value); return; }
  if (key == "discriminator_dims") { c.discriminator_dims = parse_int_list(key, value); return; }
  if (key == "init_scale") { c.init_scale = parse_double_value(key, value); return; }
  if (key == "model_seed") {
    c.model_seed = static_cast<std::uint64_t>(parse_int_value(key, value));
    return;
  }
  // train
  if (key == "mode") {
    try {
      c.train.mode = parse_mode(value);
    } catch (const ParameterError& e) {
      throw ConfigError("config key 'mode': " + std::string(e.what()));
    }
    return;
  }
  if (key == "epochs") { c.train.epochs = static_cast<int>(parse_int_value(key, value)); return; }
  if (key == "batch_size") {
    c.train.batch_size = static_cast<int>(parse_int_value(key, value));
    return;
  }
  if (key == "eta0") { c.train.eta0 = parse_double_value(key, value); return; }
  if (key == "alpha") { c.train.alpha = parse_double_value(key, value); return; }
  if (key == "decay") { c.train.decay = parse_double_value(key, value); return; }
  if (key == "momentum") { c.train.momentum = parse_double_value(key, value); return; }
  if (key == "lambda_max") { c.train.lambda_max = parse_double_value(key, value); return; }
  if (key == "lambda_ramp") { c.train.lambda_ramp = parse_double_value(key, value); return; }
  if (key == "head_lr_multiplier") {
    c.train.head_lr_multiplier = parse_double_value(key, value);
    return;
  }
  if (key == "train_seed") {
    c.train.seed = static_cast<std::uint64_t>(parse_int_value(key, value));
    return;
  }
  if (key == "freeze_uniform_weights") {
    c.train.freeze_uniform_weights = parse_bool_value(key, value);
    return;
  }
  // output
  if (key == "out_dir") { c.out_dir = value; return; }

  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key=value, got '" + t + "'");
    }
    apply_setting(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  const auto lines = read_lines(path);
  std::ostringstream joined;
  for (const auto& l : lines) joined << l << '\n';
  return parse_config_text(joined.str(), path);
}

void validate(const ExperimentConfig& config) {
  if (!config.source_csv.empty() != !config.target_csv.empty()) {
    throw ConfigError("source_csv and target_csv must be set together");
  }
  if (!config.uses_csv()) validate(config.synth);
  validate(config.train);
  // Class count and input width come from the data; validate the model
  // shape with placeholders when the data is external.
  const int dim = config.uses_csv() ? 1 : config.synth.feature_dim;
  const int classes = config.uses_csv() ? 2 : config.synth.num_source_classes;
  validate(make_model_config(config, dim, classes));
  if (config.out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

Dataset build_dataset(const ExperimentConfig& config) {
  if (config.uses_csv()) return load_csv(config.source_csv, config.target_csv);
  return make_synthetic(config.synth);
}

ModelConfig make_model_config(const ExperimentConfig& config, int input_dim,
                              int num_source_classes) {
  ModelConfig mc;
  mc.input_dim = input_dim;
  mc.feature_dims = config.feature_dims;
  mc.num_source_classes = num_source_classes;
  mc.discriminator_dims = config.discriminator_dims;
  mc.init_scale = config.init_scale;
  mc.seed = config.model_seed;
  return mc;
}

}  // namespace pada
