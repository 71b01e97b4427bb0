#include "pada/train.hpp"

#include "pada/errors.hpp"
#include "pada/eval.hpp"
#include "pada/io.hpp"
#include "pada/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace pada {

const char* mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kSourceOnly: return "source-only";
    case TrainMode::kDann: return "dann";
    case TrainMode::kPada: return "pada";
    case TrainMode::kPadaClassifierOnly: return "pada-no-adversarial-weight";
    case TrainMode::kPadaAdversarialOnly: return "pada-no-classifier-weight";
  }
  return "unknown";
}

TrainMode parse_mode(const std::string& name) {
  if (name == "source-only") return TrainMode::kSourceOnly;
  if (name == "dann") return TrainMode::kDann;
  if (name == "pada") return TrainMode::kPada;
  if (name == "pada-no-adversarial-weight") return TrainMode::kPadaClassifierOnly;
  if (name == "pada-no-classifier-weight") return TrainMode::kPadaAdversarialOnly;
  throw ParameterError(
      "unknown mode '" + name +
      "' (expected source-only|dann|pada|pada-no-classifier-weight|pada-no-adversarial-weight)");
}

void validate(const TrainConfig& config) {
  if (config.epochs < 0) throw ParameterError("train: epochs must be >= 0");
  if (config.batch_size < 1) throw ParameterError("train: batch_size must be >= 1");
  if (!(config.eta0 > 0.0)) throw ParameterError("train: eta0 must be > 0");
  if (config.alpha < 0.0) throw ParameterError("train: alpha must be >= 0");
  if (config.decay < 0.0) throw ParameterError("train: decay must be >= 0");
  if (config.momentum < 0.0 || config.momentum >= 1.0) {
    throw ParameterError("train: momentum must be in [0,1)");
  }
  if (config.lambda_max < 0.0) throw ParameterError("train: lambda_max must be >= 0");
  if (config.lambda_ramp < 0.0) throw ParameterError("train: lambda_ramp must be >= 0");
  if (config.head_lr_multiplier < 1.0) {
    throw ParameterError("train: head_lr_multiplier must be >= 1");
  }
}

namespace {

void check_progress(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("progress must be in [0,1], got " + std::to_string(p));
  }
}

struct ModeFlags {
  bool weight_cls = false;
  bool weight_dom = false;
  bool adversarial = false;
};

ModeFlags mode_flags(TrainMode mode) {
  switch (mode) {
    case TrainMode::kSourceOnly: return {false, false, false};
    case TrainMode::kDann: return {false, false, true};
    case TrainMode::kPada: return {true, true, true};
    case TrainMode::kPadaClassifierOnly: return {true, false, true};
    case TrainMode::kPadaAdversarialOnly: return {false, true, true};
  }
  return {};
}

bool uses_class_weights(TrainMode mode) {
  const ModeFlags f = mode_flags(mode);
  return f.weight_cls || f.weight_dom;
}

}  // namespace

double lr_at(const TrainConfig& config, double progress) {
  check_progress(progress);
  return config.eta0 / std::pow(1.0 + config.alpha * progress, config.decay);
}

double lambda_at(const TrainConfig& config, double progress) {
  check_progress(progress);
  return config.lambda_max * (2.0 / (1.0 + std::exp(-config.lambda_ramp * progress)) - 1.0);
}

TrainState make_train_state(const ModelConfig& mc, const TrainConfig& tc) {
  validate(tc);
  TrainState state{init_params(mc), {}, uniform_weights(mc.num_source_classes),
                   0.0,             0,  0,
                   Rng(tc.seed)};
  for (const Matrix* m : param_matrices(state.params)) {
    state.velocity.push_back(Matrix::Zero(m->rows(), m->cols()));
  }
  return state;
}

StepLosses pada_step(TrainState& state, const TrainConfig& config, const SourceBatch& source,
                     const Matrix& target_x) {
  if (source.x.rows() == 0 || target_x.rows() == 0) {
    throw ParameterError("pada_step: batches must be non-empty");
  }
  if (source.y.size() != static_cast<std::size_t>(source.x.rows())) {
    throw DimensionError("pada_step: label count does not match the source batch");
  }

  const ModeFlags flags = mode_flags(config.mode);
  const double lr = lr_at(config, state.progress);
  const double lambda = flags.adversarial ? lambda_at(config, state.progress) : 0.0;

  // Per-sample class weights for the two weighted terms.
  std::vector<double> cls_weights, dom_weights;
  if (flags.weight_cls || flags.weight_dom) {
    std::vector<double> looked_up;
    looked_up.reserve(source.y.size());
    for (int y : source.y) looked_up.push_back(weight_for_sample(state.class_weights, y));
    if (flags.weight_cls) cls_weights = looked_up;
    if (flags.weight_dom) dom_weights = std::move(looked_up);
  }

  Tape tape;
  const BoundParams bound = bind_params(tape, state.params);
  const NodeId source_features = feature_forward(tape, bound, tape.leaf(source.x));
  const NodeId target_features = feature_forward(tape, bound, tape.leaf(target_x));

  const NodeId source_probs = classify_forward(tape, bound, source_features);
  const NodeId cls_loss = cross_entropy(tape, source_probs, source.y, std::move(cls_weights));

  // Domain labels: source = 0, target = 1. The discriminator descends these
  // unscaled losses; the reversal layer hands the feature extractor
  // -lambda times the same gradient.
  const NodeId source_dom_probs = discriminate_forward(tape, bound, source_features, lambda);
  const NodeId target_dom_probs = discriminate_forward(tape, bound, target_features, lambda);
  const NodeId src_dom_loss =
      cross_entropy(tape, source_dom_probs,
                    std::vector<int>(static_cast<std::size_t>(source.x.rows()), 0),
                    std::move(dom_weights));
  const NodeId tgt_dom_loss = cross_entropy(
      tape, target_dom_probs, std::vector<int>(static_cast<std::size_t>(target_x.rows()), 1));

  const NodeId backprop_loss = add(tape, cls_loss, add(tape, src_dom_loss, tgt_dom_loss));

  StepLosses losses;
  losses.source_cls_loss = tape.value(cls_loss)(0, 0);
  losses.source_domain_loss = tape.value(src_dom_loss)(0, 0);
  losses.target_domain_loss = tape.value(tgt_dom_loss)(0, 0);
  losses.total_objective =
      losses.source_cls_loss +
      lambda * (losses.source_domain_loss + losses.target_domain_loss);
  for (double v : {losses.source_cls_loss, losses.source_domain_loss, losses.target_domain_loss,
                   losses.total_objective}) {
    if (!std::isfinite(v)) {
      throw DivergenceError("pada_step: non-finite loss at step " +
                                std::to_string(state.steps_completed),
                            state.steps_completed);
    }
  }

  const auto grads = tape.backward(backprop_loss);

  auto matrices = param_matrices(state.params);
  const auto groups = param_groups(state.params);
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Matrix& g = grads[static_cast<std::size_t>(bound.flat[i])];
    const double rate =
        lr * (groups[i] == ParamGroup::kFeature ? 1.0 : config.head_lr_multiplier);
    state.velocity[i] = config.momentum * state.velocity[i] + g;
    *matrices[i] -= rate * state.velocity[i];
  }
  state.steps_completed += 1;
  return losses;
}

namespace {

StepLosses mean_losses(const std::vector<StepLosses>& all) {
  StepLosses mean;
  if (all.empty()) return mean;
  for (const auto& l : all) {
    mean.source_cls_loss += l.source_cls_loss;
    mean.source_domain_loss += l.source_domain_loss;
    mean.target_domain_loss += l.target_domain_loss;
    mean.total_objective += l.total_objective;
  }
  const double n = static_cast<double>(all.size());
  mean.source_cls_loss /= n;
  mean.source_domain_loss /= n;
  mean.target_domain_loss /= n;
  mean.total_objective /= n;
  return mean;
}

}  // namespace

TrainResult train_run(const Dataset& ds, const ModelConfig& mc, const TrainConfig& tc) {
  validate(mc);
  validate(tc);
  if (ds.num_source_classes != mc.num_source_classes) {
    throw ParameterError("train_run: dataset has " + std::to_string(ds.num_source_classes) +
                         " source classes, model expects " +
                         std::to_string(mc.num_source_classes));
  }
  if (ds.source_x.cols() != mc.input_dim) {
    throw DimensionError("train_run: dataset dimension " + std::to_string(ds.source_x.cols()) +
                         " != model input_dim " + std::to_string(mc.input_dim));
  }
  const Eigen::Index n_s = ds.source_x.rows();
  const Eigen::Index n_t = ds.target_x.rows();
  if (n_s == 0 || n_t == 0) {
    throw ParameterError("train_run: both domains must have at least one sample");
  }

  TrainState state = make_train_state(mc, tc);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const long steps_per_epoch =
      (std::max(n_s, n_t) + tc.batch_size - 1) / static_cast<long>(tc.batch_size);
  const long total_steps = static_cast<long>(tc.epochs) * steps_per_epoch;

  TrainResult result;
  std::vector<int> src_order(static_cast<std::size_t>(n_s));
  std::vector<int> tgt_order(static_cast<std::size_t>(n_t));
  std::iota(src_order.begin(), src_order.end(), 0);
  std::iota(tgt_order.begin(), tgt_order.end(), 0);

  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    state.epoch = epoch;
    // Epoch 0 keeps the all-ones weights, so the first epoch of every
    // weighted mode matches plain adversarial training.
    if (epoch > 0 && uses_class_weights(tc.mode) && !tc.freeze_uniform_weights) {
      const Matrix target_probs = classify_probs(state.params, ds.target_x);
      state.class_weights = normalize_weights(estimate_class_weights(target_probs));
    }

    state.rng.shuffle(src_order);
    state.rng.shuffle(tgt_order);

    std::vector<StepLosses> epoch_losses;
    epoch_losses.reserve(static_cast<std::size_t>(steps_per_epoch));
    for (long step = 0; step < steps_per_epoch; ++step) {
      state.progress = total_steps > 0
                           ? static_cast<double>(state.steps_completed) /
                                 static_cast<double>(total_steps)
                           : 0.0;
      SourceBatch source;
      source.x.resize(tc.batch_size, ds.source_x.cols());
      source.y.resize(static_cast<std::size_t>(tc.batch_size));
      Matrix target(tc.batch_size, ds.target_x.cols());
      // Equal-sized batches; the smaller domain cycles within the epoch.
      for (int j = 0; j < tc.batch_size; ++j) {
        const auto si = static_cast<std::size_t>((step * tc.batch_size + j) % n_s);
        const auto ti = static_cast<std::size_t>((step * tc.batch_size + j) % n_t);
        source.x.row(j) = ds.source_x.row(src_order[si]);
        source.y[static_cast<std::size_t>(j)] = ds.source_y[static_cast<std::size_t>(src_order[si])];
        target.row(j) = ds.target_x.row(tgt_order[ti]);
      }
      epoch_losses.push_back(pada_step(state, tc, source, target));
    }

    EpochRecord record;
    record.epoch = epoch;
    record.mean_losses = mean_losses(epoch_losses);
    record.gamma = state.class_weights.gamma;
    record.source_accuracy = source_accuracy(state.params, ds);
    record.target_accuracy =
        ds.has_eval_labels() ? evaluate(state.params, ds).target_accuracy : nan;
    if (!ds.target_class_set.empty() &&
        static_cast<int>(ds.target_class_set.size()) <= ds.num_source_classes) {
      const WeightStats stats = weight_stats(state.class_weights, ds.target_class_set);
      record.shared_weight_mean = stats.mean_shared;
      record.outlier_weight_mean = stats.mean_outlier;
    } else {
      record.shared_weight_mean = nan;
      record.outlier_weight_mean = nan;
    }
    result.history.push_back(std::move(record));
  }
  state.progress = total_steps > 0 ? 1.0 : 0.0;
  result.params = std::move(state.params);
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history, int num_classes) {
  std::ostringstream out;
  out << "epoch,src_cls_loss,src_dom_loss,tgt_dom_loss,objective,src_acc,tgt_acc";
  for (int k = 0; k < num_classes; ++k) out << ",gamma_" << k;
  out << ",shared_weight_mean,outlier_weight_mean\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << format_double(r.mean_losses.source_cls_loss) << ','
        << format_double(r.mean_losses.source_domain_loss) << ','
        << format_double(r.mean_losses.target_domain_loss) << ','
        << format_double(r.mean_losses.total_objective) << ','
        << format_double(r.source_accuracy) << ',' << format_double(r.target_accuracy);
    for (int k = 0; k < num_classes; ++k) out << ',' << format_double(r.gamma(k));
    out << ',' << format_double(r.shared_weight_mean) << ','
        << format_double(r.outlier_weight_mean) << '\n';
  }
  return out.str();
}

void write_history_csv(const std::vector<EpochRecord>& history, int num_classes,
                       const std::string& path) {
  write_file(path, history_csv(history, num_classes));
}

}  // namespace pada
