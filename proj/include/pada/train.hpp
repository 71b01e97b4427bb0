#pragma once

#include "pada/dataset.hpp"
#include "pada/matrix.hpp"
#include "pada/model.hpp"
#include "pada/rng.hpp"
#include "pada/weighting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pada {

enum class TrainMode {
  kSourceOnly,           // classifier only, adversary carries no penalty
  kDann,                 // unweighted adversarial alignment
  kPada,                 // class weights on classifier and adversary
  kPadaClassifierOnly,   // class weights on the classifier term only
  kPadaAdversarialOnly,  // class weights on the adversary term only
};

const char* mode_name(TrainMode mode);  // CLI spelling
TrainMode parse_mode(const std::string& name);

struct TrainConfig {
  TrainMode mode = TrainMode::kPada;
  int epochs = 60;
  int batch_size = 32;
  double eta0 = 0.05;    // base learning rate
  double alpha = 10.0;   // learning-rate schedule steepness
  double decay = 0.75;   // learning-rate schedule exponent
  double momentum = 0.9;
  double lambda_max = 1.0;   // final adversarial penalty
  double lambda_ramp = 10.0; // steepness of the 0 -> lambda_max ramp
  double head_lr_multiplier = 1.0;  // extra rate on classifier + discriminator
  std::uint64_t seed = 3;
  // Diagnostic: keep class weights at all-ones instead of re-estimating.
  bool freeze_uniform_weights = false;
};

void validate(const TrainConfig& config);

// eta0 / (1 + alpha*p)^decay for training progress p in [0,1].
double lr_at(const TrainConfig& config, double progress);
// lambda_max * (2 / (1 + exp(-ramp*p)) - 1): 0 at p=0, ~lambda_max at p=1.
double lambda_at(const TrainConfig& config, double progress);

struct StepLosses {
  double source_cls_loss = 0.0;
  double source_domain_loss = 0.0;
  double target_domain_loss = 0.0;
  // cls + lambda*(source_domain + target_domain), the weighted minimax
  // objective value at the current parameters.
  double total_objective = 0.0;
};

struct SourceBatch {
  Matrix x;
  std::vector<int> y;
};

struct TrainState {
  NetworkParams params;
  std::vector<Matrix> velocity;  // momentum buffers, param_matrices() order
  ClassWeights class_weights;    // normalized; all-ones until re-estimated
  double progress = 0.0;         // completed_steps / total_steps
  int epoch = 0;
  long steps_completed = 0;
  Rng rng;
};

TrainState make_train_state(const ModelConfig& mc, const TrainConfig& tc);

// One minibatch update of the saddle-point objective. The discriminator
// descends its own cross-entropy; the feature extractor receives that
// gradient through the reversal layer scaled by -lambda_at(progress); the
// classifier term is class-weighted according to the mode.
StepLosses pada_step(TrainState& state, const TrainConfig& config, const SourceBatch& source,
                     const Matrix& target_x);

struct EpochRecord {
  int epoch = 0;
  StepLosses mean_losses;
  Vector gamma;                     // class weights in effect during the epoch
  double source_accuracy = 0.0;
  double target_accuracy = 0.0;     // NaN when no evaluation labels exist
  double shared_weight_mean = 0.0;  // NaN when the target class set is unknown
  double outlier_weight_mean = 0.0;
};

struct TrainResult {
  NetworkParams params;
  std::vector<EpochRecord> history;
};

// Shuffled minibatch epochs; class weights are re-estimated from all target
// data at the start of every epoch after the first. Deterministic for a
// fixed dataset and seeds.
TrainResult train_run(const Dataset& ds, const ModelConfig& mc, const TrainConfig& tc);

std::string history_csv(const std::vector<EpochRecord>& history, int num_classes);
void write_history_csv(const std::vector<EpochRecord>& history, int num_classes,
                       const std::string& path);

}  // namespace pada
