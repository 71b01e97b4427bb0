#pragma once

#include "pada/dataset.hpp"
#include "pada/model.hpp"
#include "pada/train.hpp"
#include "pada/weighting.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pada {

struct EvalReport {
  double target_accuracy = 0.0;
  double source_accuracy = 0.0;
  std::map<int, double> per_class_target_accuracy;  // classes with eval rows
  Eigen::MatrixXi confusion;                        // true class x predicted class
};

// Row-wise argmax of the class probabilities; ties go to the smaller index.
std::vector<int> predict_labels(const NetworkParams& params, const Matrix& x);

double source_accuracy(const NetworkParams& params, const Dataset& ds);

// Target metrics over the rows that carry evaluation labels.
EvalReport evaluate(const NetworkParams& params, const Dataset& ds);

struct WeightStats {
  double mean_shared = 0.0;
  double mean_outlier = 0.0;  // 0 when there are no outlier classes
  double sum_shared = 0.0;
  double sum_outlier = 0.0;
  int shared_count = 0;
  int outlier_count = 0;
  Vector full_vector;
};

WeightStats weight_stats(const ClassWeights& weights, const std::vector<int>& shared);

struct SweepCell {
  int k = 0;
  TrainMode mode = TrainMode::kPada;
  double target_acc = 0.0;
  double src_acc = 0.0;
  double seconds = 0.0;
  std::string status;  // "ok" or an error message
};

struct CellSeeds {
  std::uint64_t model_seed = 0;
  std::uint64_t train_seed = 0;
};

// Stable per-cell seeds: FNV-1a over (base seed, k, mode name), whitened
// with splitmix64. Adding cells never perturbs existing ones.
CellSeeds sweep_cell_seeds(std::uint64_t base_seed, int k, TrainMode mode);

// Trains one fresh model per (k, mode) cell on subset_target_classes(base, k)
// and records the final accuracies. Cells run on up to `jobs` worker threads
// (0 = hardware concurrency); failures are recorded, not propagated.
std::vector<SweepCell> sweep_target_classes(const Dataset& base, const std::vector<int>& ks,
                                            const ModelConfig& mc, const TrainConfig& tc,
                                            const std::vector<TrainMode>& modes, int jobs = 0);

std::string sweep_csv(const std::vector<SweepCell>& cells);
void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path);

}  // namespace pada
