#pragma once

#include "pada/matrix.hpp"

namespace pada {

// Per-class contribution weights, estimated by averaging the classifier's
// predicted distributions over all target data. Unnormalized weights sum to
// 1; normalized weights are divided by their largest entry so the most
// likely class gets weight exactly 1.
struct ClassWeights {
  Vector gamma;
  bool normalized = false;
};

ClassWeights uniform_weights(int num_classes);  // all ones, normalized

// Column means of a matrix of predicted distributions (one row per target
// sample). Result is unnormalized.
ClassWeights estimate_class_weights(const Matrix& target_probs);

// Divide by the largest entry. Idempotent, ratio- and order-preserving.
ClassWeights normalize_weights(const ClassWeights& w);

double weight_for_sample(const ClassWeights& w, int label);

}  // namespace pada
