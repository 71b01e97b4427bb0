#include "pada/weighting.hpp"

#include "pada/errors.hpp"

#include <cmath>
#include <string>

namespace pada {

ClassWeights uniform_weights(int num_classes) {
  if (num_classes <= 0) throw ParameterError("uniform_weights: num_classes must be positive");
  ClassWeights w;
  w.gamma = Vector::Ones(num_classes);
  w.normalized = true;
  return w;
}

ClassWeights estimate_class_weights(const Matrix& target_probs) {
  if (target_probs.rows() == 0 || target_probs.cols() == 0) {
    throw ParameterError("estimate_class_weights: empty prediction matrix");
  }
  constexpr double kRowSumTol = 1e-9;
  for (Eigen::Index r = 0; r < target_probs.rows(); ++r) {
    if ((target_probs.row(r).array() < 0.0).any()) {
      throw DistributionError("estimate_class_weights: negative entry in row " +
                              std::to_string(r));
    }
    const double s = target_probs.row(r).sum();
    if (!(std::abs(s - 1.0) <= kRowSumTol)) {
      throw DistributionError("estimate_class_weights: row " + std::to_string(r) +
                              " sums to " + std::to_string(s));
    }
  }
  ClassWeights w;
  w.gamma = target_probs.colwise().mean().transpose();
  w.normalized = false;
  return w;
}

ClassWeights normalize_weights(const ClassWeights& w) {
  if (w.gamma.size() == 0) throw ParameterError("normalize_weights: empty weight vector");
  const double max = w.gamma.maxCoeff();
  if (!(max > 0.0)) {
    throw DegenerateWeightsError("normalize_weights: all class weights are zero");
  }
  ClassWeights out;
  out.gamma = w.gamma / max;
  out.normalized = true;
  return out;
}

double weight_for_sample(const ClassWeights& w, int label) {
  if (!w.normalized) {
    throw StateError("weight_for_sample: weights must be normalized first");
  }
  if (label < 0 || label >= w.gamma.size()) {
    throw IndexError("weight_for_sample: label " + std::to_string(label) + " outside [0," +
                     std::to_string(w.gamma.size()) + ")");
  }
  return w.gamma(label);
}

}  // namespace pada
