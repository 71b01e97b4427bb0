#pragma once

#include "pada/matrix.hpp"
#include "pada/tape.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pada {

struct ModelConfig {
  int input_dim = 2;
  // Hidden widths of the feature extractor; the last entry is the feature
  // dimension. Defaults sized for 2-D synthetic data.
  std::vector<int> feature_dims = {16, 8};
  int num_source_classes = 8;
  std::vector<int> discriminator_dims = {8};  // hidden widths of the domain discriminator
  double init_scale = 1.0;
  std::uint64_t seed = 1;
};

void validate(const ModelConfig& config);

struct Layer {
  Matrix weight;  // in x out
  Matrix bias;    // 1 x out
};

// Parameters of the three networks: feature extractor, source classifier
// (one linear layer over the features), domain discriminator (ends in a
// 2-way layer over {source, target}).
struct NetworkParams {
  std::vector<Layer> feature_layers;
  Layer classifier;
  std::vector<Layer> discriminator_layers;
};

// Scaled-uniform init, biases zero; bit-reproducible from config.seed.
NetworkParams init_params(const ModelConfig& config);

enum class ParamGroup { kFeature, kClassifier, kDiscriminator };

// Flat views over all trainable matrices, in a fixed order (feature layers,
// classifier, discriminator layers; weight before bias).
std::vector<Matrix*> param_matrices(NetworkParams& p);
std::vector<const Matrix*> param_matrices(const NetworkParams& p);
std::vector<ParamGroup> param_groups(const NetworkParams& p);

// Tape leaves for every parameter matrix of one network.
struct BoundParams {
  std::vector<std::pair<NodeId, NodeId>> feature;  // (weight, bias) per layer
  std::pair<NodeId, NodeId> classifier{-1, -1};
  std::vector<std::pair<NodeId, NodeId>> discriminator;
  std::vector<NodeId> flat;  // param_matrices order
};

BoundParams bind_params(Tape& t, const NetworkParams& p);

// Linear/ReLU stack; the last layer stays linear so features are free reals.
NodeId feature_forward(Tape& t, const BoundParams& p, NodeId x);
// Linear head + row softmax over the source classes.
NodeId classify_forward(Tape& t, const BoundParams& p, NodeId features);
// Discriminator MLP + softmax over {source=0, target=1}, no reversal layer.
NodeId domain_head_forward(Tape& t, const BoundParams& p, NodeId features);
// Gradient reversal with the given coefficient, then the discriminator.
NodeId discriminate_forward(Tape& t, const BoundParams& p, NodeId features, double grl_coeff);

// Forward-only conveniences over plain matrices.
Matrix feature_values(const NetworkParams& p, const Matrix& x);
Matrix classify_probs(const NetworkParams& p, const Matrix& x);

// Flat CSV of named matrices: name,rows,cols,<row-major values>.
std::string params_csv(const NetworkParams& p);
void save_params_csv(const NetworkParams& p, const std::string& path);
NetworkParams load_params_csv(const std::string& path);

}  // namespace pada
