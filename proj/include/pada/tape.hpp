#pragma once

#include "pada/matrix.hpp"

#include <vector>

namespace pada {

using NodeId = int;

enum class OpKind {
  kLeaf,
  kMatMul,
  kAddBias,
  kRelu,
  kSoftmaxRows,
  kCrossEntropy,
  kGradReversal,
  kAdd,
  kScale,
  kSum,
};

// Probabilities are clamped to this floor before the log in cross_entropy.
inline constexpr double kProbFloor = 1e-12;

struct Node {
  OpKind op = OpKind::kLeaf;
  NodeId a = -1;
  NodeId b = -1;
  Matrix value;
  std::vector<int> labels;      // cross-entropy targets, one per row
  std::vector<double> weights;  // cross-entropy per-row weights; empty = all 1
  double coeff = 0.0;           // grad-reversal / scale factor
};

// Define-by-run reverse-mode tape. Node ids are topologically ordered: a
// node's inputs always have smaller ids. A tape is single-threaded and is
// rebuilt per minibatch; matrices are plain values and may be copied freely.
class Tape {
 public:
  NodeId leaf(Matrix value);
  NodeId add_node(Node node);

  const Matrix& value(NodeId id) const;
  const Node& node(NodeId id) const;
  int size() const { return static_cast<int>(nodes_.size()); }

  // Adjoints of every node with respect to the scalar node `loss`, indexed
  // by node id. Nodes not reachable from `loss` keep zero adjoints of their
  // value's shape. Deterministic: no allocation-order or RNG dependence.
  std::vector<Matrix> backward(NodeId loss) const;

 private:
  void check_id(NodeId id) const;
  std::vector<Node> nodes_;
};

NodeId matmul(Tape& t, NodeId a, NodeId b);
NodeId add_bias(Tape& t, NodeId x, NodeId bias);
NodeId relu(Tape& t, NodeId x);
NodeId softmax_rows(Tape& t, NodeId x);
NodeId cross_entropy(Tape& t, NodeId probs, std::vector<int> labels,
                     std::vector<double> sample_weights = {});
// Identity forward; multiplies the upstream adjoint by -coeff on the way back.
NodeId grad_reversal(Tape& t, NodeId x, double coeff);
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId scale(Tape& t, NodeId x, double factor);
NodeId sum(Tape& t, NodeId x);

}  // namespace pada
