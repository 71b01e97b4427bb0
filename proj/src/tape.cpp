#include "pada/tape.hpp"

#include "pada/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pada {

NodeId Tape::leaf(Matrix value) {
  Node n;
  n.op = OpKind::kLeaf;
  n.value = std::move(value);
  return add_node(std::move(n));
}

NodeId Tape::add_node(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

void Tape::check_id(NodeId id) const {
  if (id < 0 || id >= size()) {
    throw IndexError("tape: node id " + std::to_string(id) + " out of range (size " +
                     std::to_string(size()) + ")");
  }
}

const Matrix& Tape::value(NodeId id) const {
  check_id(id);
  return nodes_[static_cast<std::size_t>(id)].value;
}

const Node& Tape::node(NodeId id) const {
  check_id(id);
  return nodes_[static_cast<std::size_t>(id)];
}

std::vector<Matrix> Tape::backward(NodeId loss) const {
  check_id(loss);
  const Matrix& lv = nodes_[static_cast<std::size_t>(loss)].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw DimensionError("backward: loss node must be 1x1, got " + shape_str(lv));
  }

  // Mark ancestors of the loss; everything else keeps a zero adjoint.
  std::vector<char> reachable(nodes_.size(), 0);
  std::vector<NodeId> stack{loss};
  reachable[static_cast<std::size_t>(loss)] = 1;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    for (NodeId in : {n.a, n.b}) {
      if (in >= 0 && !reachable[static_cast<std::size_t>(in)]) {
        reachable[static_cast<std::size_t>(in)] = 1;
        stack.push_back(in);
      }
    }
  }

  std::vector<Matrix> adjoint(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    adjoint[i] = Matrix::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
  }
  adjoint[static_cast<std::size_t>(loss)](0, 0) = 1.0;

  // Ids are topological, so one reverse sweep visits consumers before inputs.
  for (NodeId id = loss; id >= 0; --id) {
    if (!reachable[static_cast<std::size_t>(id)]) continue;
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    const Matrix& g = adjoint[static_cast<std::size_t>(id)];
    switch (n.op) {
      case OpKind::kLeaf:
        break;
      case OpKind::kMatMul: {
        const Matrix& A = nodes_[static_cast<std::size_t>(n.a)].value;
        const Matrix& B = nodes_[static_cast<std::size_t>(n.b)].value;
        adjoint[static_cast<std::size_t>(n.a)] += g * B.transpose();
        adjoint[static_cast<std::size_t>(n.b)] += A.transpose() * g;
        break;
      }
      case OpKind::kAddBias: {
        adjoint[static_cast<std::size_t>(n.a)] += g;
        adjoint[static_cast<std::size_t>(n.b)] += g.colwise().sum();
        break;
      }
      case OpKind::kRelu: {
        const Matrix& x = nodes_[static_cast<std::size_t>(n.a)].value;
        adjoint[static_cast<std::size_t>(n.a)].array() +=
            g.array() * (x.array() > 0.0).cast<double>();
        break;
      }
      case OpKind::kSoftmaxRows: {
        // dx_r = y_r * (g_r - <g_r, y_r>), the full per-row Jacobian.
        const Matrix& y = n.value;
        Matrix& gx = adjoint[static_cast<std::size_t>(n.a)];
        for (Eigen::Index r = 0; r < y.rows(); ++r) {
          const double dot = (g.row(r).array() * y.row(r).array()).sum();
          gx.row(r).array() += y.row(r).array() * (g.row(r).array() - dot);
        }
        break;
      }
      case OpKind::kCrossEntropy: {
        const Matrix& probs = nodes_[static_cast<std::size_t>(n.a)].value;
        const double g0 = g(0, 0);
        const double inv_n = 1.0 / static_cast<double>(probs.rows());
        Matrix& gp = adjoint[static_cast<std::size_t>(n.a)];
        for (Eigen::Index r = 0; r < probs.rows(); ++r) {
          const int label = n.labels[static_cast<std::size_t>(r)];
          const double w = n.weights.empty() ? 1.0 : n.weights[static_cast<std::size_t>(r)];
          const double p = probs(r, label);
          if (p > kProbFloor) gp(r, label) += g0 * (-w * inv_n / p);
          // below the clamp floor the forward value is constant in p
        }
        break;
      }
      case OpKind::kGradReversal: {
        adjoint[static_cast<std::size_t>(n.a)] += (-n.coeff) * g;
        break;
      }
      case OpKind::kAdd: {
        adjoint[static_cast<std::size_t>(n.a)] += g;
        adjoint[static_cast<std::size_t>(n.b)] += g;
        break;
      }
      case OpKind::kScale: {
        adjoint[static_cast<std::size_t>(n.a)] += n.coeff * g;
        break;
      }
      case OpKind::kSum: {
        adjoint[static_cast<std::size_t>(n.a)].array() += g(0, 0);
        break;
      }
    }
  }
  return adjoint;
}

NodeId matmul(Tape& t, NodeId a, NodeId b) {
  const Matrix& A = t.value(a);
  const Matrix& B = t.value(b);
  if (A.cols() != B.rows()) {
    throw DimensionError("matmul: inner dimensions differ: " + shape_str(A) + " * " +
                         shape_str(B));
  }
  Node n;
  n.op = OpKind::kMatMul;
  n.a = a;
  n.b = b;
  n.value = A * B;
  return t.add_node(std::move(n));
}

NodeId add_bias(Tape& t, NodeId x, NodeId bias) {
  const Matrix& X = t.value(x);
  const Matrix& B = t.value(bias);
  if (B.rows() != 1 || B.cols() != X.cols()) {
    throw DimensionError("add_bias: bias must be 1x" + std::to_string(X.cols()) + ", got " +
                         shape_str(B));
  }
  Node n;
  n.op = OpKind::kAddBias;
  n.a = x;
  n.b = bias;
  n.value = X + B.replicate(X.rows(), 1);
  return t.add_node(std::move(n));
}

NodeId relu(Tape& t, NodeId x) {
  Node n;
  n.op = OpKind::kRelu;
  n.a = x;
  n.value = t.value(x).cwiseMax(0.0);
  return t.add_node(std::move(n));
}

NodeId softmax_rows(Tape& t, NodeId x) {
  const Matrix& X = t.value(x);
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const double m = X.row(r).maxCoeff();  // subtract the max so exp() cannot overflow
    Eigen::ArrayXd e = (X.row(r).array() - m).exp();
    out.row(r) = (e / e.sum()).matrix();
  }
  Node n;
  n.op = OpKind::kSoftmaxRows;
  n.a = x;
  n.value = std::move(out);
  return t.add_node(std::move(n));
}

NodeId cross_entropy(Tape& t, NodeId probs, std::vector<int> labels,
                     std::vector<double> sample_weights) {
  const Matrix& P = t.value(probs);
  const auto rows = static_cast<std::size_t>(P.rows());
  if (labels.size() != rows) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(rows) + " rows");
  }
  if (!sample_weights.empty() && sample_weights.size() != rows) {
    throw DimensionError("cross_entropy: " + std::to_string(sample_weights.size()) +
                         " weights for " + std::to_string(rows) + " rows");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (labels[i] < 0 || labels[i] >= P.cols()) {
      throw IndexError("cross_entropy: label " + std::to_string(labels[i]) + " at row " +
                       std::to_string(i) + " outside [0," + std::to_string(P.cols()) + ")");
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double w = sample_weights.empty() ? 1.0 : sample_weights[i];
    const double p = std::max(P(static_cast<Eigen::Index>(i), labels[i]), kProbFloor);
    acc += w * (-std::log(p));
  }
  Node n;
  n.op = OpKind::kCrossEntropy;
  n.a = probs;
  n.labels = std::move(labels);
  n.weights = std::move(sample_weights);
  n.value = Matrix::Constant(1, 1, acc / static_cast<double>(rows));
  return t.add_node(std::move(n));
}

NodeId grad_reversal(Tape& t, NodeId x, double coeff) {
  if (coeff < 0.0) {
    throw ParameterError("grad_reversal: coeff must be >= 0, got " + std::to_string(coeff));
  }
  Node n;
  n.op = OpKind::kGradReversal;
  n.a = x;
  n.coeff = coeff;
  n.value = t.value(x);  // forward pass is the identity, bit for bit
  return t.add_node(std::move(n));
}

NodeId add(Tape& t, NodeId a, NodeId b) {
  const Matrix& A = t.value(a);
  const Matrix& B = t.value(b);
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw DimensionError("add: shapes differ: " + shape_str(A) + " vs " + shape_str(B));
  }
  Node n;
  n.op = OpKind::kAdd;
  n.a = a;
  n.b = b;
  n.value = A + B;
  return t.add_node(std::move(n));
}

NodeId scale(Tape& t, NodeId x, double factor) {
  Node n;
  n.op = OpKind::kScale;
  n.a = x;
  n.coeff = factor;
  n.value = factor * t.value(x);
  return t.add_node(std::move(n));
}

NodeId sum(Tape& t, NodeId x) {
  Node n;
  n.op = OpKind::kSum;
  n.a = x;
  n.value = Matrix::Constant(1, 1, t.value(x).sum());
  return t.add_node(std::move(n));
}

}  // namespace pada
