#include "pada/model.hpp"

#include "pada/errors.hpp"
#include "pada/io.hpp"
#include "pada/rng.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace pada {

void validate(const ModelConfig& config) {
  if (config.input_dim <= 0) throw ParameterError("model: input_dim must be positive");
  if (config.num_source_classes < 2) {
    throw ParameterError("model: num_source_classes must be >= 2, got " +
                         std::to_string(config.num_source_classes));
  }
  if (config.feature_dims.empty()) throw ParameterError("model: feature_dims must be non-empty");
  for (int d : config.feature_dims) {
    if (d <= 0) throw ParameterError("model: feature_dims entries must be positive");
  }
  for (int d : config.discriminator_dims) {
    if (d <= 0) throw ParameterError("model: discriminator_dims entries must be positive");
  }
  if (config.init_scale < 0.0) throw ParameterError("model: init_scale must be >= 0");
}

namespace {

Layer init_layer(int in, int out, double init_scale, Rng& rng) {
  Layer layer;
  layer.weight.resize(in, out);
  const double bound = init_scale / std::sqrt(static_cast<double>(in));
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      layer.weight(r, c) = rng.uniform(-bound, bound);
    }
  }
  layer.bias = Matrix::Zero(1, out);
  return layer;
}

NodeId mlp_forward(Tape& t, const std::vector<std::pair<NodeId, NodeId>>& layers, NodeId x) {
  NodeId h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = add_bias(t, matmul(t, h, layers[i].first), layers[i].second);
    if (i + 1 < layers.size()) h = relu(t, h);
  }
  return h;
}

}  // namespace

NetworkParams init_params(const ModelConfig& config) {
  validate(config);
  Rng rng(config.seed);
  NetworkParams p;
  int in = config.input_dim;
  for (int width : config.feature_dims) {
    p.feature_layers.push_back(init_layer(in, width, config.init_scale, rng));
    in = width;
  }
  const int feature_dim = config.feature_dims.back();
  p.classifier = init_layer(feature_dim, config.num_source_classes, config.init_scale, rng);
  in = feature_dim;
  for (int width : config.discriminator_dims) {
    p.discriminator_layers.push_back(init_layer(in, width, config.init_scale, rng));
    in = width;
  }
  p.discriminator_layers.push_back(init_layer(in, 2, config.init_scale, rng));
  return p;
}

std::vector<Matrix*> param_matrices(NetworkParams& p) {
  std::vector<Matrix*> out;
  for (auto& layer : p.feature_layers) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  out.push_back(&p.classifier.weight);
  out.push_back(&p.classifier.bias);
  for (auto& layer : p.discriminator_layers) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<const Matrix*> param_matrices(const NetworkParams& p) {
  std::vector<const Matrix*> out;
  for (const auto& layer : p.feature_layers) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  out.push_back(&p.classifier.weight);
  out.push_back(&p.classifier.bias);
  for (const auto& layer : p.discriminator_layers) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<ParamGroup> param_groups(const NetworkParams& p) {
  std::vector<ParamGroup> out;
  for (std::size_t i = 0; i < p.feature_layers.size(); ++i) {
    out.push_back(ParamGroup::kFeature);
    out.push_back(ParamGroup::kFeature);
  }
  out.push_back(ParamGroup::kClassifier);
  out.push_back(ParamGroup::kClassifier);
  for (std::size_t i = 0; i < p.discriminator_layers.size(); ++i) {
    out.push_back(ParamGroup::kDiscriminator);
    out.push_back(ParamGroup::kDiscriminator);
  }
  return out;
}

BoundParams bind_params(Tape& t, const NetworkParams& p) {
  BoundParams bound;
  for (const auto& layer : p.feature_layers) {
    NodeId w = t.leaf(layer.weight);
    NodeId b = t.leaf(layer.bias);
    bound.feature.emplace_back(w, b);
    bound.flat.push_back(w);
    bound.flat.push_back(b);
  }
  bound.classifier = {t.leaf(p.classifier.weight), t.leaf(p.classifier.bias)};
  bound.flat.push_back(bound.classifier.first);
  bound.flat.push_back(bound.classifier.second);
  for (const auto& layer : p.discriminator_layers) {
    NodeId w = t.leaf(layer.weight);
    NodeId b = t.leaf(layer.bias);
    bound.discriminator.emplace_back(w, b);
    bound.flat.push_back(w);
    bound.flat.push_back(b);
  }
  return bound;
}

NodeId feature_forward(Tape& t, const BoundParams& p, NodeId x) {
  return mlp_forward(t, p.feature, x);
}

NodeId classify_forward(Tape& t, const BoundParams& p, NodeId features) {
  return softmax_rows(t, add_bias(t, matmul(t, features, p.classifier.first),
                                  p.classifier.second));
}

NodeId domain_head_forward(Tape& t, const BoundParams& p, NodeId features) {
  return softmax_rows(t, mlp_forward(t, p.discriminator, features));
}

NodeId discriminate_forward(Tape& t, const BoundParams& p, NodeId features, double grl_coeff) {
  return domain_head_forward(t, p, grad_reversal(t, features, grl_coeff));
}

Matrix feature_values(const NetworkParams& p, const Matrix& x) {
  Tape t;
  BoundParams bound = bind_params(t, p);
  return t.value(feature_forward(t, bound, t.leaf(x)));
}

Matrix classify_probs(const NetworkParams& p, const Matrix& x) {
  Tape t;
  BoundParams bound = bind_params(t, p);
  NodeId f = feature_forward(t, bound, t.leaf(x));
  return t.value(classify_forward(t, bound, f));
}

namespace {

void append_matrix_line(std::ostringstream& out, const std::string& name, const Matrix& m) {
  out << name << ',' << m.rows() << ',' << m.cols();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_double(m(r, c));
  }
  out << '\n';
}

}  // namespace

std::string params_csv(const NetworkParams& p) {
  std::ostringstream out;
  for (std::size_t i = 0; i < p.feature_layers.size(); ++i) {
    append_matrix_line(out, "f" + std::to_string(i) + ".W", p.feature_layers[i].weight);
    append_matrix_line(out, "f" + std::to_string(i) + ".b", p.feature_layers[i].bias);
  }
  append_matrix_line(out, "y.W", p.classifier.weight);
  append_matrix_line(out, "y.b", p.classifier.bias);
  for (std::size_t i = 0; i < p.discriminator_layers.size(); ++i) {
    append_matrix_line(out, "d" + std::to_string(i) + ".W", p.discriminator_layers[i].weight);
    append_matrix_line(out, "d" + std::to_string(i) + ".b", p.discriminator_layers[i].bias);
  }
  return out.str();
}

void save_params_csv(const NetworkParams& p, const std::string& path) {
  write_file(path, params_csv(p));
}

NetworkParams load_params_csv(const std::string& path) {
  const auto lines = read_lines(path);
  std::map<std::string, Matrix> by_name;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const long line_no = static_cast<long>(i) + 1;
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() < 3) throw ParseError(path + ": too few fields", line_no);
    long long rows = 0, cols = 0;
    if (!try_parse_int(fields[1], rows) || !try_parse_int(fields[2], cols) || rows <= 0 ||
        cols <= 0) {
      throw ParseError(path + ": bad matrix header for '" + fields[0] + "'", line_no);
    }
    if (static_cast<long long>(fields.size()) != 3 + rows * cols) {
      throw ParseError(path + ": expected " + std::to_string(rows * cols) + " values for '" +
                           fields[0] + "', got " + std::to_string(fields.size() - 3),
                       line_no);
    }
    Matrix m(rows, cols);
    for (long long k = 0; k < rows * cols; ++k) {
      double v = 0.0;
      if (!try_parse_double(fields[static_cast<std::size_t>(3 + k)], v)) {
        throw ParseError(path + ": bad value in '" + fields[0] + "'", line_no);
      }
      m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = v;
    }
    if (!m.allFinite()) throw ParseError(path + ": non-finite entries in '" + fields[0] + "'",
                                         line_no);
    if (!by_name.emplace(fields[0], std::move(m)).second) {
      throw ParseError(path + ": duplicate matrix '" + fields[0] + "'", line_no);
    }
  }

  auto take = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ParseError(path + ": missing matrix '" + name + "'");
    Matrix m = std::move(it->second);
    by_name.erase(it);
    return m;
  };

  NetworkParams p;
  for (int i = 0; by_name.count("f" + std::to_string(i) + ".W"); ++i) {
    Layer layer;
    layer.weight = take("f" + std::to_string(i) + ".W");
    layer.bias = take("f" + std::to_string(i) + ".b");
    p.feature_layers.push_back(std::move(layer));
  }
  if (p.feature_layers.empty()) throw ParseError(path + ": no feature layers found");
  p.classifier.weight = take("y.W");
  p.classifier.bias = take("y.b");
  for (int i = 0; by_name.count("d" + std::to_string(i) + ".W"); ++i) {
    Layer layer;
    layer.weight = take("d" + std::to_string(i) + ".W");
    layer.bias = take("d" + std::to_string(i) + ".b");
    p.discriminator_layers.push_back(std::move(layer));
  }
  if (p.discriminator_layers.empty()) throw ParseError(path + ": no discriminator layers found");
  if (!by_name.empty()) {
    throw ParseError(path + ": unexpected matrix '" + by_name.begin()->first + "'");
  }

  // Layer shapes must chain.
  auto check_chain = [&](const std::vector<Layer>& layers, const std::string& what) {
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
      if (layers[i].weight.cols() != layers[i + 1].weight.rows()) {
        throw ParseError(path + ": " + what + " layer shapes do not chain at layer " +
                         std::to_string(i));
      }
    }
    for (const auto& layer : layers) {
      if (layer.bias.rows() != 1 || layer.bias.cols() != layer.weight.cols()) {
        throw ParseError(path + ": " + what + " bias shape mismatch");
      }
    }
  };
  check_chain(p.feature_layers, "feature");
  check_chain(p.discriminator_layers, "discriminator");
  if (p.classifier.weight.rows() != p.feature_layers.back().weight.cols() ||
      p.discriminator_layers.front().weight.rows() != p.feature_layers.back().weight.cols()) {
    throw ParseError(path + ": head input widths do not match the feature dimension");
  }
  if (p.classifier.bias.rows() != 1 || p.classifier.bias.cols() != p.classifier.weight.cols()) {
    throw ParseError(path + ": classifier bias shape mismatch");
  }
  if (p.discriminator_layers.back().weight.cols() != 2) {
    throw ParseError(path + ": discriminator must end in a 2-column layer");
  }
  return p;
}

}  // namespace pada
