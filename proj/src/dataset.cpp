#include "pada/dataset.hpp"

#include "pada/errors.hpp"
#include "pada/io.hpp"
#include "pada/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace pada {

bool Dataset::has_eval_labels() const {
  for (int y : target_y_eval) {
    if (y != kUnknownLabel) return true;
  }
  return false;
}

void validate(const SynthConfig& config) {
  if (config.num_source_classes < 1) {
    throw ParameterError("synth: num_source_classes must be >= 1");
  }
  if (config.num_target_classes < 1 || config.num_target_classes > config.num_source_classes) {
    throw ParameterError("synth: num_target_classes must be in [1, num_source_classes]");
  }
  if (config.samples_per_class_source < 1 || config.samples_per_class_target < 1) {
    throw ParameterError("synth: samples per class must be >= 1");
  }
  if (config.feature_dim < 1) throw ParameterError("synth: feature_dim must be >= 1");
  if (config.noise_std < 0.0) throw ParameterError("synth: noise_std must be >= 0");
  if (config.shift_translation.size() != static_cast<std::size_t>(config.feature_dim)) {
    throw ParameterError("synth: shift_translation must have feature_dim (" +
                         std::to_string(config.feature_dim) + ") entries, got " +
                         std::to_string(config.shift_translation.size()));
  }
}

namespace {

// Class centers: evenly spaced on a circle of radius class_separation for
// 2-D data; for other dimensions, a seeded shuffle of a scaled integer
// lattice (distinct points by construction).
//
// On the circle, class indices are interleaved (coprime stride) rather than
// laid out in order, so the first k classes spread over the whole circle
// instead of forming one contiguous arc. Subsetting to a class prefix then
// leaves several separate holes in the source layout.
int circle_stride(int k) {
  if (k < 4) return 1;
  for (int s = (k + 2) / 3; s < k; ++s) {
    if (std::gcd(s, k) == 1) return s;
  }
  return 1;
}

std::vector<Vector> class_centers(const SynthConfig& config, Rng& rng) {
  const int k = config.num_source_classes;
  const int d = config.feature_dim;
  std::vector<Vector> centers;
  if (d == 2) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const int stride = circle_stride(k);
    for (int c = 0; c < k; ++c) {
      const int slot = static_cast<int>((static_cast<long long>(c) * stride) % k);
      const double angle = kTwoPi * static_cast<double>(slot) / static_cast<double>(k);
      Vector center(2);
      center << config.class_separation * std::cos(angle),
          config.class_separation * std::sin(angle);
      centers.push_back(center);
    }
    return centers;
  }
  int side = 1;
  while (std::pow(side, d) < static_cast<double>(k)) ++side;
  std::vector<Vector> lattice;
  std::vector<int> coord(static_cast<std::size_t>(d), 0);
  while (true) {
    Vector point(d);
    for (int i = 0; i < d; ++i) {
      point(i) = config.class_separation * (coord[static_cast<std::size_t>(i)] -
                                            0.5 * static_cast<double>(side - 1));
    }
    lattice.push_back(point);
    int i = 0;
    for (; i < d; ++i) {
      if (++coord[static_cast<std::size_t>(i)] < side) break;
      coord[static_cast<std::size_t>(i)] = 0;
    }
    if (i == d) break;
  }
  rng.shuffle(lattice);
  centers.assign(lattice.begin(), lattice.begin() + k);
  return centers;
}

Vector rigid_shift(const SynthConfig& config, const Vector& x) {
  Vector out = x;
  if (config.feature_dim >= 2) {
    const double c = std::cos(config.shift_rotation);
    const double s = std::sin(config.shift_rotation);
    const double x0 = out(0), x1 = out(1);
    out(0) = c * x0 - s * x1;
    out(1) = s * x0 + c * x1;
  }
  for (int i = 0; i < config.feature_dim; ++i) {
    out(i) += config.shift_translation[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

Dataset make_synthetic(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const auto centers = class_centers(config, rng);
  const int d = config.feature_dim;

  Dataset ds;
  ds.num_source_classes = config.num_source_classes;
  const int n_s = config.num_source_classes * config.samples_per_class_source;
  const int n_t = config.num_target_classes * config.samples_per_class_target;
  ds.source_x.resize(n_s, d);
  ds.target_x.resize(n_t, d);
  ds.source_y.reserve(static_cast<std::size_t>(n_s));
  ds.target_y_eval.reserve(static_cast<std::size_t>(n_t));

  int row = 0;
  for (int c = 0; c < config.num_source_classes; ++c) {
    for (int i = 0; i < config.samples_per_class_source; ++i, ++row) {
      for (int j = 0; j < d; ++j) {
        ds.source_x(row, j) = centers[static_cast<std::size_t>(c)](j) +
                              rng.normal(0.0, config.noise_std);
      }
      ds.source_y.push_back(c);
    }
  }
  row = 0;
  for (int c = 0; c < config.num_target_classes; ++c) {
    for (int i = 0; i < config.samples_per_class_target; ++i, ++row) {
      Vector point(d);
      for (int j = 0; j < d; ++j) {
        point(j) = centers[static_cast<std::size_t>(c)](j) + rng.normal(0.0, config.noise_std);
      }
      point = rigid_shift(config, point);
      for (int j = 0; j < d; ++j) ds.target_x(row, j) = point(j);
      ds.target_y_eval.push_back(c);
    }
  }
  for (int c = 0; c < config.num_target_classes; ++c) ds.target_class_set.push_back(c);
  return ds;
}

namespace {

void append_samples(std::ostringstream& out, const Matrix& x, const std::vector<int>& y) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out << format_double(x(r, c)) << ',';
    out << y[static_cast<std::size_t>(r)] << '\n';
  }
}

struct ParsedFile {
  Matrix x;
  std::vector<int> y;
  int dim = 0;
  int classes = 0;
};

ParsedFile parse_samples(const std::string& path, bool allow_unknown_labels) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty file", 1);

  // Header: dim=<d>,classes=<K>
  const auto header = split(trim(lines[0]), ',');
  long long dim = 0, classes = 0;
  bool ok = header.size() == 2 && header[0].rfind("dim=", 0) == 0 &&
            header[1].rfind("classes=", 0) == 0 && try_parse_int(header[0].substr(4), dim) &&
            try_parse_int(header[1].substr(8), classes) && dim >= 1 && classes >= 1;
  if (!ok) throw ParseError(path + ": bad header, expected dim=<d>,classes=<K>", 1);

  ParsedFile file;
  file.dim = static_cast<int>(dim);
  file.classes = static_cast<int>(classes);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const long line_no = static_cast<long>(i) + 1;
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (static_cast<long long>(fields.size()) != dim + 1) {
      throw ParseError(path + ": expected " + std::to_string(dim + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> values(static_cast<std::size_t>(dim));
    for (long long j = 0; j < dim; ++j) {
      if (!try_parse_double(fields[static_cast<std::size_t>(j)], values[static_cast<std::size_t>(j)])) {
        throw ParseError(path + ": bad value '" + fields[static_cast<std::size_t>(j)] + "'",
                         line_no);
      }
    }
    long long label = 0;
    if (!try_parse_int(fields.back(), label)) {
      throw ParseError(path + ": bad label '" + fields.back() + "'", line_no);
    }
    if (label >= classes) {
      throw ParseError(path + ": label " + std::to_string(label) + " >= classes (" +
                           std::to_string(classes) + ")",
                       line_no);
    }
    if (label < 0 && !(allow_unknown_labels && label == kUnknownLabel)) {
      throw ParseError(path + ": bad label " + std::to_string(label), line_no);
    }
    rows.push_back(std::move(values));
    file.y.push_back(static_cast<int>(label));
  }
  if (rows.empty()) throw ParseError(path + ": no samples");
  file.x.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (long long c = 0; c < dim; ++c) {
      file.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][static_cast<std::size_t>(c)];
    }
  }
  return file;
}

}  // namespace

Dataset load_csv(const std::string& source_path, const std::string& target_path,
                 const CsvSchema& schema) {
  ParsedFile source = parse_samples(source_path, false);
  ParsedFile target = parse_samples(target_path, true);
  if (source.dim != target.dim) {
    throw ParseError("source dim " + std::to_string(source.dim) + " != target dim " +
                     std::to_string(target.dim));
  }
  if (source.classes != target.classes) {
    throw ParseError("source classes " + std::to_string(source.classes) + " != target classes " +
                     std::to_string(target.classes));
  }

  Dataset ds;
  ds.source_x = std::move(source.x);
  ds.source_y = std::move(source.y);
  ds.target_x = std::move(target.x);
  ds.target_y_eval = std::move(target.y);
  ds.num_source_classes = source.classes;

  std::set<int> seen;
  for (int y : ds.target_y_eval) {
    if (y != kUnknownLabel) seen.insert(y);
  }
  if (!seen.empty()) {
    ds.target_class_set.assign(seen.begin(), seen.end());
  } else if (schema.target_class_set) {
    ds.target_class_set = *schema.target_class_set;
    std::sort(ds.target_class_set.begin(), ds.target_class_set.end());
    for (int c : ds.target_class_set) {
      if (c < 0 || c >= ds.num_source_classes) {
        throw ParameterError("load_csv: declared target class " + std::to_string(c) +
                             " outside the source label space");
      }
    }
  } else {
    for (int c = 0; c < ds.num_source_classes; ++c) ds.target_class_set.push_back(c);
  }
  return ds;
}

void save_csv(const Dataset& ds, const std::string& source_path, const std::string& target_path) {
  const std::string header = "dim=" + std::to_string(ds.source_x.cols()) +
                             ",classes=" + std::to_string(ds.num_source_classes) + "\n";
  std::ostringstream src;
  src << header;
  append_samples(src, ds.source_x, ds.source_y);
  write_file(source_path, src.str());

  std::ostringstream tgt;
  tgt << header;
  append_samples(tgt, ds.target_x, ds.target_y_eval);
  write_file(target_path, tgt.str());
}

Dataset subset_target_classes(const Dataset& ds, int k) {
  if (k < 1 || k > static_cast<int>(ds.target_class_set.size())) {
    throw ParameterError("subset_target_classes: k=" + std::to_string(k) +
                         " outside [1," + std::to_string(ds.target_class_set.size()) + "]");
  }
  if (!ds.has_eval_labels()) {
    throw StateError("subset_target_classes: target samples carry no labels to subset by");
  }
  std::set<int> kept(ds.target_class_set.begin(), ds.target_class_set.begin() + k);

  std::vector<Eigen::Index> rows;
  for (Eigen::Index r = 0; r < ds.target_x.rows(); ++r) {
    const int y = ds.target_y_eval[static_cast<std::size_t>(r)];
    if (y != kUnknownLabel && kept.count(y)) rows.push_back(r);
  }
  Dataset out;
  out.source_x = ds.source_x;
  out.source_y = ds.source_y;
  out.num_source_classes = ds.num_source_classes;
  out.target_class_set.assign(kept.begin(), kept.end());
  out.target_x.resize(static_cast<Eigen::Index>(rows.size()), ds.target_x.cols());
  out.target_y_eval.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.target_x.row(static_cast<Eigen::Index>(i)) = ds.target_x.row(rows[i]);
    out.target_y_eval.push_back(ds.target_y_eval[static_cast<std::size_t>(rows[i])]);
  }
  return out;
}

}  // namespace pada
