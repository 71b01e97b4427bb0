#pragma once

#include "pada/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pada {

// Marks a target row whose true class is not known.
inline constexpr int kUnknownLabel = -1;

struct Dataset {
  Matrix source_x;             // n_s x d
  std::vector<int> source_y;   // labels in [0, num_source_classes)
  Matrix target_x;             // n_t x d
  // Ground-truth target labels, held out for evaluation only. Training code
  // receives the target features without this field.
  std::vector<int> target_y_eval;
  int num_source_classes = 0;
  std::vector<int> target_class_set;  // ascending subset of the source classes

  bool has_eval_labels() const;
};

struct SynthConfig {
  int num_source_classes = 8;
  int num_target_classes = 4;  // target keeps the first k class indices
  int samples_per_class_source = 40;
  int samples_per_class_target = 40;
  int feature_dim = 2;
  double class_separation = 4.0;  // radius of the circle the class centers sit on
  // Rigid motion applied to target samples: rotation (radians, in the first
  // two dimensions) followed by a translation.
  double shift_rotation = 0.25;
  std::vector<double> shift_translation = {1.0, -0.5};
  double noise_std = 0.8;
  std::uint64_t seed = 7;
};

void validate(const SynthConfig& config);

// Gaussian class blobs on a circle (a seeded lattice when feature_dim > 2);
// target samples come from the same class-conditionals, rigidly shifted.
// Byte-reproducible from the seed.
Dataset make_synthetic(const SynthConfig& config);

struct CsvSchema {
  // Target class set to assume when the target file carries no labels.
  // Defaults to all source classes.
  std::optional<std::vector<int>> target_class_set;
};

// Files start with `dim=<d>,classes=<K>`, then one sample per line:
// d comma-separated reals followed by an integer label. Target labels may
// be -1 (unknown; excluded from evaluation).
Dataset load_csv(const std::string& source_path, const std::string& target_path,
                 const CsvSchema& schema = {});
void save_csv(const Dataset& ds, const std::string& source_path, const std::string& target_path);

// Keep only target samples of the first k target classes (ascending index).
// Source data is untouched. Requires evaluation labels.
Dataset subset_target_classes(const Dataset& ds, int k);

}  // namespace pada
