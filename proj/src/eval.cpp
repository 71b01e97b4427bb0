#include "pada/eval.hpp"

#include "pada/errors.hpp"
#include "pada/io.hpp"
#include "pada/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace pada {

std::vector<int> predict_labels(const NetworkParams& params, const Matrix& x) {
  const Matrix probs = classify_probs(params, x);
  std::vector<int> labels(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c) {
      if (probs(r, c) > probs(r, best)) best = static_cast<int>(c);
    }
    labels[static_cast<std::size_t>(r)] = best;
  }
  return labels;
}

double source_accuracy(const NetworkParams& params, const Dataset& ds) {
  if (ds.source_x.rows() == 0) throw MetricError("source_accuracy: no source samples");
  const auto predicted = predict_labels(params, ds.source_x);
  long correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == ds.source_y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

EvalReport evaluate(const NetworkParams& params, const Dataset& ds) {
  if (!ds.has_eval_labels()) {
    throw MetricError("evaluate: target samples carry no evaluation labels");
  }
  EvalReport report;
  report.source_accuracy = source_accuracy(params, ds);
  report.confusion = Eigen::MatrixXi::Zero(ds.num_source_classes, ds.num_source_classes);

  const auto predicted = predict_labels(params, ds.target_x);
  long total = 0;
  long correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int truth = ds.target_y_eval[i];
    if (truth == kUnknownLabel) continue;
    report.confusion(truth, predicted[i]) += 1;
    ++total;
    if (predicted[i] == truth) ++correct;
  }
  report.target_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  for (int c = 0; c < ds.num_source_classes; ++c) {
    const int row_total = report.confusion.row(c).sum();
    if (row_total > 0) {
      report.per_class_target_accuracy[c] =
          static_cast<double>(report.confusion(c, c)) / static_cast<double>(row_total);
    }
  }
  return report;
}

WeightStats weight_stats(const ClassWeights& weights, const std::vector<int>& shared) {
  if (shared.empty()) throw ParameterError("weight_stats: shared class set is empty");
  const auto num_classes = static_cast<int>(weights.gamma.size());
  std::set<int> shared_set;
  for (int c : shared) {
    if (c < 0 || c >= num_classes) {
      throw ParameterError("weight_stats: class " + std::to_string(c) + " outside [0," +
                           std::to_string(num_classes) + ")");
    }
    shared_set.insert(c);
  }
  WeightStats stats;
  stats.full_vector = weights.gamma;
  for (int c = 0; c < num_classes; ++c) {
    if (shared_set.count(c)) {
      stats.sum_shared += weights.gamma(c);
      ++stats.shared_count;
    } else {
      stats.sum_outlier += weights.gamma(c);
      ++stats.outlier_count;
    }
  }
  stats.mean_shared = stats.sum_shared / static_cast<double>(stats.shared_count);
  stats.mean_outlier =
      stats.outlier_count > 0 ? stats.sum_outlier / static_cast<double>(stats.outlier_count) : 0.0;
  return stats;
}

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

CellSeeds sweep_cell_seeds(std::uint64_t base_seed, int k, TrainMode mode) {
  std::string bytes;
  for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((base_seed >> (8 * i)) & 0xff));
  const auto uk = static_cast<std::uint64_t>(k);
  for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((uk >> (8 * i)) & 0xff));
  bytes += mode_name(mode);
  const std::uint64_t h = fnv1a64(bytes);
  return {splitmix64(h), splitmix64(h ^ 0x9e3779b97f4a7c15ULL)};
}

std::vector<SweepCell> sweep_target_classes(const Dataset& base, const std::vector<int>& ks,
                                            const ModelConfig& mc, const TrainConfig& tc,
                                            const std::vector<TrainMode>& modes, int jobs) {
  if (ks.empty()) throw ParameterError("sweep: ks must be non-empty");
  if (modes.empty()) throw ParameterError("sweep: modes must be non-empty");

  std::vector<SweepCell> cells;
  for (int k : ks) {
    for (TrainMode mode : modes) {
      SweepCell cell;
      cell.k = k;
      cell.mode = mode;
      cells.push_back(cell);
    }
  }

  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, static_cast<int>(cells.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Dataset ds = subset_target_classes(base, cell.k);
        ModelConfig cell_mc = mc;
        TrainConfig cell_tc = tc;
        const CellSeeds seeds = sweep_cell_seeds(tc.seed, cell.k, cell.mode);
        cell_mc.seed = seeds.model_seed;
        cell_tc.seed = seeds.train_seed;
        cell_tc.mode = cell.mode;
        const TrainResult result = train_run(ds, cell_mc, cell_tc);
        const EvalReport report = evaluate(result.params, ds);
        cell.target_acc = report.target_accuracy;
        cell.src_acc = report.source_accuracy;
        cell.status = "ok";
      } catch (const std::exception& e) {
        cell.status = std::string("error: ") + e.what();
      }
      cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "k,mode,target_acc,src_acc,seconds,status\n";
  for (const auto& c : cells) {
    std::string status = c.status;
    std::replace(status.begin(), status.end(), ',', ';');  // keep the CSV well-formed
    out << c.k << ',' << mode_name(c.mode) << ',' << format_double(c.target_acc) << ','
        << format_double(c.src_acc) << ',' << format_double(c.seconds) << ',' << status << '\n';
  }
  return out.str();
}

void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path) {
  write_file(path, sweep_csv(cells));
}

}  // namespace pada
