#include "pada/runner.hpp"

#include "pada/errors.hpp"
#include "pada/io.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

namespace pada {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

std::string eval_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "target_accuracy," << format_double(report.target_accuracy) << '\n';
  out << "source_accuracy," << format_double(report.source_accuracy) << '\n';
  for (const auto& [cls, acc] : report.per_class_target_accuracy) {
    out << "class_" << cls << "_accuracy," << format_double(acc) << '\n';
  }
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) {
      out << "confusion_" << r << '_' << c << ',' << report.confusion(r, c) << '\n';
    }
  }
  return out.str();
}

int run_train_command(const ExperimentConfig& config) {
  validate(config);
  const Dataset ds = build_dataset(config);
  const ModelConfig mc =
      make_model_config(config, static_cast<int>(ds.source_x.cols()), ds.num_source_classes);
  validate(mc);

  const TrainResult result = train_run(ds, mc, config.train);

  ensure_dir(config.out_dir);
  write_history_csv(result.history, mc.num_source_classes, join_path(config.out_dir, "history.csv"));
  save_params_csv(result.params, join_path(config.out_dir, "params.csv"));

  double target_acc = std::numeric_limits<double>::quiet_NaN();
  if (ds.has_eval_labels()) {
    const EvalReport report = evaluate(result.params, ds);
    write_file(join_path(config.out_dir, "eval.csv"), eval_report_csv(report));
    target_acc = report.target_accuracy;
  } else {
    // No target labels: the accuracy is unavailable, record what is known.
    std::ostringstream out;
    out << "metric,value\n";
    out << "target_accuracy,nan\n";
    out << "source_accuracy," << format_double(source_accuracy(result.params, ds)) << '\n';
    write_file(join_path(config.out_dir, "eval.csv"), out.str());
  }
  std::cout << "target_acc=" << format_double(target_acc) << std::endl;
  return 0;
}

int run_sweep_command(const ExperimentConfig& config, const std::vector<int>& ks,
                      const std::vector<TrainMode>& modes, int jobs) {
  validate(config);
  if (ks.empty()) throw ParameterError("sweep: ks must be non-empty");
  const Dataset ds = build_dataset(config);
  const ModelConfig mc =
      make_model_config(config, static_cast<int>(ds.source_x.cols()), ds.num_source_classes);
  validate(mc);

  const auto cells = sweep_target_classes(ds, ks, mc, config.train, modes, jobs);
  ensure_dir(config.out_dir);
  write_sweep_csv(cells, join_path(config.out_dir, "sweep.csv"));

  int ok = 0;
  for (const auto& cell : cells) {
    if (cell.status == "ok") ++ok;
  }
  std::cout << "sweep_cells_ok=" << ok << "/" << cells.size() << std::endl;
  return ok > 0 ? 0 : 1;
}

int run_weights_command(const std::string& history_path,
                        const std::optional<ExperimentConfig>& config,
                        const std::string& out_dir) {
  const auto lines = read_lines(history_path);
  if (lines.empty()) throw ParseError(history_path + ": empty file", 1);
  const auto header = split(trim(lines[0]), ',');
  std::vector<std::size_t> gamma_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].rfind("gamma_", 0) == 0) gamma_cols.push_back(i);
  }
  if (gamma_cols.empty()) {
    throw ParseError(history_path + ": no gamma_ columns in the header", 1);
  }

  std::string last_row;
  long last_line_no = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!trim(lines[i]).empty()) {
      last_row = trim(lines[i]);
      last_line_no = static_cast<long>(i) + 1;
    }
  }
  if (last_row.empty()) throw ParseError(history_path + ": no data rows (epochs=0?)");

  const auto fields = split(last_row, ',');
  if (fields.size() != header.size()) {
    throw ParseError(history_path + ": row has " + std::to_string(fields.size()) +
                         " fields, header has " + std::to_string(header.size()),
                     last_line_no);
  }
  Vector gamma(static_cast<Eigen::Index>(gamma_cols.size()));
  for (std::size_t i = 0; i < gamma_cols.size(); ++i) {
    double v = 0.0;
    if (!try_parse_double(fields[gamma_cols[i]], v)) {
      throw ParseError(history_path + ": bad weight '" + fields[gamma_cols[i]] + "'",
                       last_line_no);
    }
    gamma(static_cast<Eigen::Index>(i)) = v;
  }

  std::ostringstream out;
  out << "class,weight\n";
  for (Eigen::Index c = 0; c < gamma.size(); ++c) {
    out << c << ',' << format_double(gamma(c)) << '\n';
  }

  if (config) {
    const Dataset ds = build_dataset(*config);
    if (!ds.target_class_set.empty() &&
        static_cast<Eigen::Index>(ds.num_source_classes) == gamma.size()) {
      ClassWeights weights{gamma, true};
      const WeightStats stats = weight_stats(weights, ds.target_class_set);
      out << "shared_mean," << format_double(stats.mean_shared) << '\n';
      out << "outlier_mean," << format_double(stats.mean_outlier) << '\n';
    }
  }

  ensure_dir(out_dir);
  write_file(join_path(out_dir, "weights.csv"), out.str());
  std::cout << "weights=" << gamma.size() << std::endl;
  return 0;
}

}  // namespace pada
