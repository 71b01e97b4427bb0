#pragma once

#include "pada/config.hpp"
#include "pada/eval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pada {

// Runs a full training experiment: writes history.csv, params.csv and
// eval.csv into config.out_dir and prints `target_acc=<value>`.
int run_train_command(const ExperimentConfig& config);

// Target-class-count sweep over (k, mode) cells; writes sweep.csv.
// Exit status 0 iff at least one cell succeeded.
int run_sweep_command(const ExperimentConfig& config, const std::vector<int>& ks,
                      const std::vector<TrainMode>& modes, int jobs);

// Extracts the final-epoch class weights from a history CSV into
// weights.csv (class,weight rows, plus shared/outlier means when the
// config's target class set is known).
int run_weights_command(const std::string& history_path,
                        const std::optional<ExperimentConfig>& config,
                        const std::string& out_dir);

std::string eval_report_csv(const EvalReport& report);

}  // namespace pada
