// End-to-end acceptance suite. Runs every shipping criterion at its stated
// tolerance and prints one pass/fail line per criterion.
//
// Usage: acceptance <path-to-cli-binary> [path-to-fixture-config]

#include "pada/config.hpp"
#include "pada/errors.hpp"
#include "pada/eval.hpp"
#include "pada/io.hpp"
#include "pada/runner.hpp"
#include "pada/tape.hpp"
#include "pada/train.hpp"

#include "support/gradcheck.hpp"
#include "support/reference_objective.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace pada;
using pada::test::central_diff;
using pada::test::compare_grads;

namespace {

std::string g_cli_path;
ExperimentConfig g_fixture;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::ostringstream log;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      log << "    FAILED: " << what << "\n";
    }
  }
  void note(const std::string& what) { log << "    " << what << "\n"; }
};

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -2.0,
                     double hi = 2.0) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

// ---------------------------------------------------------------------------
// criterion 1: analytic gradients vs central finite differences, all ops and
// the full weighted objective, >= 20 seeds, within rel 1e-4, under 10 s.
// ---------------------------------------------------------------------------

bool check_op_gradients(Rng& rng, Check& check) {
  const auto rows = static_cast<Eigen::Index>(2 + rng.index(5));
  const auto cols = static_cast<Eigen::Index>(2 + rng.index(5));
  const auto inner = static_cast<Eigen::Index>(2 + rng.index(5));

  {  // matmul (both inputs) + sum
    Matrix a0 = random_matrix(rng, rows, inner);
    Matrix b0 = random_matrix(rng, inner, cols);
    Tape t;
    NodeId a = t.leaf(a0), b = t.leaf(b0);
    auto grads = t.backward(sum(t, matmul(t, a, b)));
    auto fa = [&](const Matrix& m) {
      Tape s;
      return s.value(sum(s, matmul(s, s.leaf(m), s.leaf(b0))))(0, 0);
    };
    auto fb = [&](const Matrix& m) {
      Tape s;
      return s.value(sum(s, matmul(s, s.leaf(a0), s.leaf(m))))(0, 0);
    };
    check.require(compare_grads(grads[a], central_diff(fa, a0)).ok, "matmul grad (lhs)");
    check.require(compare_grads(grads[b], central_diff(fb, b0)).ok, "matmul grad (rhs)");
  }
  {  // add_bias + relu (inputs kept away from the kink) + scale/add
    Matrix x0 = random_matrix(rng, rows, cols);
    Matrix b0 = random_matrix(rng, 1, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double pre = x0(r, c) + b0(0, c);  // the relu input
        if (std::abs(pre) < 1e-2) x0(r, c) += pre >= 0.0 ? 0.5 : -0.5;
      }
    }
    Matrix mix = random_matrix(rng, cols, 1);
    auto f = [&](const Matrix& xm, const Matrix& bm) {
      Tape s;
      NodeId h = relu(s, add_bias(s, s.leaf(xm), s.leaf(bm)));
      NodeId readout = add(s, sum(s, matmul(s, h, s.leaf(mix))), scale(s, sum(s, h), 0.3));
      return s.value(readout)(0, 0);
    };
    Tape t;
    NodeId x = t.leaf(x0), b = t.leaf(b0);
    NodeId h = relu(t, add_bias(t, x, b));
    NodeId readout = add(t, sum(t, matmul(t, h, t.leaf(mix))), scale(t, sum(t, h), 0.3));
    auto grads = t.backward(readout);
    auto fd_x = central_diff([&](const Matrix& m) { return f(m, b0); }, x0);
    auto fd_b = central_diff([&](const Matrix& m) { return f(x0, m); }, b0);
    check.require(compare_grads(grads[x], fd_x).ok, "relu/add_bias grad (input)");
    check.require(compare_grads(grads[b], fd_b).ok, "relu/add_bias grad (bias)");
  }
  {  // softmax + cross-entropy chain on logits
    Matrix logits0 = random_matrix(rng, rows, cols, -3.0, 3.0);
    std::vector<int> labels;
    std::vector<double> weights;
    for (Eigen::Index r = 0; r < rows; ++r) {
      labels.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(cols))));
      weights.push_back(rng.uniform(0.1, 1.0));
    }
    Tape t;
    NodeId logits = t.leaf(logits0);
    auto grads = t.backward(cross_entropy(t, softmax_rows(t, logits), labels, weights));
    auto f = [&](const Matrix& m) {
      Tape s;
      return s.value(cross_entropy(s, softmax_rows(s, s.leaf(m)), labels, weights))(0, 0);
    };
    check.require(compare_grads(grads[logits], central_diff(f, logits0)).ok,
                  "softmax+cross_entropy grad");
  }
  {  // cross-entropy directly on probabilities
    Matrix p0(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) p0(r, c) = rng.uniform(0.05, 0.9);
    }
    std::vector<int> labels;
    for (Eigen::Index r = 0; r < rows; ++r) {
      labels.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(cols))));
    }
    Tape t;
    NodeId p = t.leaf(p0);
    auto grads = t.backward(cross_entropy(t, p, labels));
    auto f = [&](const Matrix& m) {
      Tape s;
      return s.value(cross_entropy(s, s.leaf(m), labels))(0, 0);
    };
    check.require(compare_grads(grads[p], central_diff(f, p0)).ok, "cross_entropy grad");
  }
  return check.ok;
}

// Smallest |pre-activation| feeding any relu on the tape. Finite differences
// are only trustworthy when every relu input is clear of the kink.
double min_relu_margin(const Tape& t) {
  double margin = std::numeric_limits<double>::infinity();
  for (NodeId id = 0; id < t.size(); ++id) {
    if (t.node(id).op == OpKind::kRelu) {
      margin = std::min(margin, t.value(t.node(id).a).cwiseAbs().minCoeff());
    }
  }
  return margin;
}

bool check_composite_gradients(Rng& rng, Check& check) {
  ModelConfig mc;
  mc.input_dim = 2;
  mc.feature_dims = {3, 2};
  mc.num_source_classes = 3;
  mc.discriminator_dims = {3};

  const Eigen::Index n = 3;
  NetworkParams p0;
  Matrix sx, tx;
  std::vector<int> sy;

  // resample until every relu input is >= 1e-3 from the kink
  for (int attempt = 0;; ++attempt) {
    if (attempt > 200) {
      check.require(false, "could not sample a kink-free composite configuration");
      return false;
    }
    mc.seed = rng.raw();
    p0 = init_params(mc);
    sx = random_matrix(rng, n, 2);
    tx = random_matrix(rng, n, 2);
    sy.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      sy.push_back(static_cast<int>(rng.index(3)));
    }
    Tape probe;
    BoundParams bound = bind_params(probe, p0);
    NodeId fs = feature_forward(probe, bound, probe.leaf(sx));
    NodeId ft = feature_forward(probe, bound, probe.leaf(tx));
    domain_head_forward(probe, bound, fs);
    domain_head_forward(probe, bound, ft);
    if (min_relu_margin(probe) >= 1e-3) break;
  }

  std::vector<double> gamma;
  for (int c = 0; c < 3; ++c) gamma.push_back(rng.uniform(0.05, 1.0));
  std::vector<double> w;
  for (int y : sy) w.push_back(gamma[static_cast<std::size_t>(y)]);
  const double lambda = rng.uniform();

  // The objective as a plain scalar function of the parameters (no reversal
  // layer, so its tape gradient must equal finite differences everywhere).
  auto build_objective = [&](Tape& t, const NetworkParams& p, BoundParams& bound) {
    bound = bind_params(t, p);
    NodeId fs = feature_forward(t, bound, t.leaf(sx));
    NodeId ft = feature_forward(t, bound, t.leaf(tx));
    NodeId cls = cross_entropy(t, classify_forward(t, bound, fs), sy, w);
    NodeId ds = cross_entropy(t, domain_head_forward(t, bound, fs),
                              std::vector<int>(static_cast<std::size_t>(n), 0), w);
    NodeId dt = cross_entropy(t, domain_head_forward(t, bound, ft),
                              std::vector<int>(static_cast<std::size_t>(n), 1));
    return add(t, cls, scale(t, add(t, ds, dt), lambda));
  };
  auto objective_value = [&](const NetworkParams& p) {
    Tape t;
    BoundParams bound;
    return t.value(build_objective(t, p, bound))(0, 0);
  };

  Tape t;
  BoundParams bound;
  const NodeId obj = build_objective(t, p0, bound);
  const auto grads = t.backward(obj);

  auto flat = param_matrices(p0);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    NetworkParams probe = p0;
    Matrix* target = param_matrices(probe)[i];
    auto fd = central_diff(
        [&](const Matrix& m) {
          *target = m;
          return objective_value(probe);
        },
        *flat[i]);
    check.require(compare_grads(grads[bound.flat[i]], fd).ok,
                  "composite objective grad, parameter " + std::to_string(i));
  }
  return check.ok;
}

bool criterion_1(Check& check) {
  const double t0 = now_seconds();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    check_op_gradients(rng, check);
    check_composite_gradients(rng, check);
    if (!check.ok) break;
  }
  const double elapsed = now_seconds() - t0;
  check.note("elapsed " + std::to_string(elapsed) + " s (budget 10 s)");
  check.require(elapsed < 10.0, "runtime under 10 s");
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 2: pada_step's reported objective matches the loop-based scalar
// reference on 50 random batches within 1e-10.
// ---------------------------------------------------------------------------

bool criterion_2(Check& check) {
  Rng rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const int classes = 2 + static_cast<int>(rng.index(5));  // [2,6]
    const int n_s = 1 + static_cast<int>(rng.index(8));
    const int n_t = 1 + static_cast<int>(rng.index(8));

    ModelConfig mc;
    mc.input_dim = 2;
    mc.feature_dims = {4, 3};
    mc.num_source_classes = classes;
    mc.discriminator_dims = {3};
    mc.seed = rng.raw();

    TrainConfig tc;
    tc.mode = TrainMode::kPada;
    TrainState state = make_train_state(mc, tc);
    Vector gamma(classes);
    for (int c = 0; c < classes; ++c) gamma(c) = rng.uniform(0.01, 1.0);
    gamma /= gamma.maxCoeff();
    state.class_weights = ClassWeights{gamma, true};
    state.progress = rng.uniform();

    SourceBatch source;
    source.x = random_matrix(rng, n_s, 2);
    for (int i = 0; i < n_s; ++i) {
      source.y.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(classes))));
    }
    const Matrix target = random_matrix(rng, n_t, 2);

    const NetworkParams before = state.params;
    const double lambda = lambda_at(tc, state.progress);
    const StepLosses losses = pada_step(state, tc, source, target);

    std::vector<double> w;
    for (int y : source.y) w.push_back(gamma(y));
    const double expected =
        test::reference_objective(before, source.x, source.y, target, w, w, lambda);
    if (std::abs(losses.total_objective - expected) > 1e-10) {
      check.require(false, "objective mismatch at trial " + std::to_string(trial) + ": " +
                               format_double(losses.total_objective) + " vs " +
                               format_double(expected));
      return false;
    }
  }
  check.note("50 batches within 1e-10");
  return true;
}

// ---------------------------------------------------------------------------
// criterion 3: weight estimation and normalization invariants over 100
// random probability matrices.
// ---------------------------------------------------------------------------

bool criterion_3(Check& check) {
  Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.index(24));
    const auto cols = static_cast<Eigen::Index>(2 + rng.index(7));
    Matrix probs(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      double total = 0.0;
      for (Eigen::Index c = 0; c < cols; ++c) {
        probs(r, c) = std::exp(rng.uniform(-4.0, 4.0));
        total += probs(r, c);
      }
      probs.row(r) /= total;
    }
    const ClassWeights est = estimate_class_weights(probs);
    check.require(std::abs(est.gamma.sum() - 1.0) <= 1e-9, "estimated weights sum to 1");

    const ClassWeights norm = normalize_weights(est);
    check.require(norm.gamma.maxCoeff() == 1.0, "normalized max is exactly 1");
    const ClassWeights twice = normalize_weights(norm);
    check.require((twice.gamma - norm.gamma).cwiseAbs().maxCoeff() == 0.0,
                  "normalization is idempotent");
    for (Eigen::Index j = 0; j < cols && check.ok; ++j) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        if (est.gamma(k) > 0.0) {
          const double before = est.gamma(j) / est.gamma(k);
          const double after = norm.gamma(j) / norm.gamma(k);
          if (std::abs(before - after) > 1e-12 * std::max(1.0, std::abs(before))) {
            check.require(false, "ratio preservation");
            break;
          }
        }
      }
    }
    if (!check.ok) return false;
  }
  check.note("100 matrices checked");
  return true;
}

// ---------------------------------------------------------------------------
// fixture-based training criteria (4-8)
// ---------------------------------------------------------------------------

struct FixtureRun {
  double target_acc = 0.0;
  double shared_mean = 0.0;
  double outlier_mean = 0.0;
  double seconds = 0.0;
};

constexpr int kNumSeeds = 5;

SynthConfig fixture_data(int seed_index) {
  SynthConfig c = g_fixture.synth;
  c.seed = 100 + static_cast<std::uint64_t>(seed_index);
  return c;
}

ModelConfig fixture_model(int seed_index) {
  ModelConfig mc = make_model_config(g_fixture, g_fixture.synth.feature_dim,
                                     g_fixture.synth.num_source_classes);
  mc.seed = 200 + static_cast<std::uint64_t>(seed_index);
  return mc;
}

TrainConfig fixture_train(TrainMode mode, int seed_index) {
  TrainConfig tc = g_fixture.train;
  tc.mode = mode;
  tc.seed = 300 + static_cast<std::uint64_t>(seed_index);
  return tc;
}

FixtureRun run_fixture(TrainMode mode, int seed_index) {
  const double t0 = now_seconds();
  const Dataset ds = make_synthetic(fixture_data(seed_index));
  const TrainResult result = train_run(ds, fixture_model(seed_index), fixture_train(mode, seed_index));
  FixtureRun run;
  run.target_acc = evaluate(result.params, ds).target_accuracy;
  if (!result.history.empty()) {
    run.shared_mean = result.history.back().shared_weight_mean;
    run.outlier_mean = result.history.back().outlier_weight_mean;
  }
  run.seconds = now_seconds() - t0;
  return run;
}

std::map<TrainMode, std::vector<FixtureRun>>& fixture_runs() {
  static std::map<TrainMode, std::vector<FixtureRun>> runs = [] {
    std::map<TrainMode, std::vector<FixtureRun>> out;
    for (TrainMode mode :
         {TrainMode::kSourceOnly, TrainMode::kDann, TrainMode::kPada,
          TrainMode::kPadaClassifierOnly, TrainMode::kPadaAdversarialOnly}) {
      for (int s = 1; s <= kNumSeeds; ++s) out[mode].push_back(run_fixture(mode, s));
    }
    return out;
  }();
  return runs;
}

// sweep over k = 8,6,4,2 for dann and pada, one table per seed
const std::vector<int> kSweepKs = {8, 6, 4, 2};

std::vector<std::map<std::pair<int, TrainMode>, double>>& sweep_runs() {
  static std::vector<std::map<std::pair<int, TrainMode>, double>> tables = [] {
    std::vector<std::map<std::pair<int, TrainMode>, double>> out;
    for (int s = 1; s <= kNumSeeds; ++s) {
      SynthConfig c = fixture_data(s);
      c.num_target_classes = c.num_source_classes;  // base holds all classes
      const Dataset base = make_synthetic(c);
      TrainConfig tc = g_fixture.train;
      tc.seed = 300 + static_cast<std::uint64_t>(s);
      const auto cells = sweep_target_classes(base, kSweepKs, fixture_model(s), tc,
                                              {TrainMode::kDann, TrainMode::kPada}, 0);
      std::map<std::pair<int, TrainMode>, double> table;
      for (const auto& cell : cells) {
        if (cell.status != "ok") {
          throw Error("sweep cell failed: " + cell.status);
        }
        table[{cell.k, cell.mode}] = cell.target_acc;
      }
      out.push_back(std::move(table));
    }
    return out;
  }();
  return tables;
}

bool criterion_4(Check& check) {
  const Dataset ds = make_synthetic(fixture_data(1));
  const ModelConfig mc = fixture_model(1);
  TrainConfig pada_tc = fixture_train(TrainMode::kPada, 1);
  pada_tc.epochs = 5;
  pada_tc.freeze_uniform_weights = true;
  TrainConfig dann_tc = fixture_train(TrainMode::kDann, 1);
  dann_tc.epochs = 5;

  const TrainResult a = train_run(ds, mc, pada_tc);
  const TrainResult b = train_run(ds, mc, dann_tc);
  const std::string csv_a = history_csv(a.history, mc.num_source_classes);
  const std::string csv_b = history_csv(b.history, mc.num_source_classes);
  check.require(csv_a == csv_b, "histories are bit-identical");
  auto ma = param_matrices(a.params);
  auto mb = param_matrices(b.params);
  for (std::size_t i = 0; i < ma.size(); ++i) {
    check.require(bitwise_equal(*ma[i], *mb[i]), "parameters are bit-identical");
    if (!check.ok) break;
  }
  return check.ok;
}

bool criterion_5(Check& check) {
  const auto& runs = fixture_runs();
  double source_only_mean = 0.0;
  for (const auto& run : runs.at(TrainMode::kSourceOnly)) source_only_mean += run.target_acc;
  source_only_mean /= kNumSeeds;
  check.note("source-only mean target accuracy " + format_double(source_only_mean));
  check.require(source_only_mean >= 0.5 && source_only_mean <= 0.9,
                "fixture: source-only accuracy in [0.5, 0.9]");

  int good = 0;
  for (const auto& run : runs.at(TrainMode::kPada)) {
    check.note("pada shared-mean " + format_double(run.shared_mean) + " outlier-mean " +
               format_double(run.outlier_mean) + " (" + format_double(run.seconds) + " s)");
    if (run.shared_mean >= 2.0 * run.outlier_mean) ++good;
    check.require(run.seconds < 60.0, "runtime under 60 s per seed");
  }
  check.require(good >= 4, "shared weights >= 2x outlier weights on >= 4 of 5 seeds (got " +
                               std::to_string(good) + ")");
  return check.ok;
}

bool criterion_6(Check& check) {
  const auto& runs = fixture_runs();
  int ordered = 0;
  for (int s = 0; s < kNumSeeds; ++s) {
    const double pada = runs.at(TrainMode::kPada)[s].target_acc;
    const double dann = runs.at(TrainMode::kDann)[s].target_acc;
    const double src = runs.at(TrainMode::kSourceOnly)[s].target_acc;
    check.note("seed " + std::to_string(s + 1) + ": pada " + format_double(pada) + ", dann " +
               format_double(dann) + ", source-only " + format_double(src));
    if (pada >= dann && pada >= src) ++ordered;
  }
  check.require(ordered >= 4, "pada >= dann and pada >= source-only on >= 4 of 5 seeds (got " +
                                  std::to_string(ordered) + ")");

  for (int k : kSweepKs) {
    if (k == static_cast<int>(g_fixture.synth.num_source_classes)) continue;
    int nonneg = 0;
    for (const auto& table : sweep_runs()) {
      if (table.at({k, TrainMode::kPada}) >= table.at({k, TrainMode::kDann})) ++nonneg;
    }
    check.note("k=" + std::to_string(k) + ": pada >= dann on " + std::to_string(nonneg) + "/5");
    check.require(nonneg >= 3, "pada margin non-negative at k=" + std::to_string(k) +
                                   " on a majority of seeds");
  }
  return check.ok;
}

bool criterion_7(Check& check) {
  const int full = g_fixture.synth.num_source_classes;
  double gap = 0.0;
  for (const auto& table : sweep_runs()) {
    gap += std::abs(table.at({full, TrainMode::kPada}) - table.at({full, TrainMode::kDann}));
  }
  gap /= kNumSeeds;
  check.note("mean |pada - dann| at k=" + std::to_string(full) + ": " + format_double(gap));
  check.require(gap <= 0.05, "gap at full label overlap <= 0.05");
  return check.ok;
}

bool criterion_8(Check& check) {
  const auto& runs = fixture_runs();
  for (TrainMode ablation : {TrainMode::kPadaClassifierOnly, TrainMode::kPadaAdversarialOnly}) {
    int wins = 0;
    for (int s = 0; s < kNumSeeds; ++s) {
      const double pada = runs.at(TrainMode::kPada)[s].target_acc;
      const double abl = runs.at(ablation)[s].target_acc;
      if (pada >= abl) ++wins;
    }
    check.note(std::string(mode_name(ablation)) + ": pada wins/ties " + std::to_string(wins) +
               "/5");
    check.require(wins >= 3, std::string("pada >= ") + mode_name(ablation) +
                                 " on a majority of seeds");
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 9: byte-identical CLI runs; exact CSV round-trips.
// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool criterion_9(Check& check) {
  const auto base = std::filesystem::temp_directory_path() / "pada_acceptance";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);

  // two identical CLI invocations
  for (int run = 1; run <= 2; ++run) {
    const auto out = base / ("run" + std::to_string(run));
    std::ostringstream cmd;
    cmd << '"' << g_cli_path << "\" train --set epochs=6 --set num_source_classes=6"
        << " --set num_target_classes=3 --set samples_per_class_source=20"
        << " --set samples_per_class_target=20 --out \"" << out.string() << '"' << " > \""
        << (base / ("stdout" + std::to_string(run) + ".txt")).string() << '"';
    const int status = std::system(cmd.str().c_str());
    check.require(status == 0, "cli train exits 0 (run " + std::to_string(run) + ")");
  }
  for (const char* file : {"history.csv", "params.csv", "eval.csv"}) {
    check.require(std::filesystem::exists(base / "run1" / file),
                  std::string("artifact exists: ") + file);
  }
  check.require(!slurp(base / "run1" / "history.csv").empty(), "history has content");
  check.require(slurp(base / "run1" / "history.csv") == slurp(base / "run2" / "history.csv"),
                "history bytes identical across runs");
  check.require(slurp(base / "run1" / "params.csv") == slurp(base / "run2" / "params.csv"),
                "params bytes identical across runs");
  const std::string stdout1 = slurp(base / "stdout1.txt");
  check.require(stdout1.find("target_acc=") != std::string::npos,
                "cli prints target_acc=<value>");

  // parameter CSV round-trip
  const NetworkParams p = init_params(fixture_model(1));
  const auto params_path = base / "params_roundtrip.csv";
  save_params_csv(p, params_path.string());
  const NetworkParams loaded = load_params_csv(params_path.string());
  check.require(params_csv(p) == params_csv(loaded), "parameter CSV round-trip is exact");

  // dataset CSV round-trip
  const Dataset ds = make_synthetic(fixture_data(1));
  const auto src = base / "source.csv";
  const auto tgt = base / "target.csv";
  save_csv(ds, src.string(), tgt.string());
  const Dataset ds2 = load_csv(src.string(), tgt.string());
  check.require(bitwise_equal(ds.source_x, ds2.source_x) &&
                    bitwise_equal(ds.target_x, ds2.target_x) && ds.source_y == ds2.source_y &&
                    ds.target_y_eval == ds2.target_y_eval &&
                    ds.target_class_set == ds2.target_class_set,
                "dataset CSV round-trip is exact");

  std::filesystem::remove_all(base);
  return check.ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <cli-binary> [fixture-config]\n";
    return 2;
  }
  g_cli_path = argv[1];
  const std::string fixture_path =
      argc > 2 ? argv[2] : std::string(FIXTURE_CONFIG_PATH);
  try {
    g_fixture = load_config(fixture_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot load fixture config: " << e.what() << "\n";
    return 2;
  }

  struct Criterion {
    const char* name;
    std::function<bool(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 gradient correctness (all ops + full objective, 20 seeds)", criterion_1},
      {"2 objective matches the loop-based reference (50 batches, 1e-10)", criterion_2},
      {"3 class-weight estimation/normalization invariants (100 matrices)", criterion_3},
      {"4 all-ones weights reduce pada to dann bit for bit (5 epochs)", criterion_4},
      {"5 outlier classes are down-weighted on the fixture (5 seeds)", criterion_5},
      {"6 transfer ordering: pada >= dann, source-only; sweep margins", criterion_6},
      {"7 no false filtering at full label overlap (gap <= 0.05)", criterion_7},
      {"8 full pada beats both ablations on a majority of seeds", criterion_8},
      {"9 determinism and exact CSV round-trips", criterion_9},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    bool ok = false;
    const double t0 = now_seconds();
    try {
      ok = criterion.run(check);
    } catch (const std::exception& e) {
      check.log << "    EXCEPTION: " << e.what() << "\n";
      ok = false;
    }
    const double elapsed = now_seconds() - t0;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.name << " ("
              << format_double(elapsed) << " s)\n"
              << check.log.str();
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::cout << "all criteria passed\n";
  } else {
    std::cout << failures << " criteria failed\n";
  }
  return failures;
}
