#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cepkit/config.hpp"
#include "cepkit/dataset.hpp"
#include "cepkit/fsm.hpp"
#include "cepkit/metrics.hpp"
#include "cepkit/noise.hpp"
#include "cepkit/simulator.hpp"

namespace cepkit {

/// Generates n labeled examples: clean action windows plus the ground-truth
/// CE labels stamped by the rule machines.
inline std::vector<ExampleRecord> generate_records(
    const SimulatorConfig& config, std::int64_t n) {
  std::vector<ExampleRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (AeSequence& seq : generate_dataset(config, n)) {
    ExampleRecord r;
    r.example_id = seq.example_id;
    r.seed = seq.seed;
    r.ce_labels = label_sequence(seq.windows);
    r.ae_true = std::move(seq.windows);
    records.push_back(std::move(r));
  }
  return records;
}

/// Fills ae_observed on every record by passing ae_true through the noise
/// channel. Each record uses the sub-seed mix_seed(seed, example_id), so the
/// perturbation is reproducible per record and independent of record order.
inline void perturb_records(std::vector<ExampleRecord>& records,
                            const NoiseModel& model, std::uint64_t seed) {
  model.validate();
  for (ExampleRecord& r : records) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r.example_id)));
    r.ae_observed = apply_noise(r.ae_true, model, rng);
  }
}

struct DetectResult {
  std::vector<PredictionRecord> predictions;
  std::size_t fallback_count = 0;  // records scored on ae_true
};

/// Streams every record through a fresh detector, window by window, closing
/// the stream at the last window. Records without ae_observed fall back to
/// the clean labels (counted in fallback_count).
inline DetectResult detect_records(std::span<const ExampleRecord> records) {
  DetectResult result;
  result.predictions.reserve(records.size());
  for (const ExampleRecord& r : records) {
    const std::vector<Action>& input =
        r.ae_observed ? *r.ae_observed : r.ae_true;
    if (!r.ae_observed) ++result.fallback_count;
    PredictionRecord pred;
    pred.example_id = r.example_id;
    Detector det;
    pred.ce_pred.reserve(input.size());
    for (Action a : input) pred.ce_pred.push_back(det.push(a));
    if (!pred.ce_pred.empty()) pred.ce_pred.back() |= det.finish();
    result.predictions.push_back(std::move(pred));
  }
  return result;
}

/// Window-level counts of one prediction run against the ground truth;
/// example ids must match one-to-one.
inline MetricsReport evaluate_records(
    std::span<const PredictionRecord> predictions,
    std::span<const ExampleRecord> truth) {
  std::unordered_map<std::int64_t, const ExampleRecord*> by_id;
  by_id.reserve(truth.size());
  for (const ExampleRecord& r : truth) by_id.emplace(r.example_id, &r);
  if (predictions.size() != truth.size())
    throw ValidationError(
        "evaluate: " + std::to_string(predictions.size()) +
        " predictions vs " + std::to_string(truth.size()) + " truth records");
  ConfusionCounts counts;
  for (const PredictionRecord& p : predictions) {
    const auto it = by_id.find(p.example_id);
    if (it == by_id.end())
      throw ValidationError("evaluate: prediction for unknown example_id " +
                            std::to_string(p.example_id));
    count_confusion(p.ce_pred, it->second->ce_labels, counts);
  }
  return precision_recall_f1(counts);
}

/// One perturb+detect+evaluate pass per (accuracy, run seed); run seeds are
/// mix_seed(seed, run) and are shared across accuracies. Returns one
/// aggregate per accuracy, in input order.
inline std::vector<std::pair<double, AggregateReport>> sweep_records(
    const std::vector<ExampleRecord>& records,
    std::span<const double> accuracies, int runs, std::uint64_t seed) {
  if (runs < 1) throw ConfigError("sweep: runs must be >= 1");
  std::vector<std::pair<double, AggregateReport>> out;
  out.reserve(accuracies.size());
  for (double accuracy : accuracies) {
    const NoiseModel model = uniform_from_accuracy(accuracy);
    std::vector<MetricsReport> reports;
    reports.reserve(static_cast<std::size_t>(runs));
    for (int run = 0; run < runs; ++run) {
      std::vector<ExampleRecord> working = records;
      perturb_records(working, model, mix_seed(seed, static_cast<std::uint64_t>(run)));
      const DetectResult detected = detect_records(working);
      reports.push_back(evaluate_records(detected.predictions, working));
    }
    out.emplace_back(accuracy, aggregate(reports));
  }
  return out;
}

inline std::string sweep_label(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "acc=%.4f", accuracy);
  return buf;
}

// ---- file-level commands (the CLI subcommands call straight into these) ----

inline void cmd_generate(const std::optional<std::string>& config_path,
                         std::int64_t n,
                         std::optional<std::uint64_t> seed_override,
                         const std::string& out) {
  SimulatorConfig config =
      config_path ? load_config(*config_path) : default_config();
  if (seed_override) config.base_seed = *seed_override;
  const std::vector<ExampleRecord> records = generate_records(config, n);
  write_dataset(records, out);
}

inline void cmd_perturb(const std::string& in, const std::string& out,
                        std::optional<double> accuracy,
                        const std::optional<std::string>& matrix_path,
                        std::uint64_t seed) {
  if (accuracy && matrix_path)
    throw ConfigError("perturb: pass either an accuracy or a matrix file");
  const NoiseModel model =
      matrix_path ? load_noise_matrix(*matrix_path)
                  : uniform_from_accuracy(accuracy.value_or(kDefaultNoiseAccuracy));
  std::vector<ExampleRecord> records = read_dataset(in);
  perturb_records(records, model, seed);
  write_dataset(records, out);
}

inline std::size_t cmd_detect(const std::string& in, const std::string& out) {
  const std::vector<ExampleRecord> records = read_dataset(in);
  const DetectResult result = detect_records(records);
  if (result.fallback_count > 0)
    std::cerr << "warning: " << result.fallback_count << " of "
              << records.size()
              << " records have no ae_observed; detecting on ae_true\n";
  write_predictions(result.predictions, out);
  return result.fallback_count;
}

/// Scores one or more prediction files against a ground-truth dataset. One
/// file gives a plain report (zero CI); several files, e.g. one per
/// perturbation seed, give mean and 95% CI across runs.
inline void cmd_evaluate(const std::vector<std::string>& pred_paths,
                         const std::string& truth_path, const std::string& out,
                         const std::string& label) {
  if (pred_paths.empty())
    throw ConfigError("evaluate: at least one predictions file required");
  const std::vector<ExampleRecord> truth = read_dataset(truth_path);
  std::vector<MetricsReport> reports;
  reports.reserve(pred_paths.size());
  for (const std::string& path : pred_paths)
    reports.push_back(evaluate_records(read_predictions(path), truth));
  std::ofstream file(out);
  if (!file) throw IoError("cannot write report file: " + out);
  file << kReportHeader << '\n';
  write_report_rows(file, label, aggregate(reports));
  file.flush();
  if (!file) throw IoError("write failed: " + out);
}

inline void cmd_sweep(const std::string& in,
                      const std::vector<double>& accuracies, int runs,
                      std::uint64_t seed, const std::string& out) {
  if (accuracies.empty())
    throw ConfigError("sweep: at least one accuracy required");
  for (double a : accuracies)
    if (!(a >= 0.0 && a <= 1.0))
      throw ConfigError("sweep: accuracy outside [0, 1]: " +
                        std::to_string(a));
  const std::vector<ExampleRecord> records = read_dataset(in);
  const auto results = sweep_records(records, accuracies, runs, seed);
  std::ofstream file(out);
  if (!file) throw IoError("cannot write report file: " + out);
  file << kReportHeader << '\n';
  for (const auto& [accuracy, agg] : results)
    write_report_rows(file, sweep_label(accuracy), agg);
  file.flush();
  if (!file) throw IoError("write failed: " + out);
}

}  // namespace cepkit
