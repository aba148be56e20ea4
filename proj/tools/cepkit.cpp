#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cepkit/pipeline.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{
      "cepkit: simulate activity streams, corrupt them through a noisy "
      "classifier channel, detect complex events, and score the results"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand(
      "generate", "sample labeled examples from the activity simulator");
  std::optional<std::string> gen_config;
  std::int64_t gen_n = 0;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("--config", gen_config,
                  "simulator config JSON (built-in default if omitted)");
  gen->add_option("--n", gen_n, "number of examples")->required();
  gen->add_option("--seed", gen_seed, "override the config base seed");
  gen->add_option("--out", gen_out, "output dataset JSONL")->required();
  gen->callback([&] { cepkit::cmd_generate(gen_config, gen_n, gen_seed, gen_out); });

  // perturb
  auto* pert = app.add_subcommand(
      "perturb", "fill ae_observed by sampling the confusion channel");
  std::string pert_in, pert_out;
  std::optional<double> pert_accuracy;
  std::optional<std::string> pert_matrix;
  std::uint64_t pert_seed = 0;
  pert->add_option("--in", pert_in, "input dataset JSONL")->required();
  pert->add_option("--out", pert_out, "output dataset JSONL")->required();
  pert->add_option("--accuracy", pert_accuracy,
                   "uniform channel accuracy (default 0.91)");
  pert->add_option("--matrix", pert_matrix,
                   "9x9 row-stochastic confusion matrix file");
  pert->add_option("--seed", pert_seed, "perturbation seed (default 0)");
  pert->callback(
      [&] { cepkit::cmd_perturb(pert_in, pert_out, pert_accuracy, pert_matrix, pert_seed); });

  // detect
  auto* det = app.add_subcommand(
      "detect", "run the streaming detector over each example");
  std::string det_in, det_out;
  det->add_option("--in", det_in, "input dataset JSONL")->required();
  det->add_option("--out", det_out, "output predictions JSONL")->required();
  det->callback([&] { cepkit::cmd_detect(det_in, det_out); });

  // evaluate
  auto* eval = app.add_subcommand(
      "evaluate", "score prediction files against ground truth");
  std::vector<std::string> eval_preds;
  std::string eval_truth, eval_out;
  std::string eval_label = "run";
  eval->add_option("--pred", eval_preds,
                   "predictions JSONL (repeat for multi-run CI)")
      ->required();
  eval->add_option("--truth", eval_truth, "ground-truth dataset JSONL")->required();
  eval->add_option("--out", eval_out, "output report TSV")->required();
  eval->add_option("--label", eval_label, "row label (default \"run\")");
  eval->callback(
      [&] { cepkit::cmd_evaluate(eval_preds, eval_truth, eval_out, eval_label); });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "perturb+detect+evaluate across channel accuracies");
  std::string sweep_in, sweep_out;
  std::vector<double> sweep_accuracies = {1.0, 0.95, 0.91, 0.85};
  int sweep_runs = 1;
  std::uint64_t sweep_seed = 0;
  sweep->add_option("--in", sweep_in, "clean dataset JSONL")->required();
  sweep->add_option("--accuracy", sweep_accuracies,
                    "accuracies to sweep (default 1.0 0.95 0.91 0.85)");
  sweep->add_option("--runs", sweep_runs, "perturbation runs per accuracy (default 1)");
  sweep->add_option("--seed", sweep_seed, "base sweep seed (default 0)");
  sweep->add_option("--out", sweep_out, "output report TSV")->required();
  sweep->callback(
      [&] { cepkit::cmd_sweep(sweep_in, sweep_accuracies, sweep_runs, sweep_seed, sweep_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cepkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cepkit::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 3;
  } catch (const cepkit::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
