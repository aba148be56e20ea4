#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cepkit/actions.hpp"
#include "cepkit/errors.hpp"
#include "cepkit/rng.hpp"

namespace cepkit {

/// One step of an activity pattern: an action, a duration range in windows,
/// and the probability that the step appears at all.
struct ActionStep {
  Action action = Action::Walk;
  int dur_min = 1;
  int dur_max = 1;
  double include_prob = 1.0;
};

/// A temporal pattern of steps, realized in order.
struct ActivityTemplate {
  std::string name;
  std::vector<ActionStep> steps;
};

struct WeightedActivity {
  ActivityTemplate activity;
  double probability = 0.0;
};

/// A block of the day with its own activity distribution and window budget.
struct StageConfig {
  std::string name;
  std::vector<WeightedActivity> activities;
  int window_budget = 1;
};

inline constexpr int kWindowSeconds = 5;
inline constexpr int kDefaultSequenceWindows = 60;

struct SimulatorConfig {
  std::vector<StageConfig> stages;
  int sequence_length_windows = kDefaultSequenceWindows;
  int window_seconds = kWindowSeconds;
  std::uint64_t base_seed = 0;
};

/// A generated example: one action label per window.
struct AeSequence {
  std::vector<Action> windows;
  std::int64_t example_id = 0;
  std::uint64_t seed = 0;
};

inline void validate(const ActivityTemplate& t) {
  if (t.steps.empty())
    throw ConfigError("activity '" + t.name + "' has no steps");
  bool has_certain = false;
  for (const ActionStep& s : t.steps) {
    if (s.dur_min < 1)
      throw ConfigError("activity '" + t.name + "': dur_min must be >= 1");
    if (s.dur_max < s.dur_min)
      throw ConfigError("activity '" + t.name + "': dur_max < dur_min");
    if (s.include_prob < 0.0 || s.include_prob > 1.0)
      throw ConfigError("activity '" + t.name +
                        "': include_prob outside [0, 1]");
    if (s.include_prob == 1.0) has_certain = true;
  }
  if (!has_certain)
    throw ConfigError("activity '" + t.name +
                      "' needs at least one step with include_prob = 1");
}

inline void validate(const StageConfig& stage) {
  if (stage.activities.empty())
    throw ConfigError("stage '" + stage.name + "' has no activities");
  if (stage.window_budget < 1)
    throw ConfigError("stage '" + stage.name + "': window_budget must be >= 1");
  double total = 0.0;
  for (const WeightedActivity& wa : stage.activities) {
    if (wa.probability < 0.0)
      throw ConfigError("stage '" + stage.name +
                        "': negative activity probability");
    total += wa.probability;
    validate(wa.activity);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("stage '" + stage.name +
                      "': activity probabilities sum to " +
                      std::to_string(total) + ", expected 1");
}

inline void validate(const SimulatorConfig& config) {
  if (config.sequence_length_windows < 1)
    throw ConfigError("sequence_length_windows must be >= 1");
  if (config.window_seconds != kWindowSeconds)
    throw ConfigError("window_seconds must be " +
                      std::to_string(kWindowSeconds));
  if (config.stages.empty()) throw ConfigError("config has no stages");
  long long budget = 0;
  for (const StageConfig& stage : config.stages) {
    validate(stage);
    budget += stage.window_budget;
  }
  if (budget < config.sequence_length_windows)
    throw ConfigError(
        "stage budgets cover " + std::to_string(budget) +
        " windows, fewer than sequence_length_windows = " +
        std::to_string(config.sequence_length_windows));
}

/// Realizes one activity: each step is included independently with its
/// include_prob, included steps keep template order, and each contributes a
/// uniformly sampled duration in [dur_min, dur_max] windows.
inline std::vector<Action> realize_activity(const ActivityTemplate& t,
                                            Rng& rng) {
  std::vector<Action> out;
  for (const ActionStep& s : t.steps) {
    if (!rng.bernoulli(s.include_prob)) continue;
    const int dur = rng.uniform_int(s.dur_min, s.dur_max);
    out.insert(out.end(), static_cast<std::size_t>(dur), s.action);
  }
  return out;
}

/// Categorical draw of an activity index from a stage's distribution.
inline std::size_t sample_activity_index(const StageConfig& stage, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(stage.activities.size());
  for (const WeightedActivity& wa : stage.activities)
    weights.push_back(wa.probability);
  return rng.categorical(weights);
}

inline const ActivityTemplate& sample_activity(const StageConfig& stage,
                                               Rng& rng) {
  return stage.activities[sample_activity_index(stage, rng)].activity;
}

/// Generates one example. Deterministic given (base_seed, example_id): the
/// per-example seed is mix_seed(base_seed, example_id). Stages run in order;
/// each stage samples and realizes activities until its window budget is
/// full, cutting the last realization at the stage boundary; the result is
/// truncated to exactly sequence_length_windows.
inline AeSequence generate_sequence(const SimulatorConfig& config,
                                    std::int64_t example_id) {
  validate(config);
  AeSequence seq;
  seq.example_id = example_id;
  seq.seed = mix_seed(config.base_seed, static_cast<std::uint64_t>(example_id));
  Rng rng(seq.seed);

  const std::size_t target =
      static_cast<std::size_t>(config.sequence_length_windows);
  seq.windows.reserve(target);
  for (const StageConfig& stage : config.stages) {
    int remaining = stage.window_budget;
    while (remaining > 0 && seq.windows.size() < target) {
      const ActivityTemplate& activity = sample_activity(stage, rng);
      std::vector<Action> segment = realize_activity(activity, rng);
      const std::size_t take =
          std::min({segment.size(), static_cast<std::size_t>(remaining),
                    target - seq.windows.size()});
      seq.windows.insert(seq.windows.end(), segment.begin(),
                         segment.begin() + static_cast<std::ptrdiff_t>(take));
      remaining -= static_cast<int>(take);
    }
    if (seq.windows.size() == target) break;
  }
  // validate() guarantees the stage budgets cover the target length
  return seq;
}

/// Generates n examples with ids 0..n-1. Examples are independent (each has
/// its own derived seed), so the order of generation does not matter; output
/// is ordered by example_id.
inline std::vector<AeSequence> generate_dataset(const SimulatorConfig& config,
                                                std::int64_t n) {
  validate(config);
  if (n < 1) throw ConfigError("dataset size must be >= 1");
  std::vector<AeSequence> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t id = 0; id < n; ++id)
    out.push_back(generate_sequence(config, id));
  return out;
}

}  // namespace cepkit
