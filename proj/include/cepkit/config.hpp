#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "cepkit/errors.hpp"
#include "cepkit/simulator.hpp"

namespace cepkit {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline const ordered_json& require_field(const ordered_json& j,
                                         const char* key,
                                         const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("config: missing field '" + std::string(key) + "' in " +
                      where);
  return *it;
}

template <typename T>
T field_as(const ordered_json& j, const char* key, const std::string& where) {
  try {
    return require_field(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: bad value for '" + std::string(key) + "' in " +
                      where + ": " + e.what());
  }
}

}  // namespace detail

inline ordered_json config_to_json(const SimulatorConfig& config) {
  ordered_json j;
  j["sequence_length_windows"] = config.sequence_length_windows;
  j["window_seconds"] = config.window_seconds;
  j["base_seed"] = config.base_seed;
  j["stages"] = ordered_json::array();
  for (const StageConfig& stage : config.stages) {
    ordered_json js;
    js["name"] = stage.name;
    js["window_budget"] = stage.window_budget;
    js["activities"] = ordered_json::array();
    for (const WeightedActivity& wa : stage.activities) {
      ordered_json ja;
      ja["probability"] = wa.probability;
      ja["template"]["name"] = wa.activity.name;
      ja["template"]["steps"] = ordered_json::array();
      for (const ActionStep& s : wa.activity.steps) {
        ordered_json jstep;
        jstep["action"] = std::string(name(s.action));
        jstep["dur_min"] = s.dur_min;
        jstep["dur_max"] = s.dur_max;
        jstep["include_prob"] = s.include_prob;
        ja["template"]["steps"].push_back(std::move(jstep));
      }
      js["activities"].push_back(std::move(ja));
    }
    j["stages"].push_back(std::move(js));
  }
  return j;
}

inline SimulatorConfig config_from_json(const ordered_json& j) {
  using detail::field_as;
  SimulatorConfig config;
  config.sequence_length_windows =
      field_as<int>(j, "sequence_length_windows", "config");
  config.window_seconds = field_as<int>(j, "window_seconds", "config");
  config.base_seed = field_as<std::uint64_t>(j, "base_seed", "config");
  const ordered_json& stages = detail::require_field(j, "stages", "config");
  if (!stages.is_array()) throw ConfigError("config: 'stages' must be a list");
  for (const ordered_json& js : stages) {
    StageConfig stage;
    stage.name = field_as<std::string>(js, "name", "stage");
    const std::string where = "stage '" + stage.name + "'";
    stage.window_budget = field_as<int>(js, "window_budget", where);
    const ordered_json& activities =
        detail::require_field(js, "activities", where);
    if (!activities.is_array())
      throw ConfigError("config: 'activities' must be a list in " + where);
    for (const ordered_json& ja : activities) {
      WeightedActivity wa;
      wa.probability = field_as<double>(ja, "probability", where);
      const ordered_json& jt = detail::require_field(ja, "template", where);
      wa.activity.name = field_as<std::string>(jt, "name", where);
      const std::string awhere = where + ", activity '" + wa.activity.name + "'";
      const ordered_json& steps = detail::require_field(jt, "steps", awhere);
      if (!steps.is_array())
        throw ConfigError("config: 'steps' must be a list in " + awhere);
      for (const ordered_json& jstep : steps) {
        ActionStep step;
        const std::string action_name =
            field_as<std::string>(jstep, "action", awhere);
        const auto action = parse_action(action_name);
        if (!action)
          throw ConfigError("config: unknown action '" + action_name +
                            "' in " + awhere);
        step.action = *action;
        step.dur_min = field_as<int>(jstep, "dur_min", awhere);
        step.dur_max = field_as<int>(jstep, "dur_max", awhere);
        step.include_prob = field_as<double>(jstep, "include_prob", awhere);
        wa.activity.steps.push_back(step);
      }
      stage.activities.push_back(std::move(wa));
    }
    config.stages.push_back(std::move(stage));
  }
  validate(config);
  return config;
}

/// Loads and validates a simulator config file (JSON, schema as written by
/// config_to_json).
inline SimulatorConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const SimulatorConfig& config,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file: " + path);
  out << config_to_json(config).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

/// The configuration shipped with the kit (configs/default.json mirrors it).
/// Three stages; the daytime activity distribution is [0.27, 0.27, 0.02,
/// 0.40, 0.04] over walk_only, sit_only, restroom, work, drink_only. Stage
/// budgets are 15/30/15 windows for a 60-window example. All other
/// probabilities, durations, and the morning/evening distributions are
/// plain defaults with no external source; edit them freely.
inline SimulatorConfig default_config() {
  const ActivityTemplate restroom{
      "restroom",
      {
          {Action::Walk, 1, 2, 1.0},
          {Action::Wash, 1, 1, 0.5},
          {Action::Sit, 2, 6, 1.0},
          {Action::FlushToilet, 1, 1, 1.0},
          {Action::Wash, 1, 1, 0.5},
          {Action::Walk, 1, 2, 1.0},
      }};
  const ActivityTemplate walk_only{"walk_only", {{Action::Walk, 2, 6, 1.0}}};
  const ActivityTemplate sit_only{"sit_only", {{Action::Sit, 2, 8, 1.0}}};
  const ActivityTemplate drink_only{"drink_only",
                                    {
                                        {Action::Sit, 1, 2, 0.5},
                                        {Action::Drink, 1, 2, 1.0},
                                        {Action::Sit, 1, 2, 0.5},
                                    }};
  const ActivityTemplate work{"work",
                              {
                                  {Action::Type, 2, 6, 1.0},
                                  {Action::ClickMouse, 1, 3, 1.0},
                                  {Action::Type, 1, 4, 0.5},
                                  {Action::Drink, 1, 1, 0.25},
                              }};
  const ActivityTemplate brush_routine{"brush_routine",
                                       {
                                           {Action::Walk, 1, 2, 1.0},
                                           {Action::BrushTeeth, 4, 10, 1.0},
                                           {Action::Wash, 1, 2, 0.5},
                                           {Action::Walk, 1, 2, 0.5},
                                       }};
  const ActivityTemplate breakfast{"breakfast",
                                   {
                                       {Action::Wash, 1, 1, 0.5},
                                       {Action::Sit, 1, 2, 1.0},
                                       {Action::Eat, 3, 8, 1.0},
                                       {Action::Drink, 1, 2, 0.5},
                                       {Action::Sit, 1, 2, 0.5},
                                   }};
  const ActivityTemplate dinner{"dinner",
                                {
                                    {Action::Wash, 1, 1, 0.5},
                                    {Action::Sit, 1, 2, 1.0},
                                    {Action::Eat, 4, 10, 1.0},
                                    {Action::Drink, 1, 2, 0.5},
                                    {Action::Sit, 1, 3, 0.5},
                                }};

  SimulatorConfig config;
  config.sequence_length_windows = kDefaultSequenceWindows;
  config.window_seconds = kWindowSeconds;
  config.base_seed = 12345;
  config.stages = {
      StageConfig{"morning",
                  {
                      {brush_routine, 0.30},
                      {breakfast, 0.35},
                      {restroom, 0.15},
                      {walk_only, 0.20},
                  },
                  15},
      StageConfig{"daytime",
                  {
                      {walk_only, 0.27},
                      {sit_only, 0.27},
                      {restroom, 0.02},
                      {work, 0.40},
                      {drink_only, 0.04},
                  },
                  30},
      StageConfig{"evening",
                  {
                      {dinner, 0.35},
                      {brush_routine, 0.25},
                      {restroom, 0.15},
                      {sit_only, 0.25},
                  },
                  15},
  };
  return config;
}

}  // namespace cepkit
