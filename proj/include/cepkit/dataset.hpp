#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cepkit/actions.hpp"
#include "cepkit/errors.hpp"

namespace cepkit {

/// One serialized example: clean action labels, optional observed (noisy)
/// labels, and the per-window ground-truth CE label sets.
struct ExampleRecord {
  std::int64_t example_id = 0;
  std::uint64_t seed = 0;
  std::vector<Action> ae_true;
  std::optional<std::vector<Action>> ae_observed;
  std::vector<CeSet> ce_labels;
};

/// Per-example detector output, window-aligned with the source record.
struct PredictionRecord {
  std::int64_t example_id = 0;
  std::vector<CeSet> ce_pred;
};

namespace detail {

inline nlohmann::ordered_json actions_to_json(std::span<const Action> actions) {
  auto arr = nlohmann::ordered_json::array();
  for (Action a : actions) arr.push_back(std::string(name(a)));
  return arr;
}

inline nlohmann::ordered_json ce_sets_to_json(std::span<const CeSet> labels) {
  auto arr = nlohmann::ordered_json::array();
  for (CeSet set : labels) {
    auto window = nlohmann::ordered_json::array();
    for (CeClass c : {CeClass::RestroomViolation, CeClass::DietViolation,
                      CeClass::BrushingViolation})
      if (set.contains(c)) window.push_back(std::string(name(c)));
    arr.push_back(std::move(window));
  }
  return arr;
}

struct LineContext {
  const std::string& path;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(path + ":" + std::to_string(line) + ": " + what);
  }
};

inline std::vector<Action> actions_from_json(const nlohmann::ordered_json& j,
                                             const char* field,
                                             const LineContext& ctx) {
  if (!j.is_array()) ctx.fail(std::string(field) + " must be a list");
  std::vector<Action> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string()) ctx.fail(std::string(field) + ": non-string entry");
    const auto a = parse_action(item.get<std::string>());
    if (!a)
      ctx.fail(std::string(field) + ": unknown action '" +
               item.get<std::string>() + "'");
    out.push_back(*a);
  }
  return out;
}

inline std::vector<CeSet> ce_sets_from_json(const nlohmann::ordered_json& j,
                                            const char* field,
                                            const LineContext& ctx) {
  if (!j.is_array()) ctx.fail(std::string(field) + " must be a list");
  std::vector<CeSet> out;
  out.reserve(j.size());
  for (const auto& window : j) {
    if (!window.is_array())
      ctx.fail(std::string(field) + ": each window must be a list");
    CeSet set;
    for (const auto& item : window) {
      if (!item.is_string())
        ctx.fail(std::string(field) + ": non-string entry");
      const auto c = parse_ce_class(item.get<std::string>());
      if (!c)
        ctx.fail(std::string(field) + ": unknown CE class '" +
                 item.get<std::string>() + "'");
      if (*c == CeClass::None)
        ctx.fail(std::string(field) +
                 ": e0 must not appear inside a label set");
      set.insert(*c);
    }
    out.push_back(set);
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json record_to_json(const ExampleRecord& record) {
  nlohmann::ordered_json j;
  j["example_id"] = record.example_id;
  j["seed"] = record.seed;
  j["ae_true"] = detail::actions_to_json(record.ae_true);
  if (record.ae_observed)
    j["ae_observed"] = detail::actions_to_json(*record.ae_observed);
  j["ce_labels"] = detail::ce_sets_to_json(record.ce_labels);
  return j;
}

inline void validate(const ExampleRecord& record) {
  if (record.ce_labels.size() != record.ae_true.size())
    throw ValidationError("record " + std::to_string(record.example_id) +
                          ": ce_labels length " +
                          std::to_string(record.ce_labels.size()) +
                          " != ae_true length " +
                          std::to_string(record.ae_true.size()));
  if (record.ae_observed &&
      record.ae_observed->size() != record.ae_true.size())
    throw ValidationError("record " + std::to_string(record.example_id) +
                          ": ae_observed length " +
                          std::to_string(record.ae_observed->size()) +
                          " != ae_true length " +
                          std::to_string(record.ae_true.size()));
}

/// Writes one JSON object per line, UTF-8, stable field order, trailing
/// newline. Records are written in the given order.
inline void write_dataset(std::span<const ExampleRecord> records,
                          const std::string& path) {
  for (const ExampleRecord& r : records) validate(r);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset file: " + path);
  for (const ExampleRecord& r : records) out << record_to_json(r) << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

/// Reads and validates a dataset file; parse and validation failures report
/// the offending line number.
inline std::vector<ExampleRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::vector<ExampleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const detail::LineContext ctx{path, line_no};
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      ctx.fail(std::string("malformed JSON: ") + e.what());
    }
    ExampleRecord record;
    if (!j.contains("example_id") || !j["example_id"].is_number_integer())
      ctx.fail("missing or non-integer field 'example_id'");
    record.example_id = j["example_id"].get<std::int64_t>();
    if (!j.contains("seed") || !j["seed"].is_number())
      ctx.fail("missing or non-numeric field 'seed'");
    record.seed = j["seed"].get<std::uint64_t>();
    if (!j.contains("ae_true")) ctx.fail("missing field 'ae_true'");
    record.ae_true = detail::actions_from_json(j["ae_true"], "ae_true", ctx);
    if (j.contains("ae_observed"))
      record.ae_observed =
          detail::actions_from_json(j["ae_observed"], "ae_observed", ctx);
    if (!j.contains("ce_labels")) ctx.fail("missing field 'ce_labels'");
    record.ce_labels =
        detail::ce_sets_from_json(j["ce_labels"], "ce_labels", ctx);
    try {
      validate(record);
    } catch (const ValidationError& e) {
      ctx.fail(e.what());
    }
    records.push_back(std::move(record));
  }
  return records;
}

inline void write_predictions(std::span<const PredictionRecord> records,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write predictions file: " + path);
  for (const PredictionRecord& r : records) {
    nlohmann::ordered_json j;
    j["example_id"] = r.example_id;
    j["ce_pred"] = detail::ce_sets_to_json(r.ce_pred);
    out << j << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<PredictionRecord> read_predictions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions file: " + path);
  std::vector<PredictionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const detail::LineContext ctx{path, line_no};
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      ctx.fail(std::string("malformed JSON: ") + e.what());
    }
    PredictionRecord record;
    if (!j.contains("example_id") || !j["example_id"].is_number_integer())
      ctx.fail("missing or non-integer field 'example_id'");
    record.example_id = j["example_id"].get<std::int64_t>();
    if (!j.contains("ce_pred")) ctx.fail("missing field 'ce_pred'");
    record.ce_pred = detail::ce_sets_from_json(j["ce_pred"], "ce_pred", ctx);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace cepkit
