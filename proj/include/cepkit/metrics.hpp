#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cepkit/actions.hpp"
#include "cepkit/errors.hpp"

namespace cepkit {

struct ClassCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// One-vs-rest window counts per CE class, e0 included (a window "is e0"
/// iff its label set is empty). Additive across examples and shards.
struct ConfusionCounts {
  std::array<ClassCounts, kCeClassCount> by_class{};

  ClassCounts& operator[](CeClass c) {
    return by_class[static_cast<std::size_t>(c)];
  }
  const ClassCounts& operator[](CeClass c) const {
    return by_class[static_cast<std::size_t>(c)];
  }

  ConfusionCounts& operator+=(const ConfusionCounts& other) {
    for (std::size_t i = 0; i < kCeClassCount; ++i) {
      by_class[i].tp += other.by_class[i].tp;
      by_class[i].fp += other.by_class[i].fp;
      by_class[i].fn += other.by_class[i].fn;
    }
    return *this;
  }
};

/// Accumulates one example's window-level counts into `counts`.
inline void count_confusion(std::span<const CeSet> pred,
                            std::span<const CeSet> truth,
                            ConfusionCounts& counts) {
  if (pred.size() != truth.size())
    throw ValidationError("count_confusion: prediction has " +
                          std::to_string(pred.size()) + " windows, truth has " +
                          std::to_string(truth.size()));
  for (std::size_t t = 0; t < truth.size(); ++t) {
    for (std::size_t i = 0; i < kCeClassCount; ++i) {
      const auto c = static_cast<CeClass>(i);
      const bool in_pred = pred[t].contains(c);
      const bool in_truth = truth[t].contains(c);
      if (in_pred && in_truth)
        ++counts.by_class[i].tp;
      else if (in_pred)
        ++counts.by_class[i].fp;
      else if (in_truth)
        ++counts.by_class[i].fn;
    }
  }
}

inline ConfusionCounts count_confusion(std::span<const CeSet> pred,
                                       std::span<const CeSet> truth) {
  ConfusionCounts counts;
  count_confusion(pred, truth, counts);
  return counts;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Per-class scores plus the two macro rows: `avg` is the unweighted mean
/// over all four classes (its f1 is the "All" score), `pos` the mean over
/// the three positive classes (its f1 is the "Pos." score).
struct MetricsReport {
  std::array<ClassMetrics, kCeClassCount> per_class{};
  ClassMetrics avg{};
  ClassMetrics pos{};
};

/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 their harmonic mean;
/// 0/0 counts as 0 throughout.
inline MetricsReport precision_recall_f1(const ConfusionCounts& counts) {
  const auto ratio = [](std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0
                    : static_cast<double>(num) / static_cast<double>(den);
  };
  MetricsReport report;
  for (std::size_t i = 0; i < kCeClassCount; ++i) {
    const ClassCounts& c = counts.by_class[i];
    ClassMetrics& m = report.per_class[i];
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
  }
  for (std::size_t i = 0; i < kCeClassCount; ++i) {
    report.avg.precision += report.per_class[i].precision / 4.0;
    report.avg.recall += report.per_class[i].recall / 4.0;
    report.avg.f1 += report.per_class[i].f1 / 4.0;
    if (i > 0) {
      report.pos.precision += report.per_class[i].precision / 3.0;
      report.pos.recall += report.per_class[i].recall / 3.0;
      report.pos.f1 += report.per_class[i].f1 / 3.0;
    }
  }
  return report;
}

inline constexpr double kDefaultFocalGamma = 2.0;
inline constexpr std::array<double, kCeClassCount> kDefaultFocalAlpha = {
    0.005, 0.45, 0.45, 0.45};

/// Focal loss summed over examples and windows:
///   -sum_i sum_t alpha[y_i(t)] * (1 - p[y_i(t)])^gamma * log(p[y_i(t)])
/// where y_i(t) is the single true class per window (e0 for an empty label
/// set; multi-label windows reduce by the e1 > e2 > e3 priority).
inline double focal_loss(
    std::span<const std::vector<std::array<double, kCeClassCount>>> probs,
    std::span<const std::vector<CeSet>> truth, double gamma,
    const std::array<double, kCeClassCount>& alpha) {
  if (probs.size() != truth.size())
    throw ValidationError("focal_loss: " + std::to_string(probs.size()) +
                          " probability sequences vs " +
                          std::to_string(truth.size()) + " label sequences");
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i].size() != truth[i].size())
      throw ValidationError("focal_loss: sequence " + std::to_string(i) +
                            " length mismatch");
    for (std::size_t t = 0; t < probs[i].size(); ++t) {
      const auto y = static_cast<std::size_t>(truth[i][t].reduce());
      const double p = probs[i][t][y];
      if (!(p > 0.0) || p > 1.0)
        throw std::domain_error(
            "focal_loss: true-class probability outside (0, 1]: " +
            std::to_string(p));
      loss -= alpha[y] * std::pow(1.0 - p, gamma) * std::log(p);
    }
  }
  return loss;
}

struct Summary {
  double mean = 0.0;
  double half_width = 0.0;  // 95% CI half-width
};

/// Normal-approximation 95% CI: mean +- 1.96 * s / sqrt(n), with a zero
/// half-width for a single value or identical values.
inline Summary ci95(std::span<const double> values) {
  if (values.empty()) throw ValidationError("ci95: no values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  bool all_equal = true;
  for (double v : values) all_equal = all_equal && v == values.front();
  if (all_equal) return {values.front(), 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

/// Mean and CI of every report cell over repeated runs (perturbation seeds).
struct AggregateReport {
  struct Row {
    Summary precision, recall, f1;
  };
  std::array<Row, kCeClassCount> per_class{};
  Row avg{};
  Row pos{};
};

inline AggregateReport aggregate(std::span<const MetricsReport> runs) {
  if (runs.empty()) throw ValidationError("aggregate: no runs");
  AggregateReport agg;
  const auto summarize = [&](auto pick) {
    std::vector<double> values;
    values.reserve(runs.size());
    for (const MetricsReport& r : runs) values.push_back(pick(r));
    return ci95(values);
  };
  for (std::size_t i = 0; i < kCeClassCount; ++i) {
    agg.per_class[i].precision =
        summarize([i](const MetricsReport& r) { return r.per_class[i].precision; });
    agg.per_class[i].recall =
        summarize([i](const MetricsReport& r) { return r.per_class[i].recall; });
    agg.per_class[i].f1 =
        summarize([i](const MetricsReport& r) { return r.per_class[i].f1; });
  }
  agg.avg.precision = summarize([](const MetricsReport& r) { return r.avg.precision; });
  agg.avg.recall = summarize([](const MetricsReport& r) { return r.avg.recall; });
  agg.avg.f1 = summarize([](const MetricsReport& r) { return r.avg.f1; });
  agg.pos.precision = summarize([](const MetricsReport& r) { return r.pos.precision; });
  agg.pos.recall = summarize([](const MetricsReport& r) { return r.pos.recall; });
  agg.pos.f1 = summarize([](const MetricsReport& r) { return r.pos.f1; });
  return agg;
}

inline constexpr const char* kReportHeader =
    "label\tclass\tprecision\tprecision_ci95\trecall\trecall_ci95\tf1\tf1_ci95";

/// Appends one six-row block (e0..e3, avg, pos) to a tab-separated report.
inline void write_report_rows(std::ostream& out, const std::string& label,
                              const AggregateReport& agg) {
  const auto write_row = [&](const char* cls, const AggregateReport::Row& row) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s\t%s\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f", label.c_str(),
                  cls, row.precision.mean, row.precision.half_width,
                  row.recall.mean, row.recall.half_width, row.f1.mean,
                  row.f1.half_width);
    out << buf << '\n';
  };
  for (std::size_t i = 0; i < kCeClassCount; ++i)
    write_row(kCeClassNames[i].data(), agg.per_class[i]);
  write_row("avg", agg.avg);
  write_row("pos", agg.pos);
}

}  // namespace cepkit
