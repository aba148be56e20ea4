#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cepkit/actions.hpp"
#include "cepkit/errors.hpp"
#include "cepkit/rng.hpp"

namespace cepkit {

/// Default matching accuracy of the simulated perception stage.
inline constexpr double kDefaultNoiseAccuracy = 0.91;

/// Per-window label confusion channel standing in for an imperfect action
/// classifier. matrix[truth][observed] is row-stochastic in the canonical
/// action order.
struct NoiseModel {
  std::array<std::array<double, kActionCount>, kActionCount> matrix{};

  void validate() const {
    for (std::size_t r = 0; r < kActionCount; ++r) {
      double sum = 0.0;
      for (double v : matrix[r]) {
        if (v < 0.0)
          throw ValidationError("noise matrix: negative entry in row " +
                                std::to_string(r));
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("noise matrix: row " + std::to_string(r) +
                              " sums to " + std::to_string(sum) +
                              ", expected 1");
    }
  }
};

/// Uniform-error channel: the true class is kept with probability p and
/// otherwise replaced by one of the 8 other classes, equally likely.
inline NoiseModel uniform_from_accuracy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError("accuracy must be in [0, 1], got " + std::to_string(p));
  NoiseModel model;
  const double off = (1.0 - p) / static_cast<double>(kActionCount - 1);
  for (std::size_t r = 0; r < kActionCount; ++r)
    for (std::size_t c = 0; c < kActionCount; ++c)
      model.matrix[r][c] = (r == c) ? p : off;
  return model;
}

/// Resamples each window independently from its true class's confusion row.
inline std::vector<Action> apply_noise(std::span<const Action> windows,
                                       const NoiseModel& model, Rng& rng) {
  std::vector<Action> out;
  out.reserve(windows.size());
  for (Action a : windows) {
    const auto& row = model.matrix[static_cast<std::size_t>(a)];
    out.push_back(static_cast<Action>(rng.categorical(row)));
  }
  return out;
}

/// Reads a 9x9 confusion matrix: 81 decimals in row-major order, whitespace
/// separated; blank lines and lines starting with '#' are skipped. Rows and
/// columns follow the canonical action order.
inline NoiseModel load_noise_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open noise matrix file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double v;
    while (row >> v) values.push_back(v);
    if (!row.eof())
      throw ValidationError("noise matrix: non-numeric token in " + path +
                            ": " + line);
  }
  if (values.size() != kActionCount * kActionCount)
    throw ValidationError("noise matrix: expected " +
                          std::to_string(kActionCount * kActionCount) +
                          " values, found " + std::to_string(values.size()) +
                          " in " + path);
  NoiseModel model;
  for (std::size_t r = 0; r < kActionCount; ++r)
    for (std::size_t c = 0; c < kActionCount; ++c)
      model.matrix[r][c] = values[r * kActionCount + c];
  model.validate();
  return model;
}

}  // namespace cepkit
