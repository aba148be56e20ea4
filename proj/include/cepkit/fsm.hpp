#pragma once

#include <span>
#include <vector>

#include "cepkit/actions.hpp"

namespace cepkit {

// Rule thresholds in windows (rule durations divided by the 5 s window).
inline constexpr int kWalkAwayThreshold = 12;   // 1 min walking away
inline constexpr int kWashToEatThreshold = 24;  // 2 min wash-to-eat gap
inline constexpr int kBrushMinWindows = 24;     // 2 min of brushing
inline constexpr int kBrushStopGap = 2;         // 10 s without brushing

/// e1, unsanitary restroom usage: after a toilet flush, washing hands resolves
/// the episode; any other activity, or walking away for more than a minute,
/// establishes the violation.
class RestroomFsm {
 public:
  enum class Phase : std::uint8_t { Idle, AfterRestroom };

  /// Consumes one window; returns true when e1 is established at it.
  bool step(Action a) {
    if (phase_ == Phase::Idle) {
      if (a == Action::FlushToilet) {
        phase_ = Phase::AfterRestroom;
        walk_count_ = 0;
      }
      return false;
    }
    switch (a) {
      case Action::Wash:  // washed in time, no violation
        reset();
        return false;
      case Action::FlushToilet:  // still in the restroom
        walk_count_ = 0;
        return false;
      case Action::Walk:
        if (++walk_count_ > kWalkAwayThreshold) {
          reset();
          return true;
        }
        return false;
      default:  // moved on to another activity without washing
        reset();
        return true;
    }
  }

  Phase phase() const { return phase_; }
  int walk_count() const { return walk_count_; }

 private:
  void reset() {
    phase_ = Phase::Idle;
    walk_count_ = 0;
  }
  Phase phase_ = Phase::Idle;
  int walk_count_ = 0;
};

/// e2, unsanitary diet habit: eating more than two minutes after the last
/// hand wash (or without ever washing). One check per eating bout, at its
/// first window.
class DietFsm {
 public:
  bool step(Action a) {
    if (a == Action::Wash) {
      windows_since_wash_ = 0;
    } else if (windows_since_wash_ >= 0 &&
               windows_since_wash_ <= kWashToEatThreshold) {
      ++windows_since_wash_;  // saturates one past the threshold
    }
    bool emit = false;
    if (a == Action::Eat) {
      if (!in_eating_bout_) {
        emit = never_washed() || windows_since_wash_ > kWashToEatThreshold;
        in_eating_bout_ = true;
      }
    } else {
      in_eating_bout_ = false;
    }
    return emit;
  }

  bool never_washed() const { return windows_since_wash_ < 0; }
  int windows_since_wash() const { return windows_since_wash_; }
  bool in_eating_bout() const { return in_eating_bout_; }

 private:
  int windows_since_wash_ = -1;  // -1: no wash seen yet
  bool in_eating_bout_ = false;
};

/// e3, bad brushing habit: a brushing bout that ends after less than two
/// minutes of brush windows. Two consecutive non-brush windows (10 s) end
/// the bout; a single-window gap does not.
class BrushFsm {
 public:
  enum class Phase : std::uint8_t { Idle, Brushing };

  bool step(Action a) {
    if (phase_ == Phase::Idle) {
      if (a == Action::BrushTeeth) {
        phase_ = Phase::Brushing;
        brush_count_ = 1;
        gap_count_ = 0;
      }
      return false;
    }
    if (a == Action::BrushTeeth) {
      if (brush_count_ < kBrushMinWindows) ++brush_count_;  // saturates
      gap_count_ = 0;
      return false;
    }
    if (++gap_count_ >= kBrushStopGap) {
      const bool emit = brush_count_ < kBrushMinWindows;
      reset();
      return emit;
    }
    return false;
  }

  /// Ends an open bout at the current window (stream is over). Emits under
  /// the same short-bout condition as a normal bout end.
  bool force_close() {
    const bool emit =
        phase_ == Phase::Brushing && brush_count_ < kBrushMinWindows;
    reset();
    return emit;
  }

  Phase phase() const { return phase_; }
  int brush_count() const { return brush_count_; }
  int gap_count() const { return gap_count_; }

 private:
  void reset() {
    phase_ = Phase::Idle;
    brush_count_ = 0;
    gap_count_ = 0;
  }
  Phase phase_ = Phase::Idle;
  int brush_count_ = 0;
  int gap_count_ = 0;
};

/// One streaming detector: the three rule machines advanced in lock step,
/// one atomic-event window at a time. The labels emitted at window t are a
/// function of windows 0..t only.
class Detector {
 public:
  /// Consumes the next window and returns the classes established at it.
  CeSet push(Action a) {
    ++t_;
    CeSet out;
    if (restroom_.step(a)) out.insert(CeClass::RestroomViolation);
    if (diet_.step(a)) out.insert(CeClass::DietViolation);
    if (brush_.step(a)) out.insert(CeClass::BrushingViolation);
    return out;
  }

  /// Signals end of stream. A still-open brushing bout is closed at the last
  /// pushed window and may emit there; open e1/e2 episodes emit nothing (the
  /// violation was never established).
  CeSet finish() {
    CeSet out;
    if (brush_.force_close()) out.insert(CeClass::BrushingViolation);
    return out;
  }

  /// Index of the last pushed window; -1 before the first push.
  int t() const { return t_; }

  const RestroomFsm& restroom() const { return restroom_; }
  const DietFsm& diet() const { return diet_; }
  const BrushFsm& brush() const { return brush_; }

 private:
  RestroomFsm restroom_;
  DietFsm diet_;
  BrushFsm brush_;
  int t_ = -1;
};

/// Ground-truth labeling of a whole sequence: fold of Detector::push with the
/// end-of-stream close folded into the last window.
inline std::vector<CeSet> label_sequence(std::span<const Action> windows) {
  std::vector<CeSet> labels;
  labels.reserve(windows.size());
  Detector det;
  for (Action a : windows) labels.push_back(det.push(a));
  if (!labels.empty()) labels.back() |= det.finish();
  return labels;
}

}  // namespace cepkit
