#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cepkit/errors.hpp"

namespace cepkit {

/// The nine atomic action classes, one per 5-second window.
/// Enumerator order is the canonical index order used everywhere an index
/// is needed (confusion-matrix rows/columns, report tables).
enum class Action : std::uint8_t {
  Walk = 0,
  Sit,
  BrushTeeth,
  ClickMouse,
  Drink,
  Eat,
  Type,
  FlushToilet,
  Wash,
};

inline constexpr std::size_t kActionCount = 9;

inline constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "walk",   "sit", "brush_teeth", "click_mouse", "drink",
    "eat",    "type", "flush_toilet", "wash",
};

constexpr std::string_view name(Action a) {
  return kActionNames[static_cast<std::size_t>(a)];
}

inline std::optional<Action> parse_action(std::string_view s) {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (kActionNames[i] == s) return static_cast<Action>(i);
  }
  return std::nullopt;
}

/// Complex-event classes. None (e0) is the implicit default and is never
/// stored inside a label set; the three violations are the positive classes.
enum class CeClass : std::uint8_t {
  None = 0,               // e0
  RestroomViolation = 1,  // e1
  DietViolation = 2,      // e2
  BrushingViolation = 3,  // e3
};

inline constexpr std::size_t kCeClassCount = 4;

inline constexpr std::array<std::string_view, kCeClassCount> kCeClassNames = {
    "e0", "e1", "e2", "e3"};

constexpr std::string_view name(CeClass c) {
  return kCeClassNames[static_cast<std::size_t>(c)];
}

inline std::optional<CeClass> parse_ce_class(std::string_view s) {
  for (std::size_t i = 0; i < kCeClassCount; ++i) {
    if (kCeClassNames[i] == s) return static_cast<CeClass>(i);
  }
  return std::nullopt;
}

/// A per-window set of positive CE classes. The empty set means e0.
class CeSet {
 public:
  constexpr CeSet() = default;

  constexpr void insert(CeClass c) {
    if (c != CeClass::None) bits_ |= mask(c);
  }
  constexpr CeSet& operator|=(CeSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  constexpr bool contains(CeClass c) const {
    return c == CeClass::None ? empty() : (bits_ & mask(c)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    std::size_t n = 0;
    for (std::uint8_t b = bits_; b != 0; b >>= 1) n += b & 1u;
    return n;
  }

  /// Highest-priority member for single-class reductions: e1 > e2 > e3,
  /// and e0 when the set is empty.
  constexpr CeClass reduce() const {
    if (contains(CeClass::RestroomViolation)) return CeClass::RestroomViolation;
    if (contains(CeClass::DietViolation)) return CeClass::DietViolation;
    if (contains(CeClass::BrushingViolation)) return CeClass::BrushingViolation;
    return CeClass::None;
  }

  friend constexpr bool operator==(CeSet, CeSet) = default;

 private:
  static constexpr std::uint8_t mask(CeClass c) {
    return static_cast<std::uint8_t>(1u << (static_cast<unsigned>(c) - 1));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace cepkit
