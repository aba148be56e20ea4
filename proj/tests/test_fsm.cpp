#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "cepkit/fsm.hpp"
#include "cepkit/rng.hpp"

using namespace cepkit;

namespace {

std::vector<Action> seq(std::initializer_list<Action> init) { return init; }

std::vector<Action> repeat(Action a, int n) {
  return std::vector<Action>(static_cast<std::size_t>(n), a);
}

void append(std::vector<Action>& v, const std::vector<Action>& tail) {
  v.insert(v.end(), tail.begin(), tail.end());
}

CeSet only(CeClass c) {
  CeSet s;
  s.insert(c);
  return s;
}

// Push-only fold, no end-of-stream close. Used by the causality checks.
std::vector<CeSet> fold_push(const std::vector<Action>& windows) {
  std::vector<CeSet> out;
  Detector det;
  for (Action a : windows) out.push_back(det.push(a));
  return out;
}

}  // namespace

TEST_CASE("restroom: flush then 13 walks emits at the 13th walk") {
  auto s = seq({Action::FlushToilet});
  append(s, repeat(Action::Walk, 13));
  const auto labels = label_sequence(s);
  for (std::size_t t = 0; t < 13; ++t) CHECK(labels[t].empty());
  CHECK(labels[13] == only(CeClass::RestroomViolation));
}

TEST_CASE("restroom: walking away for exactly the threshold is not enough") {
  auto s = seq({Action::FlushToilet});
  append(s, repeat(Action::Walk, 12));
  s.push_back(Action::Wash);  // comes back and washes
  for (const CeSet& l : label_sequence(s)) CHECK(l.empty());
}

TEST_CASE("restroom: another activity before washing emits there") {
  const auto labels = label_sequence(
      seq({Action::FlushToilet, Action::Walk, Action::Walk, Action::Eat}));
  CHECK(labels[0].empty());
  CHECK(labels[1].empty());
  CHECK(labels[2].empty());
  CHECK(labels[3].contains(CeClass::RestroomViolation));
}

TEST_CASE("restroom: washing resolves the episode") {
  const auto labels = label_sequence(
      seq({Action::FlushToilet, Action::Walk, Action::Wash, Action::Eat}));
  for (const CeSet& l : labels) CHECK(!l.contains(CeClass::RestroomViolation));
}

TEST_CASE("restroom: a second flush keeps the episode open") {
  // still in the restroom: walk count starts over at the new flush
  auto s = seq({Action::FlushToilet});
  append(s, repeat(Action::Walk, 10));
  s.push_back(Action::FlushToilet);
  append(s, repeat(Action::Walk, 12));
  s.push_back(Action::Wash);
  for (const CeSet& l : label_sequence(s)) CHECK(!l.contains(CeClass::RestroomViolation));
}

TEST_CASE("restroom: no emission without a flush") {
  auto s = repeat(Action::Walk, 20);
  s.push_back(Action::Eat);
  for (const CeSet& l : label_sequence(s)) CHECK(!l.contains(CeClass::RestroomViolation));
}

TEST_CASE("diet: eating exactly at the two-minute gap is compliant") {
  auto s = seq({Action::Wash});
  append(s, repeat(Action::Sit, 23));
  s.push_back(Action::Eat);  // t = 24
  for (const CeSet& l : label_sequence(s)) CHECK(!l.contains(CeClass::DietViolation));
}

TEST_CASE("diet: eating one window past the gap emits") {
  auto s = seq({Action::Wash});
  append(s, repeat(Action::Sit, 24));
  s.push_back(Action::Eat);  // t = 25
  const auto labels = label_sequence(s);
  for (std::size_t t = 0; t < 25; ++t) CHECK(labels[t].empty());
  CHECK(labels[25] == only(CeClass::DietViolation));
}

TEST_CASE("diet: eating without ever washing emits at the first eat only") {
  auto s = repeat(Action::Sit, 5);
  append(s, repeat(Action::Eat, 4));
  const auto labels = label_sequence(s);
  CHECK(labels[5] == only(CeClass::DietViolation));
  for (std::size_t t = 6; t < labels.size(); ++t) CHECK(labels[t].empty());
}

TEST_CASE("diet: each eating bout is checked once at its first window") {
  auto s = repeat(Action::Eat, 3);  // never washed
  s.push_back(Action::Sit);
  append(s, repeat(Action::Eat, 2));  // second bout
  const auto labels = label_sequence(s);
  CHECK(labels[0] == only(CeClass::DietViolation));
  CHECK(labels[1].empty());
  CHECK(labels[2].empty());
  CHECK(labels[3].empty());
  CHECK(labels[4] == only(CeClass::DietViolation));
  CHECK(labels[5].empty());
}

TEST_CASE("diet: washing mid-sequence restarts the clock") {
  auto s = repeat(Action::Sit, 30);
  s.push_back(Action::Wash);
  append(s, repeat(Action::Sit, 10));
  s.push_back(Action::Eat);  // 11 windows after the wash
  for (const CeSet& l : label_sequence(s)) CHECK(!l.contains(CeClass::DietViolation));
}

TEST_CASE("brush: short bout emits at the second non-brush window") {
  auto s = repeat(Action::BrushTeeth, 10);
  s.push_back(Action::Sit);
  s.push_back(Action::Sit);
  const auto labels = label_sequence(s);
  for (std::size_t t = 0; t < 11; ++t) CHECK(labels[t].empty());
  CHECK(labels[11] == only(CeClass::BrushingViolation));
}

TEST_CASE("brush: exactly two minutes of brushing is compliant") {
  auto s = repeat(Action::BrushTeeth, 24);
  s.push_back(Action::Sit);
  s.push_back(Action::Sit);
  for (const CeSet& l : label_sequence(s)) CHECK(l.empty());
}

TEST_CASE("brush: a one-window gap does not end the bout") {
  auto s = repeat(Action::BrushTeeth, 5);
  s.push_back(Action::Sit);
  append(s, repeat(Action::BrushTeeth, 5));
  s.push_back(Action::Sit);
  s.push_back(Action::Sit);
  const auto labels = label_sequence(s);
  // total brush count 10 < 24, bout ends at the final sit
  for (std::size_t t = 0; t + 1 < labels.size(); ++t) CHECK(labels[t].empty());
  CHECK(labels.back() == only(CeClass::BrushingViolation));
}

TEST_CASE("brush: gap windows do not extend the brushing credit") {
  // 23 brush + gap + 1 brush is still only 24 brush windows: compliant
  auto s = repeat(Action::BrushTeeth, 23);
  s.push_back(Action::Sit);
  s.push_back(Action::BrushTeeth);
  s.push_back(Action::Sit);
  s.push_back(Action::Sit);
  for (const CeSet& l : label_sequence(s)) CHECK(l.empty());
}

TEST_CASE("brush: a short bout still open at the end of the stream emits") {
  const auto labels = label_sequence(repeat(Action::BrushTeeth, 10));
  for (std::size_t t = 0; t + 1 < labels.size(); ++t) CHECK(labels[t].empty());
  CHECK(labels.back() == only(CeClass::BrushingViolation));
}

TEST_CASE("brush: a long bout still open at the end of the stream is fine") {
  const auto labels = label_sequence(repeat(Action::BrushTeeth, 24));
  for (const CeSet& l : labels) CHECK(l.empty());
}

TEST_CASE("brush: one trailing gap window at the end of the stream emits") {
  auto s = repeat(Action::BrushTeeth, 10);
  s.push_back(Action::Sit);  // gap of 1, bout still open at stream end
  const auto labels = label_sequence(s);
  CHECK(labels.back() == only(CeClass::BrushingViolation));
}

TEST_CASE("flush then eat is a multi-label window") {
  const auto labels = label_sequence(seq({Action::FlushToilet, Action::Eat}));
  CHECK(labels[0].empty());
  CHECK(labels[1].contains(CeClass::RestroomViolation));
  CHECK(labels[1].contains(CeClass::DietViolation));
}

TEST_CASE("detector emissions at a window depend only on the prefix") {
  Rng rng(2024);
  const std::array<Action, 4> pool = {Action::Walk, Action::Eat,
                                      Action::FlushToilet, Action::Wash};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Action> base(60);
    for (Action& a : base)
      a = static_cast<Action>(rng.uniform_int(0, static_cast<int>(kActionCount) - 1));
    const auto base_out = fold_push(base);
    for (int rewrite = 0; rewrite < 20; ++rewrite) {
      const int cut = rng.uniform_int(1, 59);
      std::vector<Action> variant = base;
      for (std::size_t t = static_cast<std::size_t>(cut); t < variant.size(); ++t)
        variant[t] = pool[static_cast<std::size_t>(rng.uniform_int(0, 3))];
      const auto variant_out = fold_push(variant);
      for (int t = 0; t < cut; ++t)
        REQUIRE(variant_out[static_cast<std::size_t>(t)] ==
                base_out[static_cast<std::size_t>(t)]);
    }
  }
}

TEST_CASE("label_sequence equals the manual push fold plus final close") {
  Rng rng(4711);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Action> s(rng.uniform_int(1, 80));
    for (Action& a : s)
      a = static_cast<Action>(rng.uniform_int(0, static_cast<int>(kActionCount) - 1));
    auto expected = fold_push(s);
    Detector det;
    for (Action a : s) det.push(a);
    expected.back() |= det.finish();
    REQUIRE(label_sequence(s) == expected);
  }
}

TEST_CASE("label_sequence of an empty stream is empty") {
  CHECK(label_sequence(std::vector<Action>{}).empty());
}

TEST_CASE("fsm state stays within its bounds on arbitrary input") {
  Rng rng(99);
  Detector det;
  for (int i = 0; i < 20000; ++i) {
    det.push(static_cast<Action>(rng.uniform_int(0, static_cast<int>(kActionCount) - 1)));
    CHECK(det.restroom().walk_count() <= kWalkAwayThreshold);
    CHECK(det.diet().windows_since_wash() <= kWashToEatThreshold + 1);
    CHECK(det.brush().brush_count() <= kBrushMinWindows);
    CHECK(det.brush().gap_count() < kBrushStopGap);
  }
}
