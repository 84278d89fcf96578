// xdiar/tests/test_timeline.cc

#include <random>

#include "doctest.h"
#include "xdiar/error.h"
#include "xdiar/timeline.h"

using namespace xdiar;

namespace {
TimedSegment region(const std::string& rec, double onset, double duration) {
  return TimedSegment{rec, 0, onset, duration};
}
}  // namespace

TEST_CASE("uniform_subsegments covers a long region with the 0.25 s grid") {
  const auto subs = uniform_subsegments({region("f1", 0.0, 3.0)}, 1.5, 0.25);
  REQUIRE(subs.size() == 12);
  for (size_t k = 0; k < subs.size(); ++k) {
    CHECK(subs[k].onset == doctest::Approx(0.25 * k).epsilon(1e-12));
    CHECK(subs[k].duration ==
          doctest::Approx(std::min(1.5, 3.0 - 0.25 * k)).epsilon(1e-12));
    CHECK(subs[k].end() <= 3.0 + 1e-9);
  }
  // Full windows exactly while they fit: starts 0.00, 0.25, ..., 1.50.
  for (size_t k = 0; k <= 6; ++k) CHECK(subs[k].duration == doctest::Approx(1.5));
}

TEST_CASE("region shorter than the window yields one covering sub-segment") {
  const auto subs = uniform_subsegments({region("f1", 0.0, 1.0)}, 1.5, 0.25);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].onset == doctest::Approx(0.0));
  CHECK(subs[0].duration == doctest::Approx(1.0));
}

TEST_CASE("tail shorter than the step merges into the previous sub-segment") {
  // Enumerated by hand under the tail rule: starts every 0.25 s, each
  // truncated to the region end, and the 1.50 start (0.1 s left) dropped.
  const auto subs = uniform_subsegments({region("f1", 0.0, 1.6)}, 1.5, 0.25);
  const double expected[][2] = {{0.0, 1.5},  {0.25, 1.35}, {0.5, 1.1},
                                {0.75, 0.85}, {1.0, 0.6},   {1.25, 0.35}};
  REQUIRE(subs.size() == 6);
  for (size_t k = 0; k < subs.size(); ++k) {
    CHECK(subs[k].onset == doctest::Approx(expected[k][0]).epsilon(1e-12));
    CHECK(subs[k].duration == doctest::Approx(expected[k][1]).epsilon(1e-12));
  }
}

TEST_CASE("uniform_subsegments rejects bad geometry and overlapping regions") {
  CHECK_THROWS_AS(uniform_subsegments({region("a", 0, 1)}, 0.0, 0.25), Error);
  CHECK_THROWS_AS(uniform_subsegments({region("a", 0, 1)}, 1.5, 0.0), Error);
  CHECK_THROWS_AS(uniform_subsegments({region("a", 0, 1)}, 1.5, 2.0), Error);
  CHECK_THROWS_AS(
      uniform_subsegments({region("a", 0, 2), region("a", 1.0, 2)}, 1.5, 0.25),
      Error);
  // Same span on different recordings is fine.
  CHECK_NOTHROW(
      uniform_subsegments({region("a", 0, 2), region("b", 0, 2)}, 1.5, 0.25));
}

TEST_CASE("sub-segment union equals the region for random geometries") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> length(0.05, 12.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double dur = length(rng);
    const auto subs = uniform_subsegments({region("r", 3.0, dur)}, 1.5, 0.25);
    REQUIRE(!subs.empty());
    CHECK(subs.front().onset == doctest::Approx(3.0));
    CHECK(subs.back().end() == doctest::Approx(3.0 + dur).epsilon(1e-9));
    for (size_t k = 0; k < subs.size(); ++k) {
      CHECK(subs[k].end() <= 3.0 + dur + 1e-9);
      if (k > 0) CHECK(subs[k].onset <= subs[k - 1].end() + 1e-9);  // no gaps
    }
    // Tiles partition the region exactly.
    const auto tiles = subsegment_tiles(subs);
    double covered = 0.0;
    for (size_t k = 0; k < tiles.size(); ++k) {
      covered += tiles[k].end - tiles[k].onset;
      if (k > 0) CHECK(tiles[k].onset == doctest::Approx(tiles[k - 1].end));
    }
    CHECK(covered == doctest::Approx(dur).epsilon(1e-9));
  }
}

TEST_CASE("merge_labeled_subsegments places boundaries at center midpoints") {
  const auto subs = uniform_subsegments({region("f1", 0.0, 3.0)}, 1.5, 0.25);
  std::vector<int> labels(subs.size(), 0);
  for (size_t k = 6; k < subs.size(); ++k) labels[k] = 1;
  const Annotation ann =
      merge_labeled_subsegments(subs, labels, default_speaker_names(2));
  REQUIRE(ann.entries.size() == 2);
  // Label changes between sub-segments 5 and 6; centers 2.0 and 2.25.
  const double boundary = 0.5 * (subs[5].center() + subs[6].center());
  CHECK(ann.entries[0].onset == doctest::Approx(0.0));
  CHECK(ann.entries[0].duration == doctest::Approx(boundary));
  CHECK(ann.entries[0].speaker == "spk0");
  CHECK(ann.entries[1].onset == doctest::Approx(boundary));
  CHECK(ann.entries[1].onset + ann.entries[1].duration == doctest::Approx(3.0));
  CHECK(ann.entries[1].speaker == "spk1");
}

TEST_CASE("merge_labeled_subsegments does not bridge separate regions") {
  const auto subs = uniform_subsegments(
      {region("f1", 0.0, 1.0), region("f1", 5.0, 1.0)}, 1.5, 0.25);
  REQUIRE(subs.size() == 2);
  const Annotation ann =
      merge_labeled_subsegments(subs, {0, 0}, default_speaker_names(1));
  REQUIRE(ann.entries.size() == 2);  // the 4 s gap stays silent
  CHECK(ann.entries[0].onset == doctest::Approx(0.0));
  CHECK(ann.entries[1].onset == doctest::Approx(5.0));
}
