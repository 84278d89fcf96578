// xdiar/timeline.cc

// Copyright 2026  xdiar authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "xdiar/timeline.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "xdiar/error.h"

namespace xdiar {

namespace {
constexpr double kTimeEps = 1e-9;
}

std::vector<TimedSegment> uniform_subsegments(
    const std::vector<TimedSegment>& speech_regions, double window,
    double step) {
  if (window <= 0.0) {
    throw Error(errc::invalid_argument, "window must be > 0");
  }
  if (step <= 0.0 || step > window + kTimeEps) {
    throw Error(errc::invalid_argument, "step must satisfy 0 < step <= window");
  }
  // Regions must not overlap within a recording.
  std::map<std::string, std::vector<const TimedSegment*>> per_rec;
  for (const auto& r : speech_regions) {
    if (r.duration <= 0.0 || r.onset < 0.0) {
      throw Error(errc::invalid_argument, "speech region violates invariants");
    }
    per_rec[r.recording_id].push_back(&r);
  }
  for (auto& [rec, regions] : per_rec) {
    std::sort(regions.begin(), regions.end(),
              [](const TimedSegment* a, const TimedSegment* b) {
                return a->onset < b->onset;
              });
    for (size_t i = 1; i < regions.size(); ++i) {
      if (regions[i]->onset < regions[i - 1]->end() - kTimeEps) {
        throw Error(errc::invalid_argument,
                    "overlapping speech regions in recording " + rec);
      }
    }
  }

  std::vector<TimedSegment> out;
  for (const auto& [rec, regions] : per_rec) {
    for (const TimedSegment* r : regions) {
      // A region shorter than the window becomes a single sub-segment
      // covering it; the start grid only applies from one window onward.
      if (r->duration < window - kTimeEps) {
        out.push_back(*r);
        continue;
      }
      for (int k = 0;; ++k) {
        const double start_off = k * step;
        const double remaining = r->duration - start_off;
        if (remaining <= kTimeEps) break;
        // Tail rule: a sub-segment shorter than the step merges into the
        // previous one (equivalently, it is dropped; the previous one
        // already reaches the region end).
        if (k > 0 && remaining < step - kTimeEps) break;
        TimedSegment s;
        s.recording_id = r->recording_id;
        s.channel = r->channel;
        s.onset = r->onset + start_off;
        s.duration = std::min(window, remaining);
        out.push_back(s);
      }
    }
  }
  return out;
}

std::vector<TimeTile> subsegment_tiles(
    const std::vector<TimedSegment>& subsegments) {
  const size_t n = subsegments.size();
  std::vector<TimeTile> tiles(n);
  size_t run_start = 0;
  for (size_t i = 0; i < n; ++i) {
    const bool last_in_run =
        i + 1 == n || subsegments[i + 1].recording_id != subsegments[i].recording_id ||
        subsegments[i + 1].onset > subsegments[i].end() + kTimeEps;
    tiles[i].onset = (i == run_start)
                         ? subsegments[i].onset
                         : 0.5 * (subsegments[i - 1].center() +
                                  subsegments[i].center());
    tiles[i].end = last_in_run
                       ? subsegments[i].end()
                       : 0.5 * (subsegments[i].center() +
                                subsegments[i + 1].center());
    if (last_in_run) run_start = i + 1;
  }
  return tiles;
}

Annotation merge_labeled_subsegments(
    const std::vector<TimedSegment>& subsegments, const std::vector<int>& labels,
    const std::vector<std::string>& label_names) {
  if (subsegments.size() != labels.size()) {
    throw Error(errc::count_mismatch, "one label per sub-segment required");
  }
  Annotation out;
  if (subsegments.empty()) return out;
  const std::vector<TimeTile> tiles = subsegment_tiles(subsegments);
  size_t i = 0;
  while (i < subsegments.size()) {
    size_t j = i;
    // Extend while same recording, same label and contiguous tiles.
    while (j + 1 < subsegments.size() &&
           subsegments[j + 1].recording_id == subsegments[i].recording_id &&
           labels[j + 1] == labels[i] &&
           std::abs(tiles[j + 1].onset - tiles[j].end) < kTimeEps) {
      ++j;
    }
    AnnotationEntry e;
    e.recording_id = subsegments[i].recording_id;
    e.onset = tiles[i].onset;
    e.duration = tiles[j].end - tiles[i].onset;
    e.speaker = label_names.at(static_cast<size_t>(labels[i]));
    out.entries.push_back(std::move(e));
    i = j + 1;
  }
  return out;
}

std::vector<std::string> default_speaker_names(int n_speakers) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(n_speakers));
  for (int s = 0; s < n_speakers; ++s) names.push_back("spk" + std::to_string(s));
  return names;
}

}  // namespace xdiar
