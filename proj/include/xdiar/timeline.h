// xdiar/timeline.h

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

#ifndef XDIAR_TIMELINE_H_
#define XDIAR_TIMELINE_H_

#include <string>
#include <vector>

#include "xdiar/types.h"

namespace xdiar {

// Cuts each speech region into overlapping sub-segments: starts at onset,
// onset+step, ...; each sub-segment has length min(window, remaining).
// A final sub-segment shorter than step is merged into the previous one
// (it adds no coverage, so it is dropped); a region shorter than the window
// yields one sub-segment covering it. The union of sub-segments equals the
// region and no sub-segment extends past the region end.
//
// Requires window > 0, 0 < step <= window, and regions non-overlapping
// within each recording.
std::vector<TimedSegment> uniform_subsegments(
    const std::vector<TimedSegment>& speech_regions, double window,
    double step);

// Non-overlapping time tile owned by each sub-segment: boundaries at the
// midpoints between consecutive sub-segment centers, clipped to the first
// sub-segment's onset and the last one's end within each contiguous run.
// Consecutive sub-segments that do not touch in time (a gap between speech
// regions) start a new run. The tiles of one run exactly cover the run's
// time span.
struct TimeTile {
  double onset = 0.0;
  double end = 0.0;
};
std::vector<TimeTile> subsegment_tiles(
    const std::vector<TimedSegment>& subsegments);

// Merges per-sub-segment hard labels into timed speaker segments using the
// tile boundaries above; adjacent tiles with the same label become a single
// entry. label_of maps a cluster id to the emitted speaker name.
Annotation merge_labeled_subsegments(
    const std::vector<TimedSegment>& subsegments, const std::vector<int>& labels,
    const std::vector<std::string>& label_names);

// Convenience "spk0".."spkK-1" naming, ids relabeled by first appearance.
std::vector<std::string> default_speaker_names(int n_speakers);

}  // namespace xdiar

#endif  // XDIAR_TIMELINE_H_
