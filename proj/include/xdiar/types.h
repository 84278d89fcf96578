// xdiar/types.h

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

#ifndef XDIAR_TYPES_H_
#define XDIAR_TYPES_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace xdiar {

// One timed unit of audio within a recording channel. Used both for VAD
// speech regions and for the overlapping sub-segments embeddings are
// extracted from.
struct TimedSegment {
  std::string recording_id;
  int channel = 0;      // non-negative
  double onset = 0.0;   // seconds, >= 0
  double duration = 0.0;  // seconds, > 0

  double end() const { return onset + duration; }
  double center() const { return onset + 0.5 * duration; }
};

// A time-stamped sequence of fixed-dimension embeddings for one (or more)
// recordings. Immutable after construction; the constructor validates all
// invariants and throws, so no partially-constructed value escapes.
class EmbeddingSet {
 public:
  // Requires: |segments| == vectors.rows(); segments sorted by
  // (recording_id, onset); all vector entries finite; every segment valid.
  EmbeddingSet(std::vector<TimedSegment> segments, Eigen::MatrixXd vectors);

  Eigen::Index size() const { return vectors_.rows(); }
  Eigen::Index dim() const { return vectors_.cols(); }

  const std::vector<TimedSegment>& segments() const { return segments_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }

  // Distinct recording ids in segment order.
  std::vector<std::string> recording_ids() const;

  // Subset of rows belonging to one recording, preserving order.
  EmbeddingSet recording_subset(const std::string& recording_id) const;

 private:
  std::vector<TimedSegment> segments_;
  Eigen::MatrixXd vectors_;  // N x D, row i corresponds to segments_[i]
};

struct AnnotationEntry {
  std::string recording_id;
  double onset = 0.0;
  double duration = 0.0;
  std::string speaker;
};

// Diarization labels as timed, possibly-overlapping speaker segments.
// Entries for one recording may overlap in time (overlap-aware).
struct Annotation {
  std::vector<AnnotationEntry> entries;

  bool empty() const { return entries.empty(); }
  std::vector<std::string> recording_ids() const;
  Annotation recording_subset(const std::string& recording_id) const;
};

}  // namespace xdiar

#endif  // XDIAR_TYPES_H_
