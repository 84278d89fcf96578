// xdiar/types.cc

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

#include "xdiar/types.h"

#include <utility>

#include "xdiar/error.h"

namespace xdiar {

EmbeddingSet::EmbeddingSet(std::vector<TimedSegment> segments,
                           Eigen::MatrixXd vectors)
    : segments_(std::move(segments)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(segments_.size()) != vectors_.rows()) {
    throw Error(errc::count_mismatch,
                "segment count " + std::to_string(segments_.size()) +
                    " does not match vector count " +
                    std::to_string(vectors_.rows()));
  }
  if (!vectors_.allFinite()) {
    throw Error(errc::non_finite_value, "embedding matrix has NaN/Inf entries");
  }
  for (size_t i = 0; i < segments_.size(); ++i) {
    const TimedSegment& s = segments_[i];
    if (s.duration <= 0.0 || s.onset < 0.0 || s.channel < 0) {
      throw Error(errc::invalid_argument,
                  "segment " + std::to_string(i) + " violates invariants");
    }
    if (i > 0) {
      const TimedSegment& p = segments_[i - 1];
      if (p.recording_id > s.recording_id ||
          (p.recording_id == s.recording_id && p.onset > s.onset)) {
        throw Error(errc::invalid_argument,
                    "segments not sorted by (recording_id, onset) at row " +
                        std::to_string(i));
      }
    }
  }
}

std::vector<std::string> EmbeddingSet::recording_ids() const {
  std::vector<std::string> ids;
  for (const auto& s : segments_) {
    if (ids.empty() || ids.back() != s.recording_id) ids.push_back(s.recording_id);
  }
  return ids;
}

EmbeddingSet EmbeddingSet::recording_subset(
    const std::string& recording_id) const {
  std::vector<Eigen::Index> rows;
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].recording_id == recording_id)
      rows.push_back(static_cast<Eigen::Index>(i));
  }
  std::vector<TimedSegment> segs;
  segs.reserve(rows.size());
  Eigen::MatrixXd vecs(static_cast<Eigen::Index>(rows.size()), vectors_.cols());
  for (size_t k = 0; k < rows.size(); ++k) {
    segs.push_back(segments_[static_cast<size_t>(rows[k])]);
    vecs.row(static_cast<Eigen::Index>(k)) = vectors_.row(rows[k]);
  }
  return EmbeddingSet(std::move(segs), std::move(vecs));
}

std::vector<std::string> Annotation::recording_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : entries) {
    bool seen = false;
    for (const auto& id : ids) {
      if (id == e.recording_id) {
        seen = true;
        break;
      }
    }
    if (!seen) ids.push_back(e.recording_id);
  }
  return ids;
}

Annotation Annotation::recording_subset(const std::string& recording_id) const {
  Annotation out;
  for (const auto& e : entries) {
    if (e.recording_id == recording_id) out.entries.push_back(e);
  }
  return out;
}

const char* errc_name(errc code) {
  switch (code) {
    case errc::dimension_mismatch: return "dimension mismatch";
    case errc::count_mismatch: return "count mismatch";
    case errc::non_finite_value: return "non-finite value";
    case errc::malformed_header: return "malformed header";
    case errc::malformed_line: return "malformed line";
    case errc::invalid_argument: return "invalid argument";
    case errc::singular_matrix: return "singular matrix";
    case errc::single_class: return "single class";
    case errc::insufficient_data: return "insufficient data";
    case errc::empty_input: return "empty input";
    case errc::timeline_mismatch: return "timeline mismatch";
    case errc::empty_reference: return "empty reference";
    case errc::io_failure: return "io failure";
  }
  return "unknown error";
}

}  // namespace xdiar
