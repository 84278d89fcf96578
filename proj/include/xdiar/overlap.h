// xdiar/overlap.h

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

#ifndef XDIAR_OVERLAP_H_
#define XDIAR_OVERLAP_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "xdiar/types.h"

namespace xdiar {

// Binary overlapped/clean classifier over embeddings.
struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;

  Eigen::Index dim() const { return weights.size(); }
};

enum class OverlapLabel : int { clean = 0, overlapped = 1 };

struct OverlapSegment {
  std::string recording_id;
  double onset = 0.0;
  double duration = 0.0;  // > 0

  double end() const { return onset + duration; }
};

struct OverlapTrainOptions {
  double l2 = 1e-2;            // ridge penalty on the weights (bias excluded)
  double grad_tol = 1e-8;      // stop once the gradient norm falls below this
  int max_steps = 20000;
};

// L2-regularized logistic regression fit by deterministic full-batch
// gradient descent with backtracking line search; the loss is non-increasing
// per step. Both classes must be present. loss_trace, when given, receives
// the loss after every accepted step.
LogisticModel train_overlap_classifier(const EmbeddingSet& data,
                                       const std::vector<OverlapLabel>& labels,
                                       const OverlapTrainOptions& options = {},
                                       std::vector<double>* loss_trace = nullptr);

// Sub-segments with sigmoid(w.x + b) >= prob_threshold are marked as
// overlapped; adjacent marked sub-segments merge into maximal segments with
// boundaries at the tile midpoints (see timeline.h).
std::vector<OverlapSegment> detect_overlap(const LogisticModel& model,
                                           const EmbeddingSet& data,
                                           double prob_threshold);

// For each 10 ms frame inside an overlap segment, adds the second-closest
// speaker in time according to the existing diarization (distance 0 inside a
// speaker's own segments, otherwise the gap to the nearest segment edge;
// ties break on the lower speaker label). Emitted second-speaker entries are
// clipped to the overlap segment. Existing attributions are never removed;
// with a single speaker in the recording the annotation is unchanged.
Annotation assign_second_speaker(const Annotation& diarization,
                                 const std::vector<OverlapSegment>& overlaps);

}  // namespace xdiar

#endif  // XDIAR_OVERLAP_H_
