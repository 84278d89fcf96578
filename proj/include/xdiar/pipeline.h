// xdiar/pipeline.h

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

#ifndef XDIAR_PIPELINE_H_
#define XDIAR_PIPELINE_H_

#include <optional>
#include <vector>

#include "xdiar/clustering.h"
#include "xdiar/overlap.h"
#include "xdiar/plda.h"
#include "xdiar/types.h"
#include "xdiar/vbhmm.h"

namespace xdiar {

struct PipelineConfig {
  double window = 1.5;  // sub-segment length, seconds
  double step = 0.25;   // sub-segment stride, seconds
  AhcConfig ahc;
  VbhmmConfig vbhmm;
  double plda_alpha = 0.5;  // weight of the out-of-domain model when interpolating
  Eigen::Index lda_dim = 0;  // 0 keeps the full dimension
  bool overlap_enabled = false;
  double overlap_threshold = 0.5;
};

// Read-only model bundle shared across recordings.
struct Models {
  PldaModel plda;                              // out-of-domain model
  std::optional<PldaModel> plda_indomain;      // interpolated in when present
  std::optional<WhiteningTransform> transform; // applied to embeddings first
  std::optional<LogisticModel> overlap;        // required when overlap is on
};

// Full single-channel pipeline: transform -> PLDA scores -> under-clustered
// AHC -> LDA projection -> VB-HMM refinement -> optional second-speaker
// post-processing. Multi-recording sets are processed per recording. Empty
// input (or empty speech regions) yields an empty annotation.
Annotation diarize_single_channel(const EmbeddingSet& embeddings,
                                  const std::vector<TimedSegment>& speech_regions,
                                  const Models& models,
                                  const PipelineConfig& cfg);

// Multi-channel variant: per-channel PLDA score matrices are averaged and a
// single AHC pass (no HMM stage) produces the labels. All channels must
// share the same segment timeline.
Annotation diarize_multichannel(const std::vector<EmbeddingSet>& channels,
                                const Models& models, const PipelineConfig& cfg);

}  // namespace xdiar

#endif  // XDIAR_PIPELINE_H_
