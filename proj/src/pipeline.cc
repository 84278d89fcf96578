// xdiar/pipeline.cc

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

#include "xdiar/pipeline.h"

#include <cmath>
#include <utility>

#include "xdiar/error.h"
#include "xdiar/timeline.h"

namespace xdiar {

namespace {

// Rethrows stage failures with the stage name prepended, keeping the code.
template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

PldaModel effective_model(const Models& models, const PipelineConfig& cfg) {
  if (models.plda_indomain) {
    return interpolate_plda(models.plda, *models.plda_indomain, cfg.plda_alpha);
  }
  return models.plda;
}

EmbeddingSet maybe_transform(const Models& models, const EmbeddingSet& data) {
  if (models.transform) {
    return run_stage("transform",
                     [&] { return apply_transform(*models.transform, data); });
  }
  return data;
}

Annotation diarize_one_recording(const EmbeddingSet& embeddings,
                                 const Models& models,
                                 const PipelineConfig& cfg) {
  const EmbeddingSet working = maybe_transform(models, embeddings);
  const PldaModel model = effective_model(models, cfg);

  const ScoreMatrix scores =
      run_stage("plda scoring", [&] { return pairwise_llr(model, working); });
  const std::vector<int> init_labels =
      run_stage("ahc", [&] { return ahc_cluster(scores, cfg.ahc); });

  const Eigen::Index lda_dim =
      cfg.lda_dim > 0 ? std::min<Eigen::Index>(cfg.lda_dim, model.dim())
                      : model.dim();
  const Projection projection =
      run_stage("lda", [&] { return lda_from_plda(model, lda_dim); });
  const PldaModel projected = project_model(model, projection);
  const EmbeddingSet projected_data = project_embeddings(projection, working);

  VbInferenceResult vb = run_stage("vbhmm", [&] {
    return vb_inference(projected_data, projected, init_labels, cfg.vbhmm);
  });

  if (!cfg.overlap_enabled) return std::move(vb.annotation);
  if (!models.overlap) {
    throw Error(errc::invalid_argument,
                "overlap post-processing enabled but no overlap model loaded");
  }
  // The overlap classifier sees the embeddings as provided, in the space it
  // was trained on.
  const std::vector<OverlapSegment> detected = run_stage("overlap detection", [&] {
    return detect_overlap(*models.overlap, embeddings, cfg.overlap_threshold);
  });
  return run_stage("overlap assignment", [&] {
    return assign_second_speaker(vb.annotation, detected);
  });
}

}  // namespace

Annotation diarize_single_channel(const EmbeddingSet& embeddings,
                                  const std::vector<TimedSegment>& speech_regions,
                                  const Models& models,
                                  const PipelineConfig& cfg) {
  Annotation out;
  if (embeddings.size() == 0 || speech_regions.empty()) {
    return out;  // nothing to diarize; caller decides whether to warn
  }
  for (const auto& rec : embeddings.recording_ids()) {
    Annotation part = diarize_one_recording(embeddings.recording_subset(rec),
                                            models, cfg);
    out.entries.insert(out.entries.end(),
                       std::make_move_iterator(part.entries.begin()),
                       std::make_move_iterator(part.entries.end()));
  }
  return out;
}

Annotation diarize_multichannel(const std::vector<EmbeddingSet>& channels,
                                const Models& models, const PipelineConfig& cfg) {
  if (channels.empty()) {
    throw Error(errc::empty_input, "no channels given");
  }
  const EmbeddingSet& first = channels.front();
  for (const auto& ch : channels) {
    if (ch.size() != first.size()) {
      throw Error(errc::timeline_mismatch,
                  "channels disagree on the number of segments");
    }
    for (Eigen::Index i = 0; i < ch.size(); ++i) {
      const auto& a = first.segments()[static_cast<size_t>(i)];
      const auto& b = ch.segments()[static_cast<size_t>(i)];
      if (a.recording_id != b.recording_id ||
          std::abs(a.onset - b.onset) > 1e-6 ||
          std::abs(a.duration - b.duration) > 1e-6) {
        throw Error(errc::timeline_mismatch,
                    "channels disagree on segment " + std::to_string(i));
      }
    }
  }

  Annotation out;
  if (first.size() == 0) return out;
  const PldaModel model = effective_model(models, cfg);
  for (const auto& rec : first.recording_ids()) {
    std::vector<ScoreMatrix> matrices;
    matrices.reserve(channels.size());
    for (const auto& ch : channels) {
      const EmbeddingSet subset = maybe_transform(models, ch.recording_subset(rec));
      matrices.push_back(
          run_stage("plda scoring", [&] { return pairwise_llr(model, subset); }));
    }
    const ScoreMatrix fused =
        run_stage("fusion", [&] { return fuse_scores(matrices); });
    // Plain AHC at the stopping threshold; the under-clustering offset only
    // applies when AHC feeds the HMM stage.
    AhcConfig ahc = cfg.ahc;
    ahc.under_cluster_offset = 0.0;
    const std::vector<int> labels =
        run_stage("ahc", [&] { return ahc_cluster(fused, ahc); });
    int n_clusters = 0;
    for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
    Annotation part = merge_labeled_subsegments(
        first.recording_subset(rec).segments(), labels,
        default_speaker_names(n_clusters));
    out.entries.insert(out.entries.end(),
                       std::make_move_iterator(part.entries.begin()),
                       std::make_move_iterator(part.entries.end()));
  }
  return out;
}

}  // namespace xdiar
