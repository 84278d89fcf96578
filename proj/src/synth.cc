// xdiar/synth.cc

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

#include "xdiar/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "xdiar/error.h"
#include "xdiar/timeline.h"

namespace xdiar {

double Rng::uniform() {
  // 53 uniformly random mantissa bits in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

int Rng::uniform_int(int n) {
  const int v = static_cast<int>(uniform() * n);
  return v >= n ? n - 1 : v;
}

namespace {

// Symmetric PSD square root via eigendecomposition.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  return eig.eigenvectors() *
         eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

Eigen::VectorXd sample_normal(Rng& rng, Eigen::Index dim) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace

SynthResult synth_generate(const SynthConfig& cfg) {
  if (cfg.n_speakers < 1 || cfg.n_subsegments < 1) {
    throw Error(errc::invalid_argument, "need at least one speaker and sub-segment");
  }
  if (!(cfg.loop_p > 0.0 && cfg.loop_p < 1.0)) {
    throw Error(errc::invalid_argument, "loop_p must lie in (0, 1)");
  }
  if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0)) {
    throw Error(errc::invalid_argument, "overlap_fraction must lie in [0, 1)");
  }
  if (!(cfg.window > 0.0) || !(cfg.step > 0.0) || cfg.step > cfg.window) {
    throw Error(errc::invalid_argument, "invalid window/step geometry");
  }
  const Eigen::Index dim = cfg.plda.dim();
  if (dim < 1) {
    throw Error(errc::invalid_argument, "synthesis needs a PLDA model");
  }

  Rng rng(cfg.seed);
  const Eigen::MatrixXd v_factor = spd_sqrt(cfg.plda.across_class);
  const Eigen::MatrixXd w_factor = spd_sqrt(cfg.plda.within_class);

  std::vector<Eigen::VectorXd> latents(static_cast<size_t>(cfg.n_speakers));
  for (auto& y : latents) y = sample_normal(rng, dim);

  // First-order speaker chain; a switch picks one of the others uniformly.
  std::vector<int> states(static_cast<size_t>(cfg.n_subsegments));
  states[0] = rng.uniform_int(cfg.n_speakers);
  for (int t = 1; t < cfg.n_subsegments; ++t) {
    const int prev = states[static_cast<size_t>(t - 1)];
    if (cfg.n_speakers == 1 || rng.uniform() < cfg.loop_p) {
      states[static_cast<size_t>(t)] = prev;
    } else {
      int pick = rng.uniform_int(cfg.n_speakers - 1);
      if (pick >= prev) ++pick;
      states[static_cast<size_t>(t)] = pick;
    }
  }

  std::vector<TimedSegment> segments(static_cast<size_t>(cfg.n_subsegments));
  Eigen::MatrixXd vectors(cfg.n_subsegments, dim);
  for (int t = 0; t < cfg.n_subsegments; ++t) {
    TimedSegment& s = segments[static_cast<size_t>(t)];
    s.recording_id = cfg.recording_id;
    s.channel = 0;
    s.onset = t * cfg.step;
    s.duration = cfg.window;
    vectors.row(t) = (cfg.plda.mean +
                      v_factor * latents[static_cast<size_t>(states[static_cast<size_t>(t)])] +
                      w_factor * sample_normal(rng, dim))
                         .transpose();
  }

  const std::vector<std::string> names = default_speaker_names(cfg.n_speakers);
  Annotation reference = merge_labeled_subsegments(segments, states, names);

  // Second concurrent speakers on a random subset of sub-segments; the
  // embedding itself stays single-speaker, only the reference (and the true
  // overlap list) records the extra speaker over the sub-segment's tile.
  std::vector<int> second(static_cast<size_t>(cfg.n_subsegments), -1);
  std::vector<OverlapSegment> overlaps;
  const int n_overlap =
      static_cast<int>(cfg.overlap_fraction * cfg.n_subsegments);
  if (n_overlap > 0 && cfg.n_speakers > 1) {
    const std::vector<TimeTile> tiles = subsegment_tiles(segments);
    std::vector<int> order(static_cast<size_t>(cfg.n_subsegments));
    for (int t = 0; t < cfg.n_subsegments; ++t) order[static_cast<size_t>(t)] = t;
    for (int t = cfg.n_subsegments - 1; t > 0; --t) {  // Fisher-Yates
      std::swap(order[static_cast<size_t>(t)],
                order[static_cast<size_t>(rng.uniform_int(t + 1))]);
    }
    order.resize(static_cast<size_t>(n_overlap));
    std::sort(order.begin(), order.end());
    for (int t : order) {
      const int first = states[static_cast<size_t>(t)];
      int pick = rng.uniform_int(cfg.n_speakers - 1);
      if (pick >= first) ++pick;
      second[static_cast<size_t>(t)] = pick;
      const TimeTile& tile = tiles[static_cast<size_t>(t)];
      AnnotationEntry e;
      e.recording_id = cfg.recording_id;
      e.onset = tile.onset;
      e.duration = tile.end - tile.onset;
      e.speaker = names[static_cast<size_t>(pick)];
      reference.entries.push_back(std::move(e));
      overlaps.push_back(OverlapSegment{cfg.recording_id, tile.onset,
                                        tile.end - tile.onset});
    }
  }

  return SynthResult{EmbeddingSet(std::move(segments), std::move(vectors)),
                     std::move(reference), std::move(states), std::move(second),
                     std::move(overlaps)};
}

std::vector<EmbeddingSet> add_channel_noise(const EmbeddingSet& base,
                                            const PldaModel& model,
                                            int n_channels, uint64_t seed) {
  if (n_channels < 1) {
    throw Error(errc::invalid_argument, "need at least one channel");
  }
  if (model.dim() != base.dim()) {
    throw Error(errc::dimension_mismatch, "model and embedding dims differ");
  }
  Rng rng(seed);
  const Eigen::MatrixXd w_factor = spd_sqrt(model.within_class);
  std::vector<EmbeddingSet> channels;
  channels.reserve(static_cast<size_t>(n_channels));
  for (int c = 0; c < n_channels; ++c) {
    Eigen::MatrixXd vectors = base.vectors();
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      vectors.row(i) += (w_factor * sample_normal(rng, base.dim())).transpose();
    }
    std::vector<TimedSegment> segments = base.segments();
    for (auto& s : segments) s.channel = c;
    channels.emplace_back(std::move(segments), std::move(vectors));
  }
  return channels;
}

}  // namespace xdiar
