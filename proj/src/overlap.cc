// xdiar/overlap.cc

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

#include "xdiar/overlap.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "xdiar/error.h"
#include "xdiar/timeline.h"

namespace xdiar {

namespace {

constexpr double kFrameSeconds = 0.01;  // 10 ms heuristic resolution

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Mean logistic loss plus ridge penalty on the weights; y in {-1, +1}.
double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double bias, double l2) {
  const Eigen::ArrayXd margins = -(y.array() * ((x * w).array() + bias));
  // log(1 + exp(m)) computed stably for large |m|.
  const Eigen::ArrayXd loss = margins.unaryExpr([](double m) {
    return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
  });
  return loss.mean() + 0.5 * l2 * w.squaredNorm();
}

}  // namespace

LogisticModel train_overlap_classifier(const EmbeddingSet& data,
                                       const std::vector<OverlapLabel>& labels,
                                       const OverlapTrainOptions& options,
                                       std::vector<double>* loss_trace) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(errc::count_mismatch, "one label per embedding required");
  }
  if (n == 0) {
    throw Error(errc::empty_input, "no training data");
  }
  Eigen::VectorXd y(n);
  bool any_pos = false, any_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool pos = labels[static_cast<size_t>(i)] == OverlapLabel::overlapped;
    y(i) = pos ? 1.0 : -1.0;
    any_pos = any_pos || pos;
    any_neg = any_neg || !pos;
  }
  if (!any_pos || !any_neg) {
    throw Error(errc::single_class, "both overlap and clean examples required");
  }

  const Eigen::MatrixXd& x = data.vectors();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double bias = 0.0;
  double loss = logistic_loss(x, y, w, bias, options.l2);
  if (loss_trace) loss_trace->push_back(loss);
  double step = 1.0;

  for (int it = 0; it < options.max_steps; ++it) {
    // grad of mean log(1 + exp(-y f)) is -(1/N) sum y sigmoid(-y f) x.
    const Eigen::ArrayXd s = (-(y.array() * ((x * w).array() + bias))).unaryExpr(
        [](double m) { return sigmoid(m); });
    const Eigen::VectorXd residual = -(y.array() * s).matrix() / static_cast<double>(n);
    const Eigen::VectorXd grad_w = x.transpose() * residual + options.l2 * w;
    const double grad_b = residual.sum();
    const double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    if (grad_norm <= options.grad_tol) break;

    // Backtracking line search keeps the loss non-increasing.
    step *= 2.0;  // allow recovery after conservative steps
    double new_loss;
    Eigen::VectorXd new_w;
    double new_bias;
    for (;;) {
      new_w = w - step * grad_w;
      new_bias = bias - step * grad_b;
      new_loss = logistic_loss(x, y, new_w, new_bias, options.l2);
      if (new_loss <= loss - 0.5 * step * grad_norm * grad_norm || step < 1e-18) {
        break;
      }
      step *= 0.5;
    }
    if (new_loss > loss) break;  // no descent direction left at float precision
    w = std::move(new_w);
    bias = new_bias;
    loss = new_loss;
    if (loss_trace) loss_trace->push_back(loss);
  }
  return LogisticModel{std::move(w), bias};
}

std::vector<OverlapSegment> detect_overlap(const LogisticModel& model,
                                           const EmbeddingSet& data,
                                           double prob_threshold) {
  if (model.dim() != data.dim()) {
    throw Error(errc::dimension_mismatch, "model and embedding dims differ");
  }
  std::vector<char> marked(static_cast<size_t>(data.size()), 0);
  const Eigen::VectorXd scores = data.vectors() * model.weights;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    marked[static_cast<size_t>(i)] = sigmoid(scores(i) + model.bias) >= prob_threshold;
  }

  const std::vector<TimeTile> tiles = subsegment_tiles(data.segments());
  std::vector<OverlapSegment> out;
  size_t i = 0;
  while (i < marked.size()) {
    if (!marked[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < marked.size() && marked[j + 1] &&
           data.segments()[j + 1].recording_id == data.segments()[i].recording_id &&
           std::abs(tiles[j + 1].onset - tiles[j].end) < 1e-9) {
      ++j;
    }
    out.push_back(OverlapSegment{data.segments()[i].recording_id, tiles[i].onset,
                                 tiles[j].end - tiles[i].onset});
    i = j + 1;
  }
  return out;
}

namespace {

struct SpeakerTimeline {
  std::string label;
  std::vector<std::pair<double, double>> intervals;  // sorted by onset
};

// 0 inside one of the speaker's segments, otherwise the gap to the nearest
// segment edge.
double distance_to_speaker(const SpeakerTimeline& tl, double t) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : tl.intervals) {
    if (t >= a && t < b) return 0.0;
    best = std::min(best, std::min(std::abs(t - a), std::abs(t - b)));
  }
  return best;
}

}  // namespace

Annotation assign_second_speaker(const Annotation& diarization,
                                 const std::vector<OverlapSegment>& overlaps) {
  Annotation out = diarization;  // existing attribution is never removed

  std::set<std::string> recs;
  for (const auto& e : diarization.entries) recs.insert(e.recording_id);

  for (const auto& rec : recs) {
    std::map<std::string, SpeakerTimeline> timelines;
    for (const auto& e : diarization.entries) {
      if (e.recording_id != rec) continue;
      SpeakerTimeline& tl = timelines[e.speaker];
      tl.label = e.speaker;
      tl.intervals.emplace_back(e.onset, e.onset + e.duration);
    }
    if (timelines.size() < 2) continue;  // single speaker: nothing to add

    // Union the overlap regions of this recording so stacked or touching
    // inputs do not add a second speaker twice; one frame gains at most one
    // extra attribution.
    std::vector<std::pair<double, double>> regions;
    for (const auto& ov : overlaps) {
      if (ov.recording_id == rec && ov.duration > 0.0) {
        regions.emplace_back(ov.onset, ov.end());
      }
    }
    std::sort(regions.begin(), regions.end());
    std::vector<OverlapSegment> merged;
    for (const auto& [a, b] : regions) {
      if (!merged.empty() && a <= merged.back().end()) {
        merged.back().duration = std::max(merged.back().end(), b) - merged.back().onset;
      } else {
        merged.push_back(OverlapSegment{rec, a, b - a});
      }
    }

    for (const auto& ov : merged) {
      // Pick per 10 ms frame the second-closest speaker; frames merge into
      // runs and each run is clipped to the overlap segment so nothing leaks
      // outside it.
      const int first_frame = static_cast<int>(std::floor(ov.onset / kFrameSeconds));
      std::string run_label;
      double run_start = 0.0, run_end = 0.0;
      auto flush = [&]() {
        if (run_label.empty()) return;
        const double a = std::max(run_start, ov.onset);
        const double b = std::min(run_end, ov.end());
        if (b > a) {
          out.entries.push_back(AnnotationEntry{rec, a, b - a, run_label});
        }
        run_label.clear();
      };
      for (int f = first_frame;; ++f) {
        const double frame_start = f * kFrameSeconds;
        const double center = frame_start + 0.5 * kFrameSeconds;
        if (center >= ov.end()) break;
        if (center < ov.onset) continue;

        // Two closest speakers in time; ties break on the lower label. The
        // nearest one is the current attribution (distance 0 inside its own
        // segment); the second is what gets added.
        std::string best_label, second_label;
        double best_dist = std::numeric_limits<double>::infinity();
        double second_dist = std::numeric_limits<double>::infinity();
        for (const auto& [label, tl] : timelines) {  // map order = lower label first
          const double dist = distance_to_speaker(tl, center);
          if (dist < best_dist) {
            second_dist = best_dist;
            second_label = best_label;
            best_dist = dist;
            best_label = label;
          } else if (dist < second_dist) {
            second_dist = dist;
            second_label = label;
          }
        }
        if (second_label.empty()) continue;
        if (second_label == run_label) {
          run_end = frame_start + kFrameSeconds;
        } else {
          flush();
          run_label = second_label;
          run_start = frame_start;
          run_end = frame_start + kFrameSeconds;
        }
      }
      flush();
    }
  }
  return out;
}

}  // namespace xdiar
