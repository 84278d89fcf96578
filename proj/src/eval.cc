// xdiar/eval.cc

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

#include "xdiar/eval.h"

#include <algorithm>
#include <limits>
#include <set>
#include <vector>

#include "xdiar/error.h"

namespace xdiar {

namespace {

// Minimum-cost assignment on a square matrix (Jonker-Volgenant style
// potentials, O(n^3)). Returns for each row the assigned column.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<size_t>(n) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = match[static_cast<size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                           u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[static_cast<size_t>(j)] > 0) {
      row_to_col[static_cast<size_t>(match[static_cast<size_t>(j)] - 1)] = j - 1;
    }
  }
  return row_to_col;
}

std::vector<std::string> sorted_labels(const Annotation& a) {
  std::set<std::string> s;
  for (const auto& e : a.entries) s.insert(e.speaker);
  return {s.begin(), s.end()};
}

// Accumulates, within one recording, the co-activity duration of every
// (ref label, hyp label) pair into the matrix.
void accumulate_coactivity(const Annotation& ref, const Annotation& hyp,
                           const std::vector<std::string>& ref_labels,
                           const std::vector<std::string>& hyp_labels,
                           std::vector<std::vector<double>>* overlap) {
  std::vector<double> points;
  for (const auto& e : ref.entries) {
    points.push_back(e.onset);
    points.push_back(e.onset + e.duration);
  }
  for (const auto& e : hyp.entries) {
    points.push_back(e.onset);
    points.push_back(e.onset + e.duration);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto index_of = [](const std::vector<std::string>& labels, const std::string& l) {
    return static_cast<size_t>(std::lower_bound(labels.begin(), labels.end(), l) -
                               labels.begin());
  };

  for (size_t k = 0; k + 1 < points.size(); ++k) {
    const double a = points[k], b = points[k + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    std::vector<char> ref_active(ref_labels.size(), 0), hyp_active(hyp_labels.size(), 0);
    for (const auto& e : ref.entries) {
      if (e.onset <= mid && mid < e.onset + e.duration) {
        ref_active[index_of(ref_labels, e.speaker)] = 1;
      }
    }
    for (const auto& e : hyp.entries) {
      if (e.onset <= mid && mid < e.onset + e.duration) {
        hyp_active[index_of(hyp_labels, e.speaker)] = 1;
      }
    }
    for (size_t r = 0; r < ref_labels.size(); ++r) {
      if (!ref_active[r]) continue;
      for (size_t h = 0; h < hyp_labels.size(); ++h) {
        if (hyp_active[h]) (*overlap)[r][h] += b - a;
      }
    }
  }
}

std::map<std::string, std::string> mapping_from_overlap(
    const std::vector<std::string>& ref_labels,
    const std::vector<std::string>& hyp_labels,
    const std::vector<std::vector<double>>& overlap) {
  const size_t n = std::max(ref_labels.size(), hyp_labels.size());
  std::map<std::string, std::string> mapping;
  if (n == 0) return mapping;
  // Maximize attributed time == minimize negated overlap, padded square.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (size_t r = 0; r < ref_labels.size(); ++r) {
    for (size_t h = 0; h < hyp_labels.size(); ++h) cost[r][h] = -overlap[r][h];
  }
  const std::vector<int> row_to_col = assign_min_cost(cost);
  for (size_t r = 0; r < ref_labels.size(); ++r) {
    const int h = row_to_col[r];
    if (h >= 0 && static_cast<size_t>(h) < hyp_labels.size() &&
        overlap[r][static_cast<size_t>(h)] > 0.0) {
      mapping[hyp_labels[static_cast<size_t>(h)]] = ref_labels[r];
    }
  }
  return mapping;
}

void validate_annotation(const Annotation& a, const char* what) {
  for (const auto& e : a.entries) {
    if (e.duration <= 0.0) {
      throw Error(errc::invalid_argument,
                  std::string(what) + " contains a non-positive duration");
    }
    if (e.speaker.empty()) {
      throw Error(errc::invalid_argument,
                  std::string(what) + " contains an empty speaker label");
    }
  }
}

}  // namespace

std::map<std::string, std::string> optimal_mapping(const Annotation& ref,
                                                   const Annotation& hyp) {
  validate_annotation(ref, "reference");
  validate_annotation(hyp, "hypothesis");
  const std::vector<std::string> ref_labels = sorted_labels(ref);
  const std::vector<std::string> hyp_labels = sorted_labels(hyp);
  std::vector<std::vector<double>> overlap(
      ref_labels.size(), std::vector<double>(hyp_labels.size(), 0.0));

  std::set<std::string> recs;
  for (const auto& e : ref.entries) recs.insert(e.recording_id);
  for (const auto& e : hyp.entries) recs.insert(e.recording_id);
  for (const auto& rec : recs) {
    accumulate_coactivity(ref.recording_subset(rec), hyp.recording_subset(rec),
                          ref_labels, hyp_labels, &overlap);
  }
  return mapping_from_overlap(ref_labels, hyp_labels, overlap);
}

DerBreakdown compute_der(const Annotation& ref, const Annotation& hyp,
                         double collar, bool score_overlap) {
  validate_annotation(ref, "reference");
  validate_annotation(hyp, "hypothesis");
  if (collar < 0.0) {
    throw Error(errc::invalid_argument, "collar must be non-negative");
  }

  DerBreakdown out;
  std::set<std::string> recs;
  for (const auto& e : ref.entries) recs.insert(e.recording_id);
  for (const auto& e : hyp.entries) recs.insert(e.recording_id);

  for (const auto& rec : recs) {
    const Annotation r = ref.recording_subset(rec);
    const Annotation h = hyp.recording_subset(rec);
    const std::vector<std::string> ref_labels = sorted_labels(r);
    const std::vector<std::string> hyp_labels = sorted_labels(h);

    // Breakpoints from both annotations plus collar edges around reference
    // boundaries; every elementary interval then has constant active sets.
    std::vector<double> points;
    std::vector<std::pair<double, double>> excluded;
    for (const auto& e : r.entries) {
      points.push_back(e.onset);
      points.push_back(e.onset + e.duration);
      if (collar > 0.0) {
        excluded.emplace_back(e.onset - collar, e.onset + collar);
        excluded.emplace_back(e.onset + e.duration - collar,
                              e.onset + e.duration + collar);
      }
    }
    for (const auto& e : h.entries) {
      points.push_back(e.onset);
      points.push_back(e.onset + e.duration);
    }
    for (const auto& [a, b] : excluded) {
      points.push_back(a);
      points.push_back(b);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto scored = [&](double mid) {
      for (const auto& [a, b] : excluded) {
        if (a <= mid && mid < b) return false;
      }
      return true;
    };

    // Mapping maximizing attributed time on the scored timeline.
    std::vector<std::vector<double>> overlap(
        ref_labels.size(), std::vector<double>(hyp_labels.size(), 0.0));
    auto active_sets = [&](double mid, std::vector<char>* ra, std::vector<char>* ha) {
      ra->assign(ref_labels.size(), 0);
      ha->assign(hyp_labels.size(), 0);
      for (const auto& e : r.entries) {
        if (e.onset <= mid && mid < e.onset + e.duration) {
          (*ra)[static_cast<size_t>(std::lower_bound(ref_labels.begin(), ref_labels.end(),
                                                     e.speaker) -
                                    ref_labels.begin())] = 1;
        }
      }
      for (const auto& e : h.entries) {
        if (e.onset <= mid && mid < e.onset + e.duration) {
          (*ha)[static_cast<size_t>(std::lower_bound(hyp_labels.begin(), hyp_labels.end(),
                                                     e.speaker) -
                                    hyp_labels.begin())] = 1;
        }
      }
    };

    std::vector<char> ra, ha;
    for (size_t k = 0; k + 1 < points.size(); ++k) {
      const double a = points[k], b = points[k + 1];
      if (b <= a) continue;
      const double mid = 0.5 * (a + b);
      if (!scored(mid)) continue;
      active_sets(mid, &ra, &ha);
      const int n_ref = static_cast<int>(std::count(ra.begin(), ra.end(), 1));
      if (!score_overlap && n_ref > 1) continue;
      for (size_t ri = 0; ri < ref_labels.size(); ++ri) {
        if (!ra[ri]) continue;
        for (size_t hi = 0; hi < hyp_labels.size(); ++hi) {
          if (ha[hi]) overlap[ri][hi] += b - a;
        }
      }
    }
    const std::map<std::string, std::string> mapping =
        mapping_from_overlap(ref_labels, hyp_labels, overlap);

    for (size_t k = 0; k + 1 < points.size(); ++k) {
      const double a = points[k], b = points[k + 1];
      if (b <= a) continue;
      const double mid = 0.5 * (a + b);
      if (!scored(mid)) continue;
      active_sets(mid, &ra, &ha);
      const int n_ref = static_cast<int>(std::count(ra.begin(), ra.end(), 1));
      const int n_hyp = static_cast<int>(std::count(ha.begin(), ha.end(), 1));
      if (!score_overlap && n_ref > 1) continue;
      if (n_ref == 0 && n_hyp == 0) continue;
      int n_correct = 0;
      for (size_t hi = 0; hi < hyp_labels.size(); ++hi) {
        if (!ha[hi]) continue;
        const auto it = mapping.find(hyp_labels[hi]);
        if (it == mapping.end()) continue;
        const size_t ri = static_cast<size_t>(
            std::lower_bound(ref_labels.begin(), ref_labels.end(), it->second) -
            ref_labels.begin());
        if (ri < ref_labels.size() && ra[ri]) ++n_correct;
      }
      const double dur = b - a;
      out.total_speech += dur * n_ref;
      out.miss += dur * std::max(0, n_ref - n_hyp);
      out.false_alarm += dur * std::max(0, n_hyp - n_ref);
      out.speaker_error += dur * (std::min(n_ref, n_hyp) - n_correct);
    }
  }

  if (out.total_speech <= 0.0) {
    throw Error(errc::empty_reference, "no scored reference speech");
  }
  out.der = (out.miss + out.false_alarm + out.speaker_error) / out.total_speech;
  return out;
}

}  // namespace xdiar
