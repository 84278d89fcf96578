// xdiar/clustering.cc

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

#include "xdiar/clustering.h"

#include <limits>
#include <utility>

#include "xdiar/error.h"

namespace xdiar {

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd s) : scores(std::move(s)) {
  if (scores.rows() != scores.cols()) {
    throw Error(errc::dimension_mismatch, "score matrix must be square");
  }
  if (!scores.allFinite()) {
    throw Error(errc::non_finite_value, "score matrix has NaN/Inf entries");
  }
  if ((scores - scores.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(errc::invalid_argument, "score matrix not symmetric");
  }
}

std::vector<int> ahc_cluster(const ScoreMatrix& s, const AhcConfig& cfg) {
  const Eigen::Index n = s.size();
  if (n < 1) {
    throw Error(errc::empty_input, "cannot cluster an empty score matrix");
  }
  const double stop = cfg.threshold + cfg.under_cluster_offset;

  // Active clusters as member lists plus the matrix of pairwise score sums
  // between cluster slots; average linkage is sum / (|a| * |b|) and sums
  // merge additively, so each merge costs O(K). Merging replaces position i
  // of the active list with the union and erases position j, keeping the
  // positions the tie-break rule refers to stable.
  std::vector<std::vector<int>> members(static_cast<size_t>(n));
  std::vector<size_t> active(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    members[static_cast<size_t>(i)] = {static_cast<int>(i)};
    active[static_cast<size_t>(i)] = static_cast<size_t>(i);
  }
  Eigen::MatrixXd sums = s.scores;

  while (active.size() > 1) {
    const size_t k = active.size();
    double best = -std::numeric_limits<double>::infinity();
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i + 1 < k; ++i) {
      for (size_t j = i + 1; j < k; ++j) {
        const double link =
            sums(static_cast<Eigen::Index>(active[i]), static_cast<Eigen::Index>(active[j])) /
            (static_cast<double>(members[active[i]].size()) *
             static_cast<double>(members[active[j]].size()));
        if (link > best) {  // strict: ties keep the smallest (i, j)
          best = link;
          bi = i;
          bj = j;
        }
      }
    }
    if (best < stop) break;

    const size_t si = active[bi], sj = active[bj];
    members[si].insert(members[si].end(), members[sj].begin(), members[sj].end());
    members[sj].clear();
    for (size_t c : active) {
      if (c == si || c == sj) continue;
      sums(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(c)) +=
          sums(static_cast<Eigen::Index>(sj), static_cast<Eigen::Index>(c));
      sums(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(si)) =
          sums(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(c));
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  // Ids 0..K-1 in order of first appearance over segment indices.
  std::vector<int> raw(static_cast<size_t>(n), -1);
  for (size_t c = 0; c < active.size(); ++c) {
    for (int idx : members[active[c]]) raw[static_cast<size_t>(idx)] = static_cast<int>(c);
  }
  std::vector<int> remap(active.size(), -1);
  std::vector<int> labels(static_cast<size_t>(n));
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int& m = remap[static_cast<size_t>(raw[static_cast<size_t>(i)])];
    if (m < 0) m = next++;
    labels[static_cast<size_t>(i)] = m;
  }
  return labels;
}

ScoreMatrix fuse_scores(const std::vector<ScoreMatrix>& matrices) {
  if (matrices.empty()) {
    throw Error(errc::empty_input, "no score matrices to fuse");
  }
  const Eigen::Index n = matrices.front().size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (const auto& m : matrices) {
    if (m.size() != n) {
      throw Error(errc::dimension_mismatch, "score matrices differ in size");
    }
    acc += m.scores;
  }
  acc /= static_cast<double>(matrices.size());
  return ScoreMatrix(std::move(acc));
}

}  // namespace xdiar
