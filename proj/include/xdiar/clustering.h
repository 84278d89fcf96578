// xdiar/clustering.h

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

#ifndef XDIAR_CLUSTERING_H_
#define XDIAR_CLUSTERING_H_

#include <Eigen/Dense>
#include <vector>

namespace xdiar {

// Symmetric pairwise similarity matrix over segments. Validated on
// construction: finite and symmetric within 1e-10.
struct ScoreMatrix {
  Eigen::MatrixXd scores;

  ScoreMatrix() = default;
  explicit ScoreMatrix(Eigen::MatrixXd s);

  Eigen::Index size() const { return scores.rows(); }
};

enum class Linkage { average };

struct AhcConfig {
  // Merging stops once the best pair's linkage similarity drops below
  // threshold + under_cluster_offset; a positive offset stops earlier and
  // leaves more clusters, which is how the under-clustered initialization
  // for the HMM stage is produced.
  double threshold = 0.0;
  double under_cluster_offset = 0.0;
  Linkage linkage = Linkage::average;
};

// Greedy agglomeration with average linkage: repeatedly merge the pair of
// clusters with the highest mean pairwise score until the best pair falls
// below the effective threshold. Ties break on the smallest (i, j) pair of
// current cluster indices, so the result is deterministic. Returned ids are
// 0..K-1 in order of first appearance.
std::vector<int> ahc_cluster(const ScoreMatrix& s, const AhcConfig& cfg);

// Element-wise arithmetic mean of equally-sized score matrices.
ScoreMatrix fuse_scores(const std::vector<ScoreMatrix>& matrices);

}  // namespace xdiar

#endif  // XDIAR_CLUSTERING_H_
