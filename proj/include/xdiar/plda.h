// xdiar/plda.h

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

#ifndef XDIAR_PLDA_H_
#define XDIAR_PLDA_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "xdiar/clustering.h"
#include "xdiar/types.h"

namespace xdiar {

// Two-covariance PLDA: x = mean + y + e with y ~ N(0, across_class) shared
// by all embeddings of one speaker and e ~ N(0, within_class) per embedding.
struct PldaModel {
  Eigen::VectorXd mean;           // global mean m
  Eigen::MatrixXd across_class;   // B, symmetric PSD
  Eigen::MatrixXd within_class;   // W, symmetric PD

  Eigen::Index dim() const { return mean.size(); }
};

// Centering + whitening, optionally followed by length normalization to
// norm length_norm_scale (sqrt(D) keeps unit average per-dimension energy).
struct WhiteningTransform {
  Eigen::VectorXd center;
  Eigen::MatrixXd whiten;  // full rank; rows ordered by decreasing variance
  bool apply_length_norm = false;
  double length_norm_scale = 1.0;

  Eigen::Index dim() const { return center.size(); }
};

// Row-wise linear projection to a lower dimension.
struct Projection {
  Eigen::MatrixXd matrix;  // R x D, rows linearly independent

  Eigen::Index out_dim() const { return matrix.rows(); }
  Eigen::Index in_dim() const { return matrix.cols(); }
};

// Maximum-likelihood EM for the two-covariance model. Expects at least two
// distinct speakers and more embeddings than dimensions; the training
// log-likelihood is non-decreasing across iterations and is appended to
// *loglik_trace when given. Initialization is deterministic: mean = sample
// mean, B = W = half the total covariance.
PldaModel train_plda_em(const EmbeddingSet& data,
                        const std::vector<std::string>& speaker_labels,
                        int iterations,
                        std::vector<double>* loglik_trace = nullptr);

// Centering/whitening estimated on `data`; whitening is eigendecomposition
// based (Lambda^{-1/2} U^T, eigenvalues floored at 1e-6 * trace/D) so the
// transformed sample covariance is the identity. With use_length_norm the
// transform also scales every output vector to norm sqrt(D).
WhiteningTransform estimate_transform(const EmbeddingSet& data,
                                      bool use_length_norm);

// x -> length_norm(whiten * (x - center)); segments unchanged.
EmbeddingSet apply_transform(const WhiteningTransform& t,
                             const EmbeddingSet& data);

// Convex combination of two models: alpha * a + (1 - alpha) * b applied to
// mean, across- and within-class covariances. Convexity preserves PSD.
PldaModel interpolate_plda(const PldaModel& a, const PldaModel& b,
                           double alpha);

// Pairwise log-likelihood ratios: S[i][j] = log p(x_i, x_j | same speaker)
// - log p(x_i, x_j | different speakers) under the two-covariance model.
// The diagonal is computed, not zeroed.
ScoreMatrix pairwise_llr(const PldaModel& model, const EmbeddingSet& data);

// Top-R generalized eigenvectors of (B, W) by decreasing eigenvalue, scaled
// so the projected within-class covariance is the identity and the projected
// across-class covariance is diagonal. Row signs are fixed so the first
// nonzero component is positive.
Projection lda_from_plda(const PldaModel& model, Eigen::Index out_dim);

// mean' = P m; B' = P B P^T; W' = P W P^T.
PldaModel project_model(const PldaModel& model, const Projection& p);

// x -> P x per row; segments unchanged.
EmbeddingSet project_embeddings(const Projection& p, const EmbeddingSet& data);

}  // namespace xdiar

#endif  // XDIAR_PLDA_H_
