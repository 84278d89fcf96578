// xdiar/vbhmm.h

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

#ifndef XDIAR_VBHMM_H_
#define XDIAR_VBHMM_H_

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "xdiar/plda.h"
#include "xdiar/types.h"

namespace xdiar {

// Bayesian HMM over speakers with PLDA-derived emissions, inferred by
// variational Bayes. States are speakers; each speaker s carries a latent
// vector y_s with standard-normal prior, and x_t | s ~ N(m + V y_s, I) in
// the LDA-projected space where the within-class covariance is the identity
// and V V^T equals the (diagonal) across-class covariance.
struct VbhmmConfig {
  double fa = 0.4;     // acoustic scaling on emission log-likelihoods
  double fb = 11.0;    // speaker regularization; scales the latent-vector KL
  double loop_p = 0.99;  // self-transition probability (turn-duration model)
  int max_iters = 40;
  double elbo_rel_tol = 1e-6;
  double min_occupancy = 1.0;   // speakers below this soft count are dropped
  double init_smoothing = 0.1;  // mass spread off the initial hard labels
};

// Gaussian posterior q(y_s) of one speaker's latent vector.
struct SpeakerPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // SPD
};

struct VbState {
  Eigen::MatrixXd responsibilities;  // T x S, each row sums to 1
  std::vector<SpeakerPosterior> speaker_posteriors;
  Eigen::VectorXd speaker_priors;  // pi, sums to 1
  std::vector<double> elbo_trace;

  // Log normalizer of the most recent forward-backward pass, kept so
  // compute_elbo evaluates the objective for the same chain the
  // responsibilities came from. Unset until update_assignments runs and
  // invalidated when speakers are pruned.
  double log_evidence = std::numeric_limits<double>::quiet_NaN();

  Eigen::Index num_frames() const { return responsibilities.rows(); }
  Eigen::Index num_speakers() const { return responsibilities.cols(); }
  bool has_log_evidence() const { return !std::isnan(log_evidence); }

  // Soft frame counts per speaker.
  Eigen::VectorXd occupancies() const { return responsibilities.colwise().sum(); }

  // Argmax per frame; ties pick the lowest speaker index.
  std::vector<int> hard_labels() const;
};

// Smoothed one-hot initialization from cluster labels: (1 - smoothing) on the
// own cluster and smoothing / (S - 1) elsewhere (pure one-hot when S == 1).
// Priors are uniform and speaker posteriors start at the prior.
VbState init_from_labels(const std::vector<int>& labels, double smoothing);

// fa-scaled expected emission log-likelihoods E_q[log p(x_t | y_s)], T x S.
Eigen::MatrixXd emission_log_likelihoods(const VbState& state,
                                         const EmbeddingSet& data,
                                         const PldaModel& projected_model,
                                         const VbhmmConfig& cfg);

// Closed-form update of every q(y_s) from the current responsibilities:
// covariance = (I + (fa/fb) n_s V^T V)^{-1} and mean = (fa/fb) cov V^T f_s
// with n_s the occupancy and f_s the responsibility-weighted sum of centered
// frames. A speaker with zero occupancy keeps the prior.
VbState update_speaker_posteriors(VbState state, const EmbeddingSet& data,
                                  const PldaModel& projected_model,
                                  const VbhmmConfig& cfg);

// Forward-backward smoothing under transitions p(s -> s') =
// loop_p [s == s'] + (1 - loop_p) pi_{s'} and initial distribution pi, with
// the fa-scaled expected emission log-likelihoods; all in the log domain.
// Stores the chain log-evidence, then re-estimates pi from the expected
// state occupancies (first-frame posteriors plus the expected mass entering
// each state through the non-loop branch), which never decreases the
// objective reported by compute_elbo.
VbState update_assignments(VbState state, const EmbeddingSet& data,
                           const PldaModel& projected_model,
                           const VbhmmConfig& cfg);

// Evidence lower bound fa E[log p(X|Z,Y)] + E[log p(Z)] - E[log q(Z)]
// - fb sum_s KL(q(y_s) || N(0, I)). The Z terms collapse to the chain
// log-evidence of the last forward-backward pass (recomputed on the fly if
// none ran yet).
double compute_elbo(const VbState& state, const EmbeddingSet& data,
                    const PldaModel& projected_model, const VbhmmConfig& cfg);

// Drops speakers whose occupancy falls below cfg.min_occupancy and
// renormalizes responsibilities and priors. Never returns zero speakers: if
// all fall below the floor, the highest-occupancy one is kept.
VbState prune_speakers(VbState state, const VbhmmConfig& cfg);

struct VbInferenceResult {
  Annotation annotation;
  VbState state;
  std::vector<int> hard_labels;  // per sub-segment, relabeled by appearance
};

// Runs {update_speaker_posteriors; update_assignments; prune_speakers;
// compute_elbo} until the relative ELBO change drops below elbo_rel_tol or
// max_iters is reached, then merges per-frame argmax labels into an
// Annotation with boundaries at sub-segment tile midpoints. Expects data of
// a single recording and an LDA-projected model.
VbInferenceResult vb_inference(const EmbeddingSet& data,
                               const PldaModel& projected_model,
                               const std::vector<int>& init_labels,
                               const VbhmmConfig& cfg);

}  // namespace xdiar

#endif  // XDIAR_VBHMM_H_
