// xdiar/vbhmm.cc

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

#include "xdiar/vbhmm.h"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "xdiar/error.h"
#include "xdiar/timeline.h"

namespace xdiar {

namespace {

void check_config(const VbhmmConfig& cfg) {
  if (!(cfg.fa > 0.0) || !(cfg.fb > 0.0)) {
    throw Error(errc::invalid_argument, "fa and fb must be positive");
  }
  if (!(cfg.loop_p > 0.0 && cfg.loop_p < 1.0)) {
    throw Error(errc::invalid_argument, "loop_p must lie in (0, 1)");
  }
  if (cfg.max_iters < 1 || !(cfg.elbo_rel_tol > 0.0) ||
      !(cfg.min_occupancy > 0.0) ||
      !(cfg.init_smoothing >= 0.0 && cfg.init_smoothing < 1.0)) {
    throw Error(errc::invalid_argument, "invalid VB-HMM configuration");
  }
}

// The model must be LDA-projected: within-class covariance identity and
// across-class covariance diagonal, so the factor loading V with
// B = V V^T is simply diag(sqrt(B_rr)).
Eigen::VectorXd factor_loading(const PldaModel& model) {
  const Eigen::Index r = model.dim();
  if ((model.within_class - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() >
      1e-6) {
    throw Error(errc::invalid_argument,
                "model not projected: within-class covariance is not identity");
  }
  const Eigen::MatrixXd off =
      model.across_class - model.across_class.diagonal().asDiagonal().toDenseMatrix();
  const double scale = std::max(1.0, model.across_class.diagonal().cwiseAbs().maxCoeff());
  if (off.cwiseAbs().maxCoeff() > 1e-6 * scale) {
    throw Error(errc::invalid_argument,
                "model not projected: across-class covariance is not diagonal");
  }
  return model.across_class.diagonal().cwiseMax(0.0).cwiseSqrt();
}

double logsumexp_row(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf stays -inf
  return m + std::log((v.array() - m).exp().sum());
}

void check_state(const VbState& state, const EmbeddingSet& data,
                 const PldaModel& model) {
  if (state.num_frames() != data.size()) {
    throw Error(errc::count_mismatch,
                "state and data disagree on the number of frames");
  }
  const auto s = static_cast<size_t>(state.num_speakers());
  if (state.speaker_posteriors.size() != s || state.speaker_priors.size() !=
      state.num_speakers()) {
    throw Error(errc::count_mismatch, "inconsistent speaker counts in state");
  }
  for (const auto& post : state.speaker_posteriors) {
    // Empty fields stand for the prior (zero mean, identity covariance).
    if ((post.mean.size() != 0 && post.mean.size() != model.dim()) ||
        (post.covariance.size() != 0 && post.covariance.rows() != model.dim())) {
      throw Error(errc::dimension_mismatch,
                  "speaker posterior dim does not match the projected model");
    }
  }
}

}  // namespace

std::vector<int> VbState::hard_labels() const {
  std::vector<int> labels(static_cast<size_t>(num_frames()));
  for (Eigen::Index t = 0; t < num_frames(); ++t) {
    int best = 0;
    for (Eigen::Index s = 1; s < num_speakers(); ++s) {
      if (responsibilities(t, s) > responsibilities(t, best)) best = static_cast<int>(s);
    }
    labels[static_cast<size_t>(t)] = best;
  }
  return labels;
}

VbState init_from_labels(const std::vector<int>& labels, double smoothing) {
  if (labels.empty()) {
    throw Error(errc::empty_input, "cannot initialize from empty labels");
  }
  if (!(smoothing >= 0.0 && smoothing < 1.0)) {
    throw Error(errc::invalid_argument, "smoothing must lie in [0, 1)");
  }
  // Relabel by first appearance so columns are 0..S-1.
  std::map<int, int> remap;
  std::vector<int> ids(labels.size());
  for (size_t t = 0; t < labels.size(); ++t) {
    auto [it, inserted] = remap.emplace(labels[t], static_cast<int>(remap.size()));
    ids[t] = it->second;
  }
  const auto n_speakers = static_cast<Eigen::Index>(remap.size());
  const auto n_frames = static_cast<Eigen::Index>(labels.size());

  VbState state;
  const double off = n_speakers > 1
                         ? smoothing / static_cast<double>(n_speakers - 1)
                         : 0.0;
  const double own = n_speakers > 1 ? 1.0 - smoothing : 1.0;
  state.responsibilities = Eigen::MatrixXd::Constant(n_frames, n_speakers, off);
  for (Eigen::Index t = 0; t < n_frames; ++t) {
    state.responsibilities(t, ids[static_cast<size_t>(t)]) = own;
  }
  state.speaker_priors =
      Eigen::VectorXd::Constant(n_speakers, 1.0 / static_cast<double>(n_speakers));
  state.speaker_posteriors.resize(static_cast<size_t>(n_speakers));
  return state;
}

Eigen::MatrixXd emission_log_likelihoods(const VbState& state,
                                         const EmbeddingSet& data,
                                         const PldaModel& projected_model,
                                         const VbhmmConfig& cfg) {
  check_config(cfg);
  check_state(state, data, projected_model);
  const Eigen::VectorXd v = factor_loading(projected_model);
  const Eigen::Index r = projected_model.dim();
  const Eigen::Index t_count = data.size();
  const Eigen::Index s_count = state.num_speakers();
  const double log2pi = std::log(2.0 * std::numbers::pi);

  // Posteriors are speaker-specific; the mean was not yet allocated for a
  // fresh state, in which case the prior (0, I) applies.
  Eigen::MatrixXd centered =
      data.vectors().rowwise() - projected_model.mean.transpose();  // T x R
  const Eigen::VectorXd frame_const =
      -0.5 * (static_cast<double>(r) * log2pi +
              centered.rowwise().squaredNorm().array())
           .matrix();

  Eigen::MatrixXd loglik(t_count, s_count);
  const Eigen::VectorXd v_sq = v.cwiseProduct(v);
  for (Eigen::Index s = 0; s < s_count; ++s) {
    const SpeakerPosterior& post = state.speaker_posteriors[static_cast<size_t>(s)];
    Eigen::VectorXd mean = post.mean.size() == r ? post.mean : Eigen::VectorXd::Zero(r);
    Eigen::MatrixXd cov = post.covariance.size() > 0
                              ? post.covariance
                              : Eigen::MatrixXd::Identity(r, r);
    // E[||x - m - V y||^2] = ||x - m||^2 - 2 (x-m)^T V a + tr(V^T V (Sigma + a a^T))
    const double second_moment =
        v_sq.dot(cov.diagonal()) + mean.cwiseProduct(v).squaredNorm();
    const Eigen::VectorXd v_mean = v.cwiseProduct(mean);  // V a
    loglik.col(s) = frame_const + centered * v_mean -
                    Eigen::VectorXd::Constant(t_count, 0.5 * second_moment);
  }
  return cfg.fa * loglik;
}

VbState update_speaker_posteriors(VbState state, const EmbeddingSet& data,
                                  const PldaModel& projected_model,
                                  const VbhmmConfig& cfg) {
  check_config(cfg);
  check_state(state, data, projected_model);
  const Eigen::VectorXd v = factor_loading(projected_model);
  const Eigen::Index r = projected_model.dim();
  const double scale = cfg.fa / cfg.fb;

  const Eigen::MatrixXd centered =
      data.vectors().rowwise() - projected_model.mean.transpose();  // T x R
  const Eigen::VectorXd occ = state.occupancies();
  // f_s = sum_t gamma_ts (x_t - m), all speakers at once: S x R.
  const Eigen::MatrixXd weighted_sums = state.responsibilities.transpose() * centered;

  const Eigen::VectorXd v_sq = v.cwiseProduct(v);
  for (Eigen::Index s = 0; s < state.num_speakers(); ++s) {
    // Diagonal precision I + (fa/fb) n_s V^T V; V is diagonal after the LDA
    // projection so everything stays elementwise.
    const Eigen::VectorXd precision =
        Eigen::VectorXd::Ones(r) + scale * occ(s) * v_sq;
    SpeakerPosterior& post = state.speaker_posteriors[static_cast<size_t>(s)];
    post.covariance = precision.cwiseInverse().asDiagonal();
    post.mean = scale * precision.cwiseInverse().cwiseProduct(
                            v.cwiseProduct(weighted_sums.row(s).transpose()));
  }
  return state;
}

VbState update_assignments(VbState state, const EmbeddingSet& data,
                           const PldaModel& projected_model,
                           const VbhmmConfig& cfg) {
  const Eigen::MatrixXd loglik =
      emission_log_likelihoods(state, data, projected_model, cfg);
  const Eigen::Index t_count = loglik.rows();
  const Eigen::Index s_count = loglik.cols();
  const Eigen::VectorXd log_pi = state.speaker_priors.array().log();
  const double log_move = std::log1p(-cfg.loop_p);

  // log p(s -> s') = log(loop_p [s == s'] + (1 - loop_p) pi_{s'}).
  Eigen::MatrixXd log_tr(s_count, s_count);
  for (Eigen::Index s2 = 0; s2 < s_count; ++s2) {
    const double move = log_move + log_pi(s2);
    for (Eigen::Index s1 = 0; s1 < s_count; ++s1) {
      log_tr(s1, s2) = s1 == s2
                           ? std::log(cfg.loop_p + (1.0 - cfg.loop_p) *
                                                      state.speaker_priors(s2))
                           : move;
    }
  }

  Eigen::MatrixXd log_alpha(t_count, s_count), log_beta(t_count, s_count);
  log_alpha.row(0) = (log_pi + loglik.row(0).transpose()).transpose();
  for (Eigen::Index t = 1; t < t_count; ++t) {
    for (Eigen::Index s2 = 0; s2 < s_count; ++s2) {
      log_alpha(t, s2) =
          logsumexp_row(log_alpha.row(t - 1).transpose() + log_tr.col(s2)) +
          loglik(t, s2);
    }
  }
  log_beta.row(t_count - 1).setZero();
  for (Eigen::Index t = t_count - 2; t >= 0; --t) {
    for (Eigen::Index s1 = 0; s1 < s_count; ++s1) {
      log_beta(t, s1) = logsumexp_row(log_tr.row(s1).transpose() +
                                      loglik.row(t + 1).transpose() +
                                      log_beta.row(t + 1).transpose());
    }
  }
  const double log_z = logsumexp_row(log_alpha.row(t_count - 1).transpose());

  for (Eigen::Index t = 0; t < t_count; ++t) {
    const Eigen::VectorXd row =
        (log_alpha.row(t).transpose() + log_beta.row(t).transpose() -
         Eigen::VectorXd::Constant(s_count, log_z))
            .array()
            .exp();
    // Renormalize so each row sums to one exactly despite exp drift.
    const double sum = row.sum();
    if (sum > 0.0) {
      state.responsibilities.row(t) = (row / sum).transpose();
    } else {
      state.responsibilities.row(t).setConstant(1.0 / static_cast<double>(s_count));
    }
  }
  state.log_evidence = log_z;

  // Priors re-estimated from expected occupancies of the non-loop branch:
  // pi_s ∝ gamma_1s + sum_{t>1} P(z_t = s, entered via the pi branch). This
  // is an EM step on the transition mixture, so the reported objective never
  // decreases.
  Eigen::VectorXd new_pi = state.responsibilities.row(0).transpose();
  for (Eigen::Index t = 1; t < t_count; ++t) {
    const double in_mass = logsumexp_row(log_alpha.row(t - 1).transpose());
    for (Eigen::Index s = 0; s < s_count; ++s) {
      new_pi(s) += std::exp(in_mass + log_move + log_pi(s) + loglik(t, s) +
                            log_beta(t, s) - log_z);
    }
  }
  state.speaker_priors = new_pi / new_pi.sum();
  return state;
}

double compute_elbo(const VbState& state, const EmbeddingSet& data,
                    const PldaModel& projected_model, const VbhmmConfig& cfg) {
  check_config(cfg);
  check_state(state, data, projected_model);

  double log_z = state.log_evidence;
  if (!state.has_log_evidence()) {
    // Forward pass only; no responsibilities are touched.
    const Eigen::MatrixXd loglik =
        emission_log_likelihoods(state, data, projected_model, cfg);
    const Eigen::Index t_count = loglik.rows();
    const Eigen::Index s_count = loglik.cols();
    const Eigen::VectorXd log_pi = state.speaker_priors.array().log();
    Eigen::MatrixXd log_tr(s_count, s_count);
    for (Eigen::Index s2 = 0; s2 < s_count; ++s2) {
      for (Eigen::Index s1 = 0; s1 < s_count; ++s1) {
        const double p = (s1 == s2 ? cfg.loop_p : 0.0) +
                         (1.0 - cfg.loop_p) * state.speaker_priors(s2);
        log_tr(s1, s2) = std::log(p);
      }
    }
    Eigen::VectorXd prev = log_pi + loglik.row(0).transpose();
    for (Eigen::Index t = 1; t < t_count; ++t) {
      Eigen::VectorXd next(s_count);
      for (Eigen::Index s2 = 0; s2 < s_count; ++s2) {
        next(s2) = logsumexp_row(prev + log_tr.col(s2)) + loglik(t, s2);
      }
      prev = std::move(next);
    }
    log_z = logsumexp_row(prev);
  }

  double kl = 0.0;
  const Eigen::Index r = projected_model.dim();
  for (const auto& post : state.speaker_posteriors) {
    if (post.mean.size() != r || post.covariance.size() == 0) continue;  // prior
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(post.covariance);
    kl += 0.5 * (post.covariance.trace() + post.mean.squaredNorm() -
                 static_cast<double>(r) -
                 eig.eigenvalues().array().log().sum());
  }
  return log_z - cfg.fb * kl;
}

VbState prune_speakers(VbState state, const VbhmmConfig& cfg) {
  check_config(cfg);
  const Eigen::VectorXd occ = state.occupancies();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index s = 0; s < state.num_speakers(); ++s) {
    if (occ(s) >= cfg.min_occupancy) keep.push_back(s);
  }
  if (keep.empty()) {
    Eigen::Index best = 0;
    occ.maxCoeff(&best);
    keep.push_back(best);
  }
  if (static_cast<Eigen::Index>(keep.size()) == state.num_speakers()) {
    return state;  // nothing dropped
  }

  const auto s_new = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd resp(state.num_frames(), s_new);
  Eigen::VectorXd pi(s_new);
  std::vector<SpeakerPosterior> posts(static_cast<size_t>(s_new));
  for (Eigen::Index k = 0; k < s_new; ++k) {
    resp.col(k) = state.responsibilities.col(keep[static_cast<size_t>(k)]);
    pi(k) = state.speaker_priors(keep[static_cast<size_t>(k)]);
    posts[static_cast<size_t>(k)] =
        state.speaker_posteriors[static_cast<size_t>(keep[static_cast<size_t>(k)])];
  }
  for (Eigen::Index t = 0; t < resp.rows(); ++t) {
    const double sum = resp.row(t).sum();
    if (sum > 0.0) {
      resp.row(t) /= sum;
    } else {
      resp.row(t).setConstant(1.0 / static_cast<double>(s_new));
    }
  }
  state.responsibilities = std::move(resp);
  state.speaker_priors = pi / pi.sum();
  state.speaker_posteriors = std::move(posts);
  state.log_evidence = std::numeric_limits<double>::quiet_NaN();
  return state;
}

VbInferenceResult vb_inference(const EmbeddingSet& data,
                               const PldaModel& projected_model,
                               const std::vector<int>& init_labels,
                               const VbhmmConfig& cfg) {
  check_config(cfg);
  if (data.size() == 0) {
    throw Error(errc::empty_input, "no embeddings to cluster");
  }
  if (data.recording_ids().size() != 1) {
    throw Error(errc::invalid_argument,
                "vb_inference expects a single recording; split the set first");
  }
  if (static_cast<Eigen::Index>(init_labels.size()) != data.size()) {
    throw Error(errc::count_mismatch, "one initial label per sub-segment required");
  }

  VbState state = init_from_labels(init_labels, cfg.init_smoothing);
  double prev_elbo = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    state = update_speaker_posteriors(state, data, projected_model, cfg);
    state = update_assignments(state, data, projected_model, cfg);
    const Eigen::Index before = state.num_speakers();
    state = prune_speakers(state, cfg);
    const bool pruned = state.num_speakers() < before;
    if (pruned) {
      // Re-smooth on the reduced speaker set so the stored chain and the
      // responsibilities stay consistent for the next ELBO and iteration.
      state = update_assignments(state, data, projected_model, cfg);
    }
    const double elbo = compute_elbo(state, data, projected_model, cfg);
    state.elbo_trace.push_back(elbo);
    if (!pruned && !std::isnan(prev_elbo) &&
        std::abs(elbo - prev_elbo) <= cfg.elbo_rel_tol * std::abs(elbo)) {
      break;
    }
    prev_elbo = pruned ? std::numeric_limits<double>::quiet_NaN() : elbo;
  }

  // Relabel the argmax labels by first appearance for stable output naming.
  std::vector<int> raw = state.hard_labels();
  std::map<int, int> remap;
  std::vector<int> labels(raw.size());
  for (size_t t = 0; t < raw.size(); ++t) {
    auto [it, inserted] = remap.emplace(raw[t], static_cast<int>(remap.size()));
    labels[t] = it->second;
  }
  Annotation annotation = merge_labeled_subsegments(
      data.segments(), labels, default_speaker_names(static_cast<int>(remap.size())));
  return VbInferenceResult{std::move(annotation), std::move(state), std::move(labels)};
}

}  // namespace xdiar
