// xdiar/plda.cc

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

#include "xdiar/plda.h"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "xdiar/error.h"

namespace xdiar {

namespace {

constexpr double kVarianceFloorRatio = 1e-6;  // floor = ratio * trace / D

// Eigendecomposition with eigenvalues floored at floor_ratio * trace / D.
// Reconstructs only when flooring actually fires, so well-conditioned
// matrices pass through bit-identical.
Eigen::MatrixXd floor_spd(const Eigen::MatrixXd& m, double floor_ratio) {
  const double floor = floor_ratio * m.trace() / static_cast<double>(m.rows());
  if (!(floor > 0.0)) {
    throw Error(errc::singular_matrix, "covariance has non-positive trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.eigenvalues().minCoeff() >= floor) return m;
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

// Cholesky factor of an SPD matrix; throws if not positive definite.
Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const Eigen::MatrixXd& m,
                                              const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(errc::singular_matrix, std::string(what) + " is not positive definite");
  }
  return llt;
}

double logdet_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// Fixes the sign of each row so its first entry of non-negligible magnitude
// is positive; removes the eigenvector sign ambiguity.
void fix_row_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double scale = m.row(r).cwiseAbs().maxCoeff();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > 1e-12 * scale) {
        if (m(r, c) < 0.0) m.row(r) = -m.row(r);
        break;
      }
    }
  }
}

void check_model(const PldaModel& model) {
  if (model.mean.size() != model.across_class.rows() ||
      model.across_class.rows() != model.across_class.cols() ||
      model.mean.size() != model.within_class.rows() ||
      model.within_class.rows() != model.within_class.cols()) {
    throw Error(errc::dimension_mismatch, "inconsistent PLDA parameter shapes");
  }
  if (!model.mean.allFinite() || !model.across_class.allFinite() ||
      !model.within_class.allFinite()) {
    throw Error(errc::non_finite_value, "PLDA parameters contain NaN/Inf");
  }
}

struct SpeakerStats {
  double count = 0.0;
  Eigen::VectorXd sum;      // sum of embeddings
  Eigen::MatrixXd scatter;  // sum of x x^T
};

}  // namespace

PldaModel train_plda_em(const EmbeddingSet& data,
                        const std::vector<std::string>& speaker_labels,
                        int iterations, std::vector<double>* loglik_trace) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  if (static_cast<Eigen::Index>(speaker_labels.size()) != n) {
    throw Error(errc::count_mismatch, "one speaker label per embedding required");
  }
  if (iterations < 1) {
    throw Error(errc::invalid_argument, "iterations must be >= 1");
  }
  if (n < d) {
    throw Error(errc::insufficient_data,
                "fewer embeddings than dimensions; cannot estimate covariances");
  }

  std::map<std::string, SpeakerStats> stats;
  for (Eigen::Index i = 0; i < n; ++i) {
    SpeakerStats& st = stats[speaker_labels[static_cast<size_t>(i)]];
    if (st.count == 0.0) {
      st.sum = Eigen::VectorXd::Zero(d);
      st.scatter = Eigen::MatrixXd::Zero(d, d);
    }
    st.count += 1.0;
    st.sum += data.vectors().row(i).transpose();
    st.scatter += data.vectors().row(i).transpose() * data.vectors().row(i);
  }
  if (stats.size() < 2) {
    throw Error(errc::single_class, "PLDA training needs at least two speakers");
  }
  const size_t n_speakers = stats.size();

  // Deterministic init: mean = sample mean, B = W = half the total covariance.
  Eigen::VectorXd mean = data.vectors().colwise().mean().transpose();
  Eigen::MatrixXd total =
      (data.vectors().transpose() * data.vectors()) / static_cast<double>(n) -
      mean * mean.transpose();
  total = 0.5 * (total + total.transpose());
  total = floor_spd(total, kVarianceFloorRatio);
  Eigen::MatrixXd across = 0.5 * total;
  Eigen::MatrixXd within = 0.5 * total;

  const double log2pi = std::log(2.0 * std::numbers::pi);

  auto em_pass = [&](bool update_params) -> double {
    const Eigen::LLT<Eigen::MatrixXd> llt_w = cholesky_or_throw(within, "within-class covariance");
    const Eigen::LLT<Eigen::MatrixXd> llt_b = cholesky_or_throw(across, "across-class covariance");
    const Eigen::MatrixXd w_inv = llt_w.solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd b_inv = llt_b.solve(Eigen::MatrixXd::Identity(d, d));
    const double logdet_w = logdet_from_llt(llt_w);
    const double logdet_b = logdet_from_llt(llt_b);

    double loglik = 0.0;
    Eigen::VectorXd weighted_post_mean_sum = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd b_acc = Eigen::MatrixXd::Zero(d, d);
    std::map<std::string, Eigen::VectorXd> post_means;
    std::map<std::string, Eigen::MatrixXd> post_covs;

    for (const auto& [label, st] : stats) {
      const Eigen::VectorXd centered_mean = st.sum / st.count - mean;
      const Eigen::MatrixXd lambda = b_inv + st.count * w_inv;
      const Eigen::LLT<Eigen::MatrixXd> llt_l(lambda);
      const Eigen::MatrixXd cov = llt_l.solve(Eigen::MatrixXd::Identity(d, d));
      const Eigen::VectorXd y_hat = cov * (w_inv * (st.count * centered_mean));

      // Marginal log-likelihood of this speaker's embeddings under the
      // current parameters (latent y integrated out).
      const Eigen::MatrixXd centered_scatter =
          st.scatter - st.sum * mean.transpose() - mean * st.sum.transpose() +
          st.count * mean * mean.transpose();
      const double quad = (w_inv * centered_scatter).trace();
      loglik += -0.5 * st.count * d * log2pi - 0.5 * st.count * logdet_w -
                0.5 * logdet_b - 0.5 * logdet_from_llt(llt_l) - 0.5 * quad +
                0.5 * y_hat.dot(lambda * y_hat);

      if (update_params) {
        post_means[label] = y_hat;
        post_covs[label] = cov;
        weighted_post_mean_sum += st.count * y_hat;
        b_acc += y_hat * y_hat.transpose() + cov;
      }
    }

    if (update_params) {
      const Eigen::VectorXd new_mean =
          (data.vectors().colwise().sum().transpose() - weighted_post_mean_sum) /
          static_cast<double>(n);
      Eigen::MatrixXd w_acc = Eigen::MatrixXd::Zero(d, d);
      for (const auto& [label, st] : stats) {
        const Eigen::VectorXd& y_hat = post_means[label];
        const Eigen::VectorXd centered_sum = st.sum - st.count * new_mean;
        const Eigen::MatrixXd centered_scatter =
            st.scatter - st.sum * new_mean.transpose() -
            new_mean * st.sum.transpose() +
            st.count * new_mean * new_mean.transpose();
        w_acc += centered_scatter - centered_sum * y_hat.transpose() -
                 y_hat * centered_sum.transpose() +
                 st.count * (y_hat * y_hat.transpose() + post_covs[label]);
      }
      mean = new_mean;
      across = b_acc / static_cast<double>(n_speakers);
      within = w_acc / static_cast<double>(n);
      across = floor_spd(0.5 * (across + across.transpose()), kVarianceFloorRatio);
      within = floor_spd(0.5 * (within + within.transpose()), kVarianceFloorRatio);
    }
    return loglik;
  };

  for (int it = 0; it < iterations; ++it) {
    const double loglik = em_pass(true);
    if (loglik_trace) loglik_trace->push_back(loglik);
  }
  if (loglik_trace) loglik_trace->push_back(em_pass(false));

  PldaModel model{std::move(mean), std::move(across), std::move(within)};
  check_model(model);
  return model;
}

WhiteningTransform estimate_transform(const EmbeddingSet& data,
                                      bool use_length_norm) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  if (n <= d) {
    throw Error(errc::insufficient_data,
                "need more embeddings than dimensions to estimate whitening");
  }
  const Eigen::VectorXd center = data.vectors().colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.vectors().rowwise() - center.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose());

  const double floor =
      kVarianceFloorRatio * cov.trace() / static_cast<double>(d);
  if (!(floor > 0.0)) {
    throw Error(errc::singular_matrix, "sample covariance has non-positive trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);

  // Rows ordered by decreasing variance; Lambda^{-1/2} U^T.
  Eigen::MatrixXd whiten(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const Eigen::Index src = d - 1 - r;  // solver sorts ascending
    whiten.row(r) = eig.eigenvectors().col(src).transpose() / std::sqrt(vals(src));
  }
  fix_row_signs(whiten);

  WhiteningTransform t;
  t.center = center;
  t.whiten = std::move(whiten);
  t.apply_length_norm = use_length_norm;
  t.length_norm_scale = std::sqrt(static_cast<double>(d));
  return t;
}

EmbeddingSet apply_transform(const WhiteningTransform& t,
                             const EmbeddingSet& data) {
  if (t.dim() != data.dim()) {
    throw Error(errc::dimension_mismatch, "transform and embedding dims differ");
  }
  Eigen::MatrixXd out =
      (data.vectors().rowwise() - t.center.transpose()) * t.whiten.transpose();
  if (t.apply_length_norm) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double norm = out.row(i).norm();
      if (norm <= 0.0) {
        throw Error(errc::invalid_argument,
                    "zero-norm vector cannot be length-normalized (row " +
                        std::to_string(i) + ")");
      }
      out.row(i) *= t.length_norm_scale / norm;
    }
  }
  return EmbeddingSet(data.segments(), std::move(out));
}

PldaModel interpolate_plda(const PldaModel& a, const PldaModel& b,
                           double alpha) {
  check_model(a);
  check_model(b);
  if (a.dim() != b.dim()) {
    throw Error(errc::dimension_mismatch, "PLDA models have different dims");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(errc::invalid_argument, "interpolation weight must lie in [0, 1]");
  }
  PldaModel out;
  out.mean = alpha * a.mean + (1.0 - alpha) * b.mean;
  out.across_class = alpha * a.across_class + (1.0 - alpha) * b.across_class;
  out.within_class = alpha * a.within_class + (1.0 - alpha) * b.within_class;
  return out;
}

ScoreMatrix pairwise_llr(const PldaModel& model, const EmbeddingSet& data) {
  check_model(model);
  if (model.dim() != data.dim()) {
    throw Error(errc::dimension_mismatch, "model and embedding dims differ");
  }
  const Eigen::Index n = data.size();
  if (n < 2) {
    throw Error(errc::insufficient_data, "need at least two embeddings to score");
  }
  const Eigen::MatrixXd& b = model.across_class;
  const Eigen::MatrixXd& w = model.within_class;
  const Eigen::MatrixXd total = b + w;           // B + W
  const Eigen::MatrixXd same_sum = 2.0 * b + w;  // (B+W) + B

  // Joint covariance over a pair under the same-speaker hypothesis is
  // [[B+W, B], [B, B+W]]; in the (a+b, a-b) basis its blocks decouple into
  // 2B+W and W, which gives the per-pair O(D) form below.
  const Eigen::LLT<Eigen::MatrixXd> llt_same = cholesky_or_throw(same_sum, "2B + W");
  const Eigen::LLT<Eigen::MatrixXd> llt_w = cholesky_or_throw(w, "within-class covariance");
  const Eigen::LLT<Eigen::MatrixXd> llt_t = cholesky_or_throw(total, "B + W");

  const Eigen::MatrixXd centered =
      (data.vectors().rowwise() - model.mean.transpose()).transpose();  // D x N
  const Eigen::MatrixXd p_same = llt_same.matrixL().solve(centered);
  const Eigen::MatrixXd p_within = llt_w.matrixL().solve(centered);
  const Eigen::MatrixXd p_total = llt_t.matrixL().solve(centered);

  const double c_same = logdet_from_llt(llt_same) + logdet_from_llt(llt_w);
  const double c_diff = 2.0 * logdet_from_llt(llt_t);
  const Eigen::VectorXd q_total = p_total.colwise().squaredNorm().transpose();

  Eigen::MatrixXd scores(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double qu = (p_same.col(i) + p_same.col(j)).squaredNorm();
      const double qv = (p_within.col(i) - p_within.col(j)).squaredNorm();
      const double llr = -0.5 * (c_same + 0.5 * qu + 0.5 * qv) +
                         0.5 * (c_diff + q_total(i) + q_total(j));
      scores(i, j) = llr;
      scores(j, i) = llr;
    }
  }
  return ScoreMatrix(std::move(scores));
}

Projection lda_from_plda(const PldaModel& model, Eigen::Index out_dim) {
  check_model(model);
  const Eigen::Index d = model.dim();
  if (out_dim < 1 || out_dim > d) {
    throw Error(errc::invalid_argument, "projection dim must lie in [1, D]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_w(model.within_class);
  const double w_floor =
      1e-12 * std::max(1.0, model.within_class.trace()) / static_cast<double>(d);
  if (eig_w.eigenvalues().minCoeff() <= w_floor) {
    throw Error(errc::singular_matrix, "within-class covariance is singular");
  }
  const Eigen::MatrixXd w_inv_sqrt =
      eig_w.eigenvectors() *
      eig_w.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eig_w.eigenvectors().transpose();

  Eigen::MatrixXd whitened_b = w_inv_sqrt * model.across_class * w_inv_sqrt;
  whitened_b = 0.5 * (whitened_b + whitened_b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(whitened_b);

  Eigen::MatrixXd rows(out_dim, d);
  for (Eigen::Index r = 0; r < out_dim; ++r) {
    const Eigen::Index src = d - 1 - r;  // descending eigenvalue order
    rows.row(r) = eig_b.eigenvectors().col(src).transpose() * w_inv_sqrt;
  }
  fix_row_signs(rows);
  return Projection{std::move(rows)};
}

PldaModel project_model(const PldaModel& model, const Projection& p) {
  check_model(model);
  if (p.in_dim() != model.dim()) {
    throw Error(errc::dimension_mismatch, "projection and model dims differ");
  }
  PldaModel out;
  out.mean = p.matrix * model.mean;
  out.across_class = p.matrix * model.across_class * p.matrix.transpose();
  out.within_class = p.matrix * model.within_class * p.matrix.transpose();
  out.across_class = 0.5 * (out.across_class + out.across_class.transpose());
  out.within_class = 0.5 * (out.within_class + out.within_class.transpose());
  return out;
}

EmbeddingSet project_embeddings(const Projection& p, const EmbeddingSet& data) {
  if (p.in_dim() != data.dim()) {
    throw Error(errc::dimension_mismatch, "projection and embedding dims differ");
  }
  return EmbeddingSet(data.segments(), data.vectors() * p.matrix.transpose());
}

}  // namespace xdiar
