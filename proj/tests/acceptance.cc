// xdiar/tests/acceptance.cc
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails. The first argument is
// the path to the xdiar CLI binary (used by the determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "test_util.h"
#include "xdiar/clustering.h"
#include "xdiar/eval.h"
#include "xdiar/io.h"
#include "xdiar/overlap.h"
#include "xdiar/plda.h"
#include "xdiar/synth.h"
#include "xdiar/timeline.h"
#include "xdiar/vbhmm.h"

using namespace xdiar;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("%s  criterion %2d  %-34s %s  (%.2fs)\n", pass ? "PASS" : "FAIL",
              id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
void run_criterion(int id, const std::string& name, Fn&& fn) {
  Timer timer;
  bool pass = false;
  std::string detail;
  try {
    detail = fn();
    pass = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(id, name, pass, detail, timer.seconds());
}

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CheckFailure(what);
}

PldaModel random_model(std::mt19937_64& rng, Eigen::Index dim) {
  PldaModel m;
  m.mean = testutil::random_matrix(rng, dim, 1);
  m.across_class = testutil::random_spd(rng, dim);
  m.within_class = testutil::random_spd(rng, dim);
  return m;
}

PldaModel diag_model(Eigen::Index dim, double across) {
  PldaModel m;
  m.mean = Eigen::VectorXd::Zero(dim);
  m.across_class = across * Eigen::MatrixXd::Identity(dim, dim);
  m.within_class = Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

// ---------------------------------------------------------------------------
// 1. PLDA LLR oracle agreement
std::string criterion_llr() {
  Timer timer;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(instance % 8);
    const PldaModel model = random_model(rng, dim);
    const Eigen::MatrixXd x = testutil::random_matrix(rng, 4, dim);
    const ScoreMatrix s = pairwise_llr(model, testutil::embedding_set(x));
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double want =
            oracle::llr(model, x.row(i).transpose(), x.row(j).transpose());
        worst = std::max(worst, std::abs(s.scores(i, j) - want));
      }
    }
  }
  require(worst < 1e-8, "llr deviation " + std::to_string(worst));
  require(timer.seconds() < 5.0, "too slow");
  return "100 instances, max |diff| = " + std::to_string(worst);
}

// ---------------------------------------------------------------------------
// 2. PLDA EM monotonicity and recovery
std::string criterion_em() {
  Timer timer;
  std::mt19937_64 rng(2003);
  const Eigen::Index dim = 4;
  const int speakers = 500, per_speaker = 10;

  // Truth with a dominant across-class direction: the relative Frobenius
  // error of a covariance recovered from 500 speaker draws is then well
  // below the 10% gate instead of sitting right on the sqrt((D+1)/n) floor
  // of an isotropic spectrum.
  PldaModel truth;
  truth.mean = testutil::random_matrix(rng, dim, 1);
  {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(testutil::random_matrix(rng, dim, dim));
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::Vector4d spectrum(3.0, 0.3, 0.2, 0.1);
    truth.across_class = q * spectrum.asDiagonal() * q.transpose();
  }
  truth.within_class = testutil::random_spd(rng, dim, 0.3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(truth.across_class);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(truth.within_class);
  const Eigen::MatrixXd b_half = eb.operatorSqrt();
  const Eigen::MatrixXd w_half = ew.operatorSqrt();

  Eigen::MatrixXd x(speakers * per_speaker, dim);
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(speakers * per_speaker));
  for (int s = 0; s < speakers; ++s) {
    const Eigen::VectorXd y = b_half * testutil::random_matrix(rng, dim, 1);
    for (int i = 0; i < per_speaker; ++i) {
      x.row(s * per_speaker + i) =
          (truth.mean + y + w_half * testutil::random_matrix(rng, dim, 1)).transpose();
      labels.push_back("s" + std::to_string(s));
    }
  }

  std::vector<double> trace;
  const PldaModel fitted =
      train_plda_em(testutil::embedding_set(x), labels, 30, &trace);
  for (size_t k = 1; k < trace.size(); ++k) {
    require(trace[k] >= trace[k - 1] - 1e-9 * std::abs(trace[k]),
            "log-likelihood decreased at iteration " + std::to_string(k));
  }
  const double b_err = (fitted.across_class - truth.across_class).norm() /
                       truth.across_class.norm();
  const double w_err = (fitted.within_class - truth.within_class).norm() /
                       truth.within_class.norm();
  require(b_err < 0.10, "B error " + std::to_string(b_err));
  require(w_err < 0.10, "W error " + std::to_string(w_err));
  require(timer.seconds() < 30.0, "too slow");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "rel Frobenius errors B %.3f, W %.3f", b_err, w_err);
  return buf;
}

// ---------------------------------------------------------------------------
// 3. LDA from PLDA
std::string criterion_lda() {
  std::mt19937_64 rng(3003);
  double worst_identity = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 7);
    const Eigen::Index out_dim = 1 + static_cast<Eigen::Index>(rng() % dim);
    const PldaModel model = random_model(rng, dim);
    const Projection p = lda_from_plda(model, out_dim);
    const PldaModel projected = project_model(model, p);
    worst_identity = std::max(
        worst_identity,
        (projected.within_class - Eigen::MatrixXd::Identity(out_dim, out_dim))
            .cwiseAbs()
            .maxCoeff());

    const Eigen::MatrixXd w_inv_b = model.within_class.llt().solve(model.across_class);
    Eigen::EigenSolver<Eigen::MatrixXd> dense(w_inv_b);
    std::vector<double> eigs(static_cast<size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      eigs[static_cast<size_t>(i)] = dense.eigenvalues()(i).real();
    }
    std::sort(eigs.begin(), eigs.end(), std::greater<>());
    for (Eigen::Index r = 0; r < out_dim; ++r) {
      worst_eig = std::max(worst_eig,
                           std::abs(projected.across_class(r, r) -
                                    eigs[static_cast<size_t>(r)]));
    }
  }
  require(worst_identity < 1e-8, "within-class deviation " + std::to_string(worst_identity));
  require(worst_eig < 1e-8, "eigenvalue deviation " + std::to_string(worst_eig));
  char buf[128];
  std::snprintf(buf, sizeof(buf), "identity dev %.2e, eig dev %.2e", worst_identity,
                worst_eig);
  return buf;
}

// ---------------------------------------------------------------------------
// 4. AHC against the exhaustive reference
std::string criterion_ahc() {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> thr(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd s = testutil::random_symmetric(rng, 8);
    s.diagonal().setZero();
    const double threshold = thr(rng);
    const auto got = ahc_cluster(ScoreMatrix(s), AhcConfig{.threshold = threshold});
    const auto want = oracle::agglomerate(s, threshold);
    require(got == want, "partition mismatch at trial " + std::to_string(trial));
  }
  return "200 random 8x8 cases, exact partition equality";
}

// ---------------------------------------------------------------------------
// 5. VB-HMM
std::string criterion_vbhmm() {
  Timer timer;

  // (b) E-step equivalence against exhaustive path enumeration.
  {
    std::mt19937_64 rng(5005);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      const int t_count = 5 + static_cast<int>(rng() % 4);
      const int s_count = 2 + static_cast<int>(rng() % 2);
      const PldaModel model = diag_model(1, 2.5);
      Eigen::MatrixXd x(t_count, 1);
      std::vector<int> labels(static_cast<size_t>(t_count));
      for (int t = 0; t < t_count; ++t) {
        x(t, 0) = normal(rng);
        labels[static_cast<size_t>(t)] = t % s_count;
      }
      VbhmmConfig cfg;
      cfg.fa = 0.6;
      cfg.fb = 4.0;
      cfg.loop_p = 0.85;
      cfg.init_smoothing = 0.05;
      VbState state = init_from_labels(labels, cfg.init_smoothing);
      const EmbeddingSet data = testutil::embedding_set(x);
      state = update_speaker_posteriors(state, data, model, cfg);
      const Eigen::VectorXd pi = state.speaker_priors;
      const Eigen::MatrixXd emissions = emission_log_likelihoods(state, data, model, cfg);
      state = update_assignments(state, data, model, cfg);
      const oracle::ChainEnumeration want =
          oracle::enumerate_chain(emissions, pi, cfg.loop_p);
      const double dev =
          (state.responsibilities - want.posteriors).cwiseAbs().maxCoeff();
      require(dev < 1e-8, "posterior deviation " + std::to_string(dev));
    }
  }

  // (a, c, d) trajectories on the seeded synthetic suite.
  VbhmmConfig cfg;
  cfg.fa = 0.4;
  cfg.fb = 6.0;
  cfg.loop_p = 0.95;

  SynthConfig scfg;
  scfg.plda = diag_model(6, 9.0);
  scfg.n_speakers = 3;
  scfg.n_subsegments = 240;
  scfg.loop_p = 0.95;

  // (d) six-cluster init converges to exactly three speakers.
  {
    scfg.seed = 500;
    const SynthResult synth = synth_generate(scfg);
    std::vector<int> init(synth.first_speaker.size());
    std::vector<int> seen(3, 0);
    for (size_t t = 0; t < init.size(); ++t) {
      const int spk = synth.first_speaker[t];
      init[t] = spk * 2 + (++seen[static_cast<size_t>(spk)] > 40 ? 1 : 0);
    }
    const VbInferenceResult result =
        vb_inference(synth.embeddings, scfg.plda, init, cfg);
    require(result.state.num_speakers() == 3,
            "expected 3 speakers, got " +
                std::to_string(result.state.num_speakers()));
    const double der = compute_der(synth.reference, result.annotation).der;
    require(der < 0.05, "DER " + std::to_string(der));
  }

  // (a, c) monotone ELBO and non-increasing speaker count on every seed;
  // (d) BHMM at least matches AHC on >= 90% of 50 seeds.
  int bhmm_wins = 0;
  for (int seed = 0; seed < 50; ++seed) {
    scfg.seed = 5100 + static_cast<uint64_t>(seed);
    const SynthResult synth = synth_generate(scfg);
    const ScoreMatrix scores = pairwise_llr(scfg.plda, synth.embeddings);

    const std::vector<int> plain =
        ahc_cluster(scores, AhcConfig{.threshold = 0.0});
    int n_plain = 0;
    for (int l : plain) n_plain = std::max(n_plain, l + 1);
    const Annotation ahc_annotation = merge_labeled_subsegments(
        synth.embeddings.segments(), plain, default_speaker_names(n_plain));
    const double ahc_der = compute_der(synth.reference, ahc_annotation).der;

    const std::vector<int> init = ahc_cluster(
        scores, AhcConfig{.threshold = 0.0, .under_cluster_offset = 40.0});

    VbState state = init_from_labels(init, cfg.init_smoothing);
    std::vector<double> elbo;
    std::vector<bool> pruned_at;
    Eigen::Index prev_speakers = state.num_speakers();
    for (int it = 0; it < cfg.max_iters; ++it) {
      state = update_speaker_posteriors(state, synth.embeddings, scfg.plda, cfg);
      state = update_assignments(state, synth.embeddings, scfg.plda, cfg);
      const Eigen::Index before = state.num_speakers();
      state = prune_speakers(state, cfg);
      const bool pruned = state.num_speakers() < before;
      if (pruned) {
        state = update_assignments(state, synth.embeddings, scfg.plda, cfg);
      }
      require(state.num_speakers() <= prev_speakers, "speaker count increased");
      prev_speakers = state.num_speakers();
      elbo.push_back(compute_elbo(state, synth.embeddings, scfg.plda, cfg));
      pruned_at.push_back(pruned);
    }
    for (size_t k = 1; k < elbo.size(); ++k) {
      if (pruned_at[k]) continue;
      require(elbo[k] >= elbo[k - 1] - 1e-8 * std::abs(elbo[k]),
              "ELBO decreased at iteration " + std::to_string(k) + " seed " +
                  std::to_string(seed));
    }

    const VbInferenceResult vb =
        vb_inference(synth.embeddings, scfg.plda, init, cfg);
    const double vb_der = compute_der(synth.reference, vb.annotation).der;
    if (vb_der <= ahc_der + 1e-12) ++bhmm_wins;
  }
  require(bhmm_wins >= 45, "BHMM <= AHC on only " + std::to_string(bhmm_wins) +
                               "/50 seeds");
  require(timer.seconds() < 60.0, "too slow");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "ELBO monotone; BHMM <= AHC on %d/50 seeds",
                bhmm_wins);
  return buf;
}

// ---------------------------------------------------------------------------
// 6. DER scorer against brute-force permutation mapping
std::string criterion_der() {
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_annotation = [&](int n_speakers) {
    Annotation out;
    double t = 2.0 * unif(rng);
    while (t < 25.0) {
      const double dur = 0.3 + 3.0 * unif(rng);
      out.entries.push_back(AnnotationEntry{
          "rec", t, dur, "w" + std::to_string(rng() % static_cast<uint64_t>(n_speakers))});
      t += dur + (unif(rng) < 0.4 ? unif(rng) : 0.0);
    }
    return out;
  };

  for (int trial = 0; trial < 100; ++trial) {
    const int ref_speakers = 2 + static_cast<int>(rng() % 4);
    const int hyp_speakers = 2 + static_cast<int>(rng() % 5);
    const Annotation ref = random_annotation(ref_speakers);
    const Annotation hyp = random_annotation(hyp_speakers);
    const DerBreakdown fast = compute_der(ref, hyp);
    const DerBreakdown slow = oracle::best_permutation_der(ref, hyp);
    require(fast.miss == slow.miss && fast.false_alarm == slow.false_alarm &&
                fast.speaker_error == slow.speaker_error &&
                fast.total_speech == slow.total_speech,
            "breakdown mismatch at trial " + std::to_string(trial));

    if (trial % 10 == 0) {
      require(compute_der(ref, ref).der == 0.0, "self-score not zero");
      Annotation renamed = ref;
      for (auto& e : renamed.entries) e.speaker = "zz" + e.speaker;
      require(compute_der(ref, renamed).der == 0.0, "relabeling changed DER");
    }
  }
  return "100 cases equal to the permutation oracle; relabel-invariant";
}

// ---------------------------------------------------------------------------
// 7. Interpolation
std::string criterion_interpolation() {
  std::mt19937_64 rng(7007);
  const PldaModel m = random_model(rng, 5);
  const PldaModel same = interpolate_plda(m, m, 0.5);
  require((same.mean - m.mean).cwiseAbs().maxCoeff() == 0.0 &&
              (same.across_class - m.across_class).cwiseAbs().maxCoeff() == 0.0 &&
              (same.within_class - m.within_class).cwiseAbs().maxCoeff() == 0.0,
          "idempotence violated");

  PldaModel a, b;
  a.mean = Eigen::VectorXd::Constant(1, 0.0);
  a.across_class = Eigen::MatrixXd::Constant(1, 1, 1.0);
  a.within_class = Eigen::MatrixXd::Constant(1, 1, 1.0);
  b.mean = Eigen::VectorXd::Constant(1, 2.0);
  b.across_class = Eigen::MatrixXd::Constant(1, 1, 3.0);
  b.within_class = Eigen::MatrixXd::Constant(1, 1, 5.0);
  const PldaModel avg = interpolate_plda(a, b, 0.5);
  require(avg.mean(0) == 1.0 && avg.across_class(0, 0) == 2.0 &&
              avg.within_class(0, 0) == 3.0,
          "1-D averaging example failed");
  return "idempotence and 1-D averaging exact";
}

// ---------------------------------------------------------------------------
// 8. Fusion exactness plus the multi-channel property
std::string criterion_fusion() {
  std::mt19937_64 rng(8008);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a = testutil::random_symmetric(rng, 6);
    Eigen::MatrixXd b = testutil::random_symmetric(rng, 6);
    Eigen::MatrixXd c = testutil::random_symmetric(rng, 6);
    const ScoreMatrix fused = fuse_scores({ScoreMatrix(a), ScoreMatrix(b), ScoreMatrix(c)});
    const Eigen::MatrixXd want = (a + b + c) / 3.0;
    require((fused.scores - want).cwiseAbs().maxCoeff() == 0.0, "mean not exact");
  }

  SynthConfig scfg;
  scfg.plda = diag_model(6, 9.0);
  scfg.n_speakers = 3;
  scfg.n_subsegments = 200;
  scfg.loop_p = 0.95;

  double fused_der_sum = 0.0, channel_der_sum = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    scfg.seed = 8100 + static_cast<uint64_t>(seed);
    const SynthResult synth = synth_generate(scfg);
    const auto channels =
        add_channel_noise(synth.embeddings, scfg.plda, 4, scfg.seed + 1);

    std::vector<ScoreMatrix> matrices;
    double per_channel = 0.0;
    for (const auto& ch : channels) {
      matrices.push_back(pairwise_llr(scfg.plda, ch));
      const auto labels = ahc_cluster(matrices.back(), AhcConfig{.threshold = 0.0});
      int n = 0;
      for (int l : labels) n = std::max(n, l + 1);
      const Annotation ann = merge_labeled_subsegments(
          ch.segments(), labels, default_speaker_names(n));
      per_channel += compute_der(synth.reference, ann).der / 4.0;
    }
    const auto fused_labels =
        ahc_cluster(fuse_scores(matrices), AhcConfig{.threshold = 0.0});
    int n = 0;
    for (int l : fused_labels) n = std::max(n, l + 1);
    const Annotation fused_ann = merge_labeled_subsegments(
        synth.embeddings.segments(), fused_labels, default_speaker_names(n));
    fused_der_sum += compute_der(synth.reference, fused_ann).der;
    channel_der_sum += per_channel;
  }
  require(fused_der_sum <= channel_der_sum + 1e-12,
          "fusion mean DER " + std::to_string(fused_der_sum / 20.0) +
              " vs channels " + std::to_string(channel_der_sum / 20.0));
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mean DER fused %.4f <= channels %.4f",
                fused_der_sum / 20.0, channel_der_sum / 20.0);
  return buf;
}

// ---------------------------------------------------------------------------
// 9. Overlap post-processing
std::string criterion_overlap() {
  SynthConfig scfg;
  scfg.plda = diag_model(6, 9.0);
  scfg.n_speakers = 3;
  scfg.n_subsegments = 200;
  scfg.loop_p = 0.95;
  scfg.overlap_fraction = 0.15;

  VbhmmConfig cfg;
  cfg.fa = 0.4;
  cfg.fb = 6.0;
  cfg.loop_p = 0.95;

  double before_sum = 0.0, after_sum = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    scfg.seed = 9100 + static_cast<uint64_t>(seed);
    const SynthResult synth = synth_generate(scfg);
    const ScoreMatrix scores = pairwise_llr(scfg.plda, synth.embeddings);
    const std::vector<int> init = ahc_cluster(
        scores, AhcConfig{.threshold = 0.0, .under_cluster_offset = 40.0});
    const VbInferenceResult vb = vb_inference(synth.embeddings, scfg.plda, init, cfg);

    const Annotation after = assign_second_speaker(vb.annotation, synth.overlaps);

    // Additivity: every original attribution survives verbatim.
    for (size_t i = 0; i < vb.annotation.entries.size(); ++i) {
      const auto& want = vb.annotation.entries[i];
      const auto& got = after.entries[i];
      require(want.recording_id == got.recording_id && want.onset == got.onset &&
                  want.duration == got.duration && want.speaker == got.speaker,
              "attribution removed at seed " + std::to_string(seed));
    }

    const double der_before = compute_der(synth.reference, vb.annotation).der;
    const double der_after = compute_der(synth.reference, after).der;
    require(der_after <= der_before + 1e-12,
            "post-processing raised DER at seed " + std::to_string(seed));
    before_sum += der_before;
    after_sum += der_after;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mean DER %.4f -> %.4f over 50 seeds",
                before_sum / 50.0, after_sum / 50.0);
  return buf;
}

// ---------------------------------------------------------------------------
// 10. End-to-end determinism of the CLI
std::string criterion_determinism(const std::string& cli) {
  require(!cli.empty(), "CLI path not given");
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "xdiar_acceptance";
  fs::create_directories(dir);

  auto shell = [&](const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    require(rc == 0, "command failed: " + cmd);
  };
  const std::string base = (dir / "synth").string();
  shell(cli + " synth --speakers 3 --subsegments 160 --seed 42" +
        " --plda-out " + base + ".plda --embeddings-out " + base + ".xve" +
        " --segments-out " + base + ".segments --rttm-out " + base +
        ".ref.rttm > /dev/null");

  auto diarize = [&](const std::string& out) {
    shell(cli + " diarize --embeddings " + base + ".xve --segments " + base +
          ".segments --plda " + base +
          ".plda --under-cluster-offset 40 --fa 0.4 --fb 6 --loop-p 0.95" +
          " --seed 42 --rttm-out " + out + " > /dev/null");
  };
  const std::string out1 = (dir / "run1.rttm").string();
  const std::string out2 = (dir / "run2.rttm").string();
  diarize(out1);
  diarize(out2);

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string bytes1 = slurp(out1);
  require(!bytes1.empty(), "empty diarization output");
  require(bytes1 == slurp(out2), "outputs differ between runs");

  // The output is also sane: it scores against the synthetic reference.
  const DerBreakdown der =
      compute_der(read_rttm(base + ".ref.rttm"), read_rttm(out1));
  require(der.der < 0.25, "implausible DER " + std::to_string(der.der));
  return "byte-identical RTTM across runs, DER " + std::to_string(der.der);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  Timer total;

  run_criterion(1, "PLDA LLR oracle", criterion_llr);
  run_criterion(2, "PLDA EM recovery", criterion_em);
  run_criterion(3, "LDA from PLDA", criterion_lda);
  run_criterion(4, "AHC exhaustive equality", criterion_ahc);
  run_criterion(5, "VB-HMM inference", criterion_vbhmm);
  run_criterion(6, "DER scorer", criterion_der);
  run_criterion(7, "PLDA interpolation", criterion_interpolation);
  run_criterion(8, "score fusion", criterion_fusion);
  run_criterion(9, "overlap post-processing", criterion_overlap);
  run_criterion(10, "end-to-end determinism", [&] { return criterion_determinism(cli); });

  std::printf("%s: %d/10 criteria passed in %.1fs\n",
              g_failures == 0 ? "OK" : "FAILED", 10 - g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
