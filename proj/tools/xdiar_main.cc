// xdiar/tools/xdiar_main.cc

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

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "xdiar/error.h"
#include "xdiar/eval.h"
#include "xdiar/io.h"
#include "xdiar/overlap.h"
#include "xdiar/pipeline.h"
#include "xdiar/plda.h"
#include "xdiar/synth.h"
#include "xdiar/timeline.h"
#include "xdiar/types.h"

namespace {

using namespace xdiar;

struct DiarizeArgs {
  std::string config;
  std::string embeddings, segments, vad, plda, plda_indomain, transform;
  std::string overlap_model, rttm_out;
  double alpha = 0.5;
  long lda_dim = 0;
  double ahc_threshold = 0.0;
  double under_cluster_offset = 0.0;
  double fa = 0.4, fb = 11.0, loop_p = 0.99;
  int max_iters = 40;
  double overlap_threshold = 0.5;
  int jobs = 1;
  long long seed = 0;  // accepted for interface symmetry; diarization is deterministic
};

// key = value file mirroring the pipeline options; flags given on the command
// line keep precedence. '#' starts a comment.
void apply_config_file(CLI::App* sub, DiarizeArgs& a) {
  if (a.config.empty()) return;
  std::ifstream in(a.config);
  if (!in) throw Error(errc::io_failure, "cannot open config: " + a.config);

  auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t");
    const auto to = s.find_last_not_of(" \t");
    return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = a.config + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw Error(errc::malformed_line, "expected key = value at " + where);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) continue;  // command line wins

    auto number = [&] {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw Error(errc::malformed_line, "bad number \"" + value + "\" at " + where);
      }
    };
    if (key == "embeddings") a.embeddings = value;
    else if (key == "segments") a.segments = value;
    else if (key == "vad") a.vad = value;
    else if (key == "plda") a.plda = value;
    else if (key == "plda-indomain") a.plda_indomain = value;
    else if (key == "transform") a.transform = value;
    else if (key == "overlap-model") a.overlap_model = value;
    else if (key == "rttm-out") a.rttm_out = value;
    else if (key == "alpha") a.alpha = number();
    else if (key == "lda-dim") a.lda_dim = static_cast<long>(number());
    else if (key == "ahc-threshold") a.ahc_threshold = number();
    else if (key == "under-cluster-offset") a.under_cluster_offset = number();
    else if (key == "fa") a.fa = number();
    else if (key == "fb") a.fb = number();
    else if (key == "loop-p") a.loop_p = number();
    else if (key == "max-iters") a.max_iters = static_cast<int>(number());
    else if (key == "overlap-threshold") a.overlap_threshold = number();
    else if (key == "jobs") a.jobs = static_cast<int>(number());
    else if (key == "seed") a.seed = static_cast<long long>(number());
    else if (key == "window" || key == "step") {
      // Accepted for completeness; the sub-segment geometry is already fixed
      // by the segments file at diarization time.
    } else {
      throw Error(errc::invalid_argument, "unknown config key \"" + key + "\" at " + where);
    }
  }
}

PipelineConfig pipeline_config(const DiarizeArgs& a) {
  PipelineConfig cfg;
  cfg.ahc.threshold = a.ahc_threshold;
  cfg.ahc.under_cluster_offset = a.under_cluster_offset;
  cfg.vbhmm.fa = a.fa;
  cfg.vbhmm.fb = a.fb;
  cfg.vbhmm.loop_p = a.loop_p;
  cfg.vbhmm.max_iters = a.max_iters;
  cfg.plda_alpha = a.alpha;
  cfg.lda_dim = a.lda_dim;
  cfg.overlap_enabled = !a.overlap_model.empty();
  cfg.overlap_threshold = a.overlap_threshold;
  return cfg;
}

Models load_models(const DiarizeArgs& a) {
  Models m;
  m.plda = load_plda(a.plda);
  if (!a.plda_indomain.empty()) m.plda_indomain = load_plda(a.plda_indomain);
  if (!a.transform.empty()) m.transform = load_transform(a.transform);
  if (!a.overlap_model.empty()) m.overlap = load_logistic(a.overlap_model);
  return m;
}

void add_common_model_options(CLI::App* sub, DiarizeArgs& a) {
  sub->add_option("--plda", a.plda, "PLDA model file (PLD1)")->required();
  sub->add_option("--plda-indomain", a.plda_indomain,
                  "in-domain PLDA model interpolated with --plda");
  sub->add_option("--alpha", a.alpha,
                  "interpolation weight of the --plda model [0,1]");
  sub->add_option("--transform", a.transform,
                  "centering/whitening transform file (WHT1)");
  sub->add_option("--ahc-threshold", a.ahc_threshold, "AHC stopping threshold");
}

int run_diarize(const DiarizeArgs& a) {
  const EmbeddingSet embeddings = read_embeddings(a.segments, a.embeddings);
  std::vector<TimedSegment> regions;
  if (!a.vad.empty()) {
    regions = read_segments(a.vad);
    if (regions.empty()) {
      std::fprintf(stderr, "warning: empty speech regions; writing empty output\n");
      write_rttm(Annotation{}, a.rttm_out);
      return 0;
    }
  } else {
    regions = embeddings.segments();
  }

  const Models models = load_models(a);
  const PipelineConfig cfg = pipeline_config(a);

  const std::vector<std::string> recs = embeddings.recording_ids();
  std::vector<Annotation> results(recs.size());
  std::vector<std::string> failures(recs.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (size_t i; (i = cursor.fetch_add(1)) < recs.size();) {
      try {
        std::vector<TimedSegment> rec_regions;
        for (const auto& r : regions) {
          if (r.recording_id == recs[i]) rec_regions.push_back(r);
        }
        results[i] = diarize_single_channel(embeddings.recording_subset(recs[i]),
                                            rec_regions, models, cfg);
        if (results[i].empty()) {
          std::fprintf(stderr, "warning: no output for recording %s\n",
                       recs[i].c_str());
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  const int jobs = std::max(
      1, std::min<int>(a.jobs, static_cast<int>(recs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < recs.size(); ++i) {
    if (!failures[i].empty()) {
      throw Error(errc::invalid_argument,
                  "recording " + recs[i] + ": " + failures[i]);
    }
  }

  // Results in input order regardless of worker completion order.
  Annotation merged;
  for (auto& part : results) {
    merged.entries.insert(merged.entries.end(), part.entries.begin(),
                          part.entries.end());
  }
  write_rttm(merged, a.rttm_out);
  return 0;
}

int run_diarize_mc(const DiarizeArgs& a, const std::vector<std::string>& files) {
  std::vector<EmbeddingSet> channels;
  channels.reserve(files.size());
  for (const auto& f : files) channels.push_back(read_embeddings(a.segments, f));
  const Models models = load_models(a);
  const Annotation out = diarize_multichannel(channels, models, pipeline_config(a));
  write_rttm(out, a.rttm_out);
  return 0;
}

int run_score(const std::string& ref_path, const std::string& hyp_path,
              double collar, bool score_overlap) {
  const Annotation ref = read_rttm(ref_path);
  const Annotation hyp = read_rttm(hyp_path);
  const DerBreakdown b = compute_der(ref, hyp, collar, score_overlap);
  std::printf("missed speech  : %10.3f s\n", b.miss);
  std::printf("false alarm    : %10.3f s\n", b.false_alarm);
  std::printf("speaker error  : %10.3f s\n", b.speaker_error);
  std::printf("scored speech  : %10.3f s\n", b.total_speech);
  std::printf("DER            : %10.2f %%\n", 100.0 * b.der);
  std::printf("%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n", b.miss, b.false_alarm,
              b.speaker_error, b.total_speech, b.der);
  return 0;
}

PldaModel default_synth_model(long dim) {
  PldaModel m;
  m.mean = Eigen::VectorXd::Zero(dim);
  m.across_class = 3.0 * Eigen::MatrixXd::Identity(dim, dim);
  m.within_class = Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"x-vector speaker diarization: PLDA-scored AHC refined by a "
               "Bayesian HMM, with overlap post-processing and DER scoring"};
  app.require_subcommand(1);

  // diarize
  DiarizeArgs da;
  auto* diarize = app.add_subcommand("diarize", "diarize single-channel recordings");
  diarize->add_option("--config", da.config,
                      "key = value file mirroring these options; flags take precedence");
  diarize->add_option("--embeddings", da.embeddings, "embedding vectors file (XVE1)")
      ->required();
  diarize->add_option("--segments", da.segments, "sub-segment TSV matching the vectors")
      ->required();
  diarize->add_option("--vad", da.vad, "speech regions TSV (optional)");
  add_common_model_options(diarize, da);
  diarize->add_option("--lda-dim", da.lda_dim, "LDA output dimension (0 = full)");
  diarize->add_option("--under-cluster-offset", da.under_cluster_offset,
                      "offset added to the AHC threshold to under-cluster for the HMM");
  diarize->add_option("--fa", da.fa, "acoustic scaling factor");
  diarize->add_option("--fb", da.fb, "speaker regularization coefficient");
  diarize->add_option("--loop-p", da.loop_p, "HMM self-transition probability");
  diarize->add_option("--max-iters", da.max_iters, "VB iteration cap");
  diarize->add_option("--overlap-model", da.overlap_model,
                      "logistic overlap classifier (LGR1); enables post-processing");
  diarize->add_option("--overlap-threshold", da.overlap_threshold,
                      "overlap detection probability threshold");
  diarize->add_option("--jobs", da.jobs, "parallel recordings");
  diarize->add_option("--seed", da.seed, "unused; kept for config symmetry");
  diarize->add_option("--rttm-out", da.rttm_out, "output RTTM path")->required();

  // diarize-mc
  DiarizeArgs ma;
  std::vector<std::string> mc_files;
  auto* diarize_mc =
      app.add_subcommand("diarize-mc", "multi-channel AHC on fused PLDA scores");
  diarize_mc->add_option("--config", ma.config,
                         "key = value file mirroring these options; flags take precedence");
  diarize_mc->add_option("--embeddings", mc_files,
                         "one embedding vectors file per channel")
      ->required()
      ->expected(1, 64);
  diarize_mc->add_option("--segments", ma.segments, "shared sub-segment TSV")
      ->required();
  add_common_model_options(diarize_mc, ma);
  diarize_mc->add_option("--rttm-out", ma.rttm_out, "output RTTM path")->required();

  // train-plda
  std::string tp_embeddings, tp_segments, tp_labels, tp_out, tp_transform_out;
  int tp_iterations = 20;
  bool tp_length_norm = false;
  auto* train_plda = app.add_subcommand("train-plda", "EM-train a two-covariance PLDA");
  train_plda->add_option("--embeddings", tp_embeddings, "training vectors (XVE1)")
      ->required();
  train_plda->add_option("--segments", tp_segments, "matching sub-segment TSV")
      ->required();
  train_plda->add_option("--labels", tp_labels, "one speaker label per vector row")
      ->required();
  train_plda->add_option("--iterations", tp_iterations, "EM iterations");
  train_plda->add_option("--out", tp_out, "output model path (PLD1)")->required();
  train_plda->add_option("--transform-out", tp_transform_out,
                         "also estimate centering/whitening on the training data "
                         "and save it (WHT1); training then runs on transformed data");
  train_plda->add_flag("--length-norm", tp_length_norm,
                       "include length normalization in the saved transform");

  // train-overlap
  std::string to_embeddings, to_segments, to_labels, to_out;
  double to_l2 = 1e-2;
  auto* train_overlap =
      app.add_subcommand("train-overlap", "train the logistic overlap classifier");
  train_overlap->add_option("--embeddings", to_embeddings, "training vectors (XVE1)")
      ->required();
  train_overlap->add_option("--segments", to_segments, "matching sub-segment TSV")
      ->required();
  train_overlap
      ->add_option("--labels", to_labels, "one label per row: 1 = overlap, 0 = clean")
      ->required();
  train_overlap->add_option("--l2", to_l2, "ridge penalty");
  train_overlap->add_option("--out", to_out, "output model path (LGR1)")->required();

  // score
  std::string sc_ref, sc_hyp;
  double sc_collar = 0.0;
  bool sc_no_overlap = false;
  auto* score = app.add_subcommand("score", "DER between two RTTM files");
  score->add_option("ref", sc_ref, "reference RTTM")->required();
  score->add_option("hyp", sc_hyp, "hypothesis RTTM")->required();
  score->add_option("--collar", sc_collar, "no-score collar around reference boundaries");
  score->add_flag("--no-score-overlap", sc_no_overlap,
                  "exclude overlapped reference regions from scoring");

  // synth
  SynthConfig sy;
  std::string sy_plda, sy_plda_out, sy_embeddings_out, sy_segments_out,
      sy_rttm_out, sy_overlaps_out;
  long sy_dim = 16;
  int sy_channels = 1;
  long long sy_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic conversation");
  synth->add_option("--speakers", sy.n_speakers, "number of speakers");
  synth->add_option("--subsegments", sy.n_subsegments, "number of sub-segments");
  synth->add_option("--loop-p", sy.loop_p, "self-transition probability");
  synth->add_option("--overlap-fraction", sy.overlap_fraction,
                    "fraction of sub-segments with a second speaker");
  synth->add_option("--seed", sy_seed, "random seed");
  synth->add_option("--window", sy.window, "sub-segment length, seconds");
  synth->add_option("--step", sy.step, "sub-segment stride, seconds");
  synth->add_option("--recording-id", sy.recording_id, "recording id");
  synth->add_option("--plda", sy_plda, "PLDA model to sample from (default: synthetic)");
  synth->add_option("--dim", sy_dim, "dimension of the default model");
  synth->add_option("--channels", sy_channels,
                    "emit this many channels with independent within-class noise");
  synth->add_option("--plda-out", sy_plda_out, "save the generating model");
  synth->add_option("--embeddings-out", sy_embeddings_out,
                    "output vectors path; channel c appends .ch<c> when --channels > 1")
      ->required();
  synth->add_option("--segments-out", sy_segments_out, "output sub-segment TSV")
      ->required();
  synth->add_option("--rttm-out", sy_rttm_out, "reference RTTM path")->required();
  synth->add_option("--overlaps-out", sy_overlaps_out,
                    "true overlap regions TSV (recording, onset, duration)");

  // subsegment
  std::string ss_vad, ss_out;
  double ss_window = 1.5, ss_step = 0.25;
  auto* subsegment =
      app.add_subcommand("subsegment", "cut speech regions into sub-segments");
  subsegment->add_option("--vad", ss_vad, "speech regions TSV")->required();
  subsegment->add_option("--window", ss_window, "sub-segment length, seconds");
  subsegment->add_option("--step", ss_step, "sub-segment stride, seconds");
  subsegment->add_option("--out", ss_out, "output sub-segment TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (diarize->parsed()) {
      apply_config_file(diarize, da);
      return run_diarize(da);
    }
    if (diarize_mc->parsed()) {
      apply_config_file(diarize_mc, ma);
      return run_diarize_mc(ma, mc_files);
    }
    if (score->parsed()) return run_score(sc_ref, sc_hyp, sc_collar, !sc_no_overlap);
    if (train_plda->parsed()) {
      EmbeddingSet data = read_embeddings(tp_segments, tp_embeddings);
      const std::vector<std::string> labels = read_labels(tp_labels);
      if (!tp_transform_out.empty()) {
        const WhiteningTransform t = estimate_transform(data, tp_length_norm);
        save_transform(t, tp_transform_out);
        data = apply_transform(t, data);
      }
      save_plda(train_plda_em(data, labels, tp_iterations), tp_out);
      return 0;
    }
    if (train_overlap->parsed()) {
      const EmbeddingSet data = read_embeddings(to_segments, to_embeddings);
      const std::vector<std::string> raw = read_labels(to_labels);
      std::vector<OverlapLabel> labels;
      labels.reserve(raw.size());
      for (const auto& r : raw) {
        labels.push_back(r == "1" ? OverlapLabel::overlapped : OverlapLabel::clean);
      }
      save_logistic(train_overlap_classifier(data, labels), to_out);
      return 0;
    }
    if (synth->parsed()) {
      sy.seed = static_cast<uint64_t>(sy_seed);
      sy.plda = sy_plda.empty() ? default_synth_model(sy_dim) : load_plda(sy_plda);
      if (!sy_plda_out.empty()) save_plda(sy.plda, sy_plda_out);
      const SynthResult r = synth_generate(sy);
      if (sy_channels > 1) {
        const std::vector<EmbeddingSet> channels =
            add_channel_noise(r.embeddings, sy.plda, sy_channels, sy.seed + 1);
        for (int c = 0; c < sy_channels; ++c) {
          write_embeddings(channels[static_cast<size_t>(c)], sy_segments_out,
                           sy_embeddings_out + ".ch" + std::to_string(c));
        }
      } else {
        write_embeddings(r.embeddings, sy_segments_out, sy_embeddings_out);
      }
      write_rttm(r.reference, sy_rttm_out);
      if (!sy_overlaps_out.empty()) {
        std::ofstream out(sy_overlaps_out);
        for (const auto& ov : r.overlaps) {
          out << ov.recording_id << '\t' << ov.onset << '\t' << ov.duration << '\n';
        }
      }
      return 0;
    }
    if (subsegment->parsed()) {
      write_segments(uniform_subsegments(read_segments(ss_vad), ss_window, ss_step),
                     ss_out);
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
