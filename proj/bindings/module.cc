// xdiar/bindings/module.cc

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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xdiar/clustering.h"
#include "xdiar/error.h"
#include "xdiar/eval.h"
#include "xdiar/io.h"
#include "xdiar/overlap.h"
#include "xdiar/pipeline.h"
#include "xdiar/plda.h"
#include "xdiar/synth.h"
#include "xdiar/timeline.h"
#include "xdiar/types.h"
#include "xdiar/vbhmm.h"

namespace py = pybind11;
using namespace xdiar;

PYBIND11_MODULE(_xdiar, m) {
  m.doc() = "x-vector speaker diarization: PLDA scoring, AHC, Bayesian-HMM "
            "clustering, overlap post-processing and DER evaluation";

  py::register_exception<Error>(m, "XdiarError");

  py::class_<TimedSegment>(m, "TimedSegment")
      .def(py::init([](std::string rec, int channel, double onset, double duration) {
             return TimedSegment{std::move(rec), channel, onset, duration};
           }),
           py::arg("recording_id"), py::arg("channel"), py::arg("onset"),
           py::arg("duration"))
      .def_readwrite("recording_id", &TimedSegment::recording_id)
      .def_readwrite("channel", &TimedSegment::channel)
      .def_readwrite("onset", &TimedSegment::onset)
      .def_readwrite("duration", &TimedSegment::duration)
      .def("end", &TimedSegment::end)
      .def("__repr__", [](const TimedSegment& s) {
        return "TimedSegment(" + s.recording_id + ", " + std::to_string(s.onset) +
               " + " + std::to_string(s.duration) + "s)";
      });

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init<std::vector<TimedSegment>, Eigen::MatrixXd>(),
           py::arg("segments"), py::arg("vectors"))
      .def_property_readonly("segments", &EmbeddingSet::segments)
      .def_property_readonly("vectors",
                             [](const EmbeddingSet& s) { return s.vectors(); })
      .def("__len__", [](const EmbeddingSet& s) { return s.size(); })
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def("recording_ids", &EmbeddingSet::recording_ids)
      .def("recording_subset", &EmbeddingSet::recording_subset);

  py::class_<AnnotationEntry>(m, "AnnotationEntry")
      .def(py::init([](std::string rec, double onset, double duration, std::string spk) {
             return AnnotationEntry{std::move(rec), onset, duration, std::move(spk)};
           }),
           py::arg("recording_id"), py::arg("onset"), py::arg("duration"),
           py::arg("speaker"))
      .def_readwrite("recording_id", &AnnotationEntry::recording_id)
      .def_readwrite("onset", &AnnotationEntry::onset)
      .def_readwrite("duration", &AnnotationEntry::duration)
      .def_readwrite("speaker", &AnnotationEntry::speaker);

  py::class_<Annotation>(m, "Annotation")
      .def(py::init<>())
      .def(py::init([](std::vector<AnnotationEntry> entries) {
             Annotation a;
             a.entries = std::move(entries);
             return a;
           }),
           py::arg("entries"))
      .def_readwrite("entries", &Annotation::entries)
      .def("__len__", [](const Annotation& a) { return a.entries.size(); });

  py::class_<PldaModel>(m, "PldaModel")
      .def(py::init([](Eigen::VectorXd mean, Eigen::MatrixXd across,
                       Eigen::MatrixXd within) {
             return PldaModel{std::move(mean), std::move(across), std::move(within)};
           }),
           py::arg("mean"), py::arg("across_class"), py::arg("within_class"))
      .def_readwrite("mean", &PldaModel::mean)
      .def_readwrite("across_class", &PldaModel::across_class)
      .def_readwrite("within_class", &PldaModel::within_class)
      .def_property_readonly("dim", &PldaModel::dim);

  py::class_<WhiteningTransform>(m, "WhiteningTransform")
      .def_readwrite("center", &WhiteningTransform::center)
      .def_readwrite("whiten", &WhiteningTransform::whiten)
      .def_readwrite("apply_length_norm", &WhiteningTransform::apply_length_norm)
      .def_readwrite("length_norm_scale", &WhiteningTransform::length_norm_scale);

  py::class_<Projection>(m, "Projection")
      .def_readwrite("matrix", &Projection::matrix)
      .def_property_readonly("out_dim", &Projection::out_dim);

  py::class_<ScoreMatrix>(m, "ScoreMatrix")
      .def(py::init<Eigen::MatrixXd>(), py::arg("scores"))
      .def_readonly("scores", &ScoreMatrix::scores)
      .def("__len__", [](const ScoreMatrix& s) { return s.size(); });

  py::class_<AhcConfig>(m, "AhcConfig")
      .def(py::init<>())
      .def_readwrite("threshold", &AhcConfig::threshold)
      .def_readwrite("under_cluster_offset", &AhcConfig::under_cluster_offset);

  py::class_<VbhmmConfig>(m, "VbhmmConfig")
      .def(py::init<>())
      .def_readwrite("fa", &VbhmmConfig::fa)
      .def_readwrite("fb", &VbhmmConfig::fb)
      .def_readwrite("loop_p", &VbhmmConfig::loop_p)
      .def_readwrite("max_iters", &VbhmmConfig::max_iters)
      .def_readwrite("elbo_rel_tol", &VbhmmConfig::elbo_rel_tol)
      .def_readwrite("min_occupancy", &VbhmmConfig::min_occupancy)
      .def_readwrite("init_smoothing", &VbhmmConfig::init_smoothing);

  py::class_<SpeakerPosterior>(m, "SpeakerPosterior")
      .def_readonly("mean", &SpeakerPosterior::mean)
      .def_readonly("covariance", &SpeakerPosterior::covariance);

  py::class_<VbState>(m, "VbState")
      .def_readonly("responsibilities", &VbState::responsibilities)
      .def_readonly("speaker_priors", &VbState::speaker_priors)
      .def_readonly("speaker_posteriors", &VbState::speaker_posteriors)
      .def_readonly("elbo_trace", &VbState::elbo_trace)
      .def_property_readonly("num_speakers", &VbState::num_speakers)
      .def("hard_labels", &VbState::hard_labels);

  py::class_<VbInferenceResult>(m, "VbInferenceResult")
      .def_readonly("annotation", &VbInferenceResult::annotation)
      .def_readonly("state", &VbInferenceResult::state)
      .def_readonly("hard_labels", &VbInferenceResult::hard_labels);

  py::class_<LogisticModel>(m, "LogisticModel")
      .def(py::init([](Eigen::VectorXd weights, double bias) {
             return LogisticModel{std::move(weights), bias};
           }),
           py::arg("weights"), py::arg("bias"))
      .def_readwrite("weights", &LogisticModel::weights)
      .def_readwrite("bias", &LogisticModel::bias);

  py::enum_<OverlapLabel>(m, "OverlapLabel")
      .value("clean", OverlapLabel::clean)
      .value("overlapped", OverlapLabel::overlapped);

  py::class_<OverlapSegment>(m, "OverlapSegment")
      .def(py::init([](std::string rec, double onset, double duration) {
             return OverlapSegment{std::move(rec), onset, duration};
           }),
           py::arg("recording_id"), py::arg("onset"), py::arg("duration"))
      .def_readwrite("recording_id", &OverlapSegment::recording_id)
      .def_readwrite("onset", &OverlapSegment::onset)
      .def_readwrite("duration", &OverlapSegment::duration);

  py::class_<DerBreakdown>(m, "DerBreakdown")
      .def_readonly("miss", &DerBreakdown::miss)
      .def_readonly("false_alarm", &DerBreakdown::false_alarm)
      .def_readonly("speaker_error", &DerBreakdown::speaker_error)
      .def_readonly("total_speech", &DerBreakdown::total_speech)
      .def_readonly("der", &DerBreakdown::der)
      .def("__repr__", [](const DerBreakdown& b) {
        return "DerBreakdown(der=" + std::to_string(b.der) + ")";
      });

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("n_speakers", &SynthConfig::n_speakers)
      .def_readwrite("plda", &SynthConfig::plda)
      .def_readwrite("loop_p", &SynthConfig::loop_p)
      .def_readwrite("n_subsegments", &SynthConfig::n_subsegments)
      .def_readwrite("overlap_fraction", &SynthConfig::overlap_fraction)
      .def_readwrite("seed", &SynthConfig::seed)
      .def_readwrite("window", &SynthConfig::window)
      .def_readwrite("step", &SynthConfig::step)
      .def_readwrite("recording_id", &SynthConfig::recording_id);

  py::class_<SynthResult>(m, "SynthResult")
      .def_readonly("embeddings", &SynthResult::embeddings)
      .def_readonly("reference", &SynthResult::reference)
      .def_readonly("first_speaker", &SynthResult::first_speaker)
      .def_readonly("second_speaker", &SynthResult::second_speaker)
      .def_readonly("overlaps", &SynthResult::overlaps);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("window", &PipelineConfig::window)
      .def_readwrite("step", &PipelineConfig::step)
      .def_readwrite("ahc", &PipelineConfig::ahc)
      .def_readwrite("vbhmm", &PipelineConfig::vbhmm)
      .def_readwrite("plda_alpha", &PipelineConfig::plda_alpha)
      .def_readwrite("lda_dim", &PipelineConfig::lda_dim)
      .def_readwrite("overlap_enabled", &PipelineConfig::overlap_enabled)
      .def_readwrite("overlap_threshold", &PipelineConfig::overlap_threshold);

  py::class_<Models>(m, "Models")
      .def(py::init<>())
      .def_readwrite("plda", &Models::plda)
      .def_readwrite("plda_indomain", &Models::plda_indomain)
      .def_readwrite("transform", &Models::transform)
      .def_readwrite("overlap", &Models::overlap);

  // timeline
  m.def("uniform_subsegments", &uniform_subsegments, py::arg("speech_regions"),
        py::arg("window"), py::arg("step"));
  m.def("merge_labeled_subsegments", &merge_labeled_subsegments,
        py::arg("subsegments"), py::arg("labels"), py::arg("label_names"));
  m.def("default_speaker_names", &default_speaker_names, py::arg("n_speakers"));

  // io
  m.def("read_embeddings", &read_embeddings, py::arg("segments_path"),
        py::arg("vectors_path"));
  m.def("write_embeddings", &write_embeddings, py::arg("data"),
        py::arg("segments_path"), py::arg("vectors_path"));
  m.def("read_rttm", &read_rttm, py::arg("path"));
  m.def("write_rttm", &write_rttm, py::arg("annotation"), py::arg("path"));
  m.def("read_segments", &read_segments, py::arg("path"));
  m.def("write_segments", &write_segments, py::arg("segments"), py::arg("path"));
  m.def("load_plda", &load_plda, py::arg("path"));
  m.def("save_plda", &save_plda, py::arg("model"), py::arg("path"));
  m.def("load_transform", &load_transform, py::arg("path"));
  m.def("save_transform", &save_transform, py::arg("transform"), py::arg("path"));
  m.def("load_logistic", &load_logistic, py::arg("path"));
  m.def("save_logistic", &save_logistic, py::arg("model"), py::arg("path"));

  // plda
  m.def("train_plda_em",
        [](const EmbeddingSet& data, const std::vector<std::string>& labels,
           int iterations) {
          std::vector<double> trace;
          PldaModel model = train_plda_em(data, labels, iterations, &trace);
          return py::make_tuple(model, trace);
        },
        py::arg("data"), py::arg("speaker_labels"), py::arg("iterations") = 20,
        "Returns (model, per-iteration log-likelihood trace).");
  m.def("estimate_transform", &estimate_transform, py::arg("data"),
        py::arg("use_length_norm") = true);
  m.def("apply_transform", &apply_transform, py::arg("transform"), py::arg("data"));
  m.def("interpolate_plda", &interpolate_plda, py::arg("a"), py::arg("b"),
        py::arg("alpha") = 0.5);
  m.def("pairwise_llr", &pairwise_llr, py::arg("model"), py::arg("data"));
  m.def("lda_from_plda", &lda_from_plda, py::arg("model"), py::arg("out_dim"));
  m.def("project_model", &project_model, py::arg("model"), py::arg("projection"));
  m.def("project_embeddings", &project_embeddings, py::arg("projection"),
        py::arg("data"));

  // clustering
  m.def("ahc_cluster", &ahc_cluster, py::arg("scores"), py::arg("config"));
  m.def("fuse_scores", &fuse_scores, py::arg("matrices"));

  // vbhmm
  m.def("init_from_labels", &init_from_labels, py::arg("labels"), py::arg("smoothing"));
  m.def("vb_inference", &vb_inference, py::arg("data"), py::arg("projected_model"),
        py::arg("init_labels"), py::arg("config"));

  // overlap
  m.def("train_overlap_classifier",
        [](const EmbeddingSet& data, const std::vector<int>& labels, double l2) {
          std::vector<OverlapLabel> typed;
          typed.reserve(labels.size());
          for (int l : labels) {
            typed.push_back(l != 0 ? OverlapLabel::overlapped : OverlapLabel::clean);
          }
          OverlapTrainOptions options;
          options.l2 = l2;
          return train_overlap_classifier(data, typed, options);
        },
        py::arg("data"), py::arg("labels"), py::arg("l2") = 1e-2);
  m.def("detect_overlap", &detect_overlap, py::arg("model"), py::arg("data"),
        py::arg("prob_threshold") = 0.5);
  m.def("assign_second_speaker", &assign_second_speaker, py::arg("diarization"),
        py::arg("overlaps"));

  // eval + synth
  m.def("optimal_mapping", &optimal_mapping, py::arg("ref"), py::arg("hyp"));
  m.def("compute_der", &compute_der, py::arg("ref"), py::arg("hyp"),
        py::arg("collar") = 0.0, py::arg("score_overlap") = true);
  m.def("synth_generate", &synth_generate, py::arg("config"));
  m.def("add_channel_noise", &add_channel_noise, py::arg("base"), py::arg("model"),
        py::arg("n_channels"), py::arg("seed"));

  // pipeline
  m.def("diarize_single_channel", &diarize_single_channel, py::arg("embeddings"),
        py::arg("speech_regions"), py::arg("models"), py::arg("config"));
  m.def("diarize_multichannel", &diarize_multichannel, py::arg("channels"),
        py::arg("models"), py::arg("config"));
}
