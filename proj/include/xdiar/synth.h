// xdiar/synth.h

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

#ifndef XDIAR_SYNTH_H_
#define XDIAR_SYNTH_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xdiar/overlap.h"
#include "xdiar/plda.h"
#include "xdiar/types.h"

namespace xdiar {

// Synthetic-conversation generator following the generative model: speaker
// identities evolve as a first-order chain with self-transition loop_p (a
// switch picks one of the other speakers uniformly), each speaker draws a
// latent y_s ~ N(0, I) through the PLDA factorization B = V V^T, and each
// sub-segment embedding is N(mean + V y_s, W). Fully deterministic given
// the seed.
struct SynthConfig {
  int n_speakers = 2;
  PldaModel plda;
  double loop_p = 0.95;
  int n_subsegments = 200;
  double overlap_fraction = 0.0;  // fraction of sub-segments with a second speaker
  uint64_t seed = 0;
  double window = 1.5;
  double step = 0.25;
  std::string recording_id = "synth";
};

struct SynthResult {
  EmbeddingSet embeddings;
  Annotation reference;            // includes second-speaker entries
  std::vector<int> first_speaker;  // true state sequence
  std::vector<int> second_speaker;  // -1 where no overlap was injected
  std::vector<OverlapSegment> overlaps;  // true overlap regions
};

SynthResult synth_generate(const SynthConfig& cfg);

// Per-channel copies of an embedding set with independent within-class noise
// added to every row; channel c is tagged in the segment metadata. Feeds the
// multi-channel fusion checks.
std::vector<EmbeddingSet> add_channel_noise(const EmbeddingSet& base,
                                            const PldaModel& model,
                                            int n_channels, uint64_t seed);

// Deterministic standard-normal / uniform generator used by the synthesizer
// (explicit Box-Muller over the raw mt19937_64 stream, so results do not
// depend on the standard library's distribution implementations).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform();          // [0, 1)
  double normal();           // N(0, 1)
  int uniform_int(int n);    // {0, ..., n-1}

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace xdiar

#endif  // XDIAR_SYNTH_H_
