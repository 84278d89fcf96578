// xdiar/eval.h

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

#ifndef XDIAR_EVAL_H_
#define XDIAR_EVAL_H_

#include <map>
#include <string>

#include "xdiar/types.h"

namespace xdiar {

struct DerBreakdown {
  double miss = 0.0;
  double false_alarm = 0.0;
  double speaker_error = 0.0;
  double total_speech = 0.0;
  double der = 0.0;  // (miss + false_alarm + speaker_error) / total_speech
};

// One-to-one mapping from hypothesis to reference labels maximizing the total
// correctly attributed time, found by optimal assignment on the
// overlap-duration matrix (co-activity accumulated within each recording).
// Hypothesis labels without a profitable match are left out of the map.
std::map<std::string, std::string> optimal_mapping(const Annotation& ref,
                                                   const Annotation& hyp);

// Time-weighted miss / false alarm / speaker error after optimal mapping,
// computed recording by recording with exact interval arithmetic over
// segment breakpoints. A collar > 0 excludes +-collar around every reference
// segment boundary from scoring. With score_overlap, overlapped reference
// speakers count individually (a frame with two reference speakers and one
// correct hypothesis speaker contributes one speaker-time of miss); without
// it, regions where the reference has more than one active speaker are
// excluded entirely. Throws when the scored reference speech is empty.
DerBreakdown compute_der(const Annotation& ref, const Annotation& hyp,
                         double collar = 0.0, bool score_overlap = true);

}  // namespace xdiar

#endif  // XDIAR_EVAL_H_
