// xdiar/io.h

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

#ifndef XDIAR_IO_H_
#define XDIAR_IO_H_

#include <string>
#include <vector>

#include "xdiar/overlap.h"
#include "xdiar/plda.h"
#include "xdiar/types.h"

namespace xdiar {

// Segments file: TSV with columns recording_id, channel, onset, duration;
// onset/duration as decimal seconds; UTF-8; no header line.
std::vector<TimedSegment> read_segments(const std::string& path);
void write_segments(const std::vector<TimedSegment>& segments,
                    const std::string& path);

// One text label per line, in embedding row order.
std::vector<std::string> read_labels(const std::string& path);

// Embedding vectors file: magic "XVE1", u32 count, u32 dim, then count*dim
// little-endian 32-bit floats row-major. Row i corresponds to segment i of
// the segments file.
EmbeddingSet read_embeddings(const std::string& segments_path,
                             const std::string& vectors_path);
void write_embeddings(const EmbeddingSet& data,
                      const std::string& segments_path,
                      const std::string& vectors_path);

// RTTM lines, exactly:
//   SPEAKER <rec> 1 <onset> <dur> <NA> <NA> <spk> <NA> <NA>
// with onset/duration printed to 3 decimals; the channel field is fixed to 1
// on write. Reading is the inverse of writing up to 1 ms rounding.
void write_rttm(const Annotation& annotation, const std::string& path);
Annotation read_rttm(const std::string& path);

// Binary model files, magics "PLD1" / "WHT1" / "LDA1" / "LGR1"; u32 dims
// followed by the parameters as little-endian 64-bit floats row-major.
void save_plda(const PldaModel& model, const std::string& path);
PldaModel load_plda(const std::string& path);
void save_transform(const WhiteningTransform& t, const std::string& path);
WhiteningTransform load_transform(const std::string& path);
void save_projection(const Projection& p, const std::string& path);
Projection load_projection(const std::string& path);
void save_logistic(const LogisticModel& m, const std::string& path);
LogisticModel load_logistic(const std::string& path);

}  // namespace xdiar

#endif  // XDIAR_IO_H_
