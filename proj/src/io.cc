// xdiar/io.cc

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

#include "xdiar/io.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "xdiar/error.h"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts unsupported");

namespace xdiar {

namespace {

std::ifstream open_read(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(errc::io_failure, "cannot open for reading: " + path);
  return in;
}

std::ofstream open_write(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(errc::io_failure, "cannot open for writing: " + path);
  return out;
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(errc::io_failure, "unexpected end of file: " + path);
  return value;
}

void write_magic(std::ostream& out, const char magic[5]) {
  out.write(magic, 4);
}

void expect_magic(std::istream& in, const char magic[5], const std::string& path) {
  char buf[4] = {};
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0) {
    throw Error(errc::malformed_header,
                std::string("expected magic \"") + magic + "\" in " + path);
  }
}

void write_matrix_f64(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_pod(out, m(r, c));
  }
}

Eigen::MatrixXd read_matrix_f64(std::istream& in, Eigen::Index rows,
                                Eigen::Index cols, const std::string& path) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_pod<double>(in, path);
  }
  return m;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, errc code, const std::string& where) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(code, "cannot parse number \"" + s + "\" " + where);
  }
}

std::string format_seconds(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::vector<TimedSegment> read_segments(const std::string& path) {
  std::ifstream in = open_read(path, false);
  std::vector<TimedSegment> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line, '\t');
    if (f.size() != 4) {
      throw Error(errc::malformed_line,
                  path + ":" + std::to_string(line_no) +
                      ": expected 4 tab-separated fields, found " +
                      std::to_string(f.size()));
    }
    const std::string where = "at " + path + ":" + std::to_string(line_no);
    TimedSegment s;
    s.recording_id = f[0];
    s.channel = static_cast<int>(parse_double(f[1], errc::malformed_line, where));
    s.onset = parse_double(f[2], errc::malformed_line, where);
    s.duration = parse_double(f[3], errc::malformed_line, where);
    if (s.duration <= 0.0 || s.onset < 0.0 || s.channel < 0) {
      throw Error(errc::invalid_argument,
                  "segment violates invariants " + where);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_segments(const std::vector<TimedSegment>& segments,
                    const std::string& path) {
  std::ofstream out = open_write(path, false);
  for (const auto& s : segments) {
    out << s.recording_id << '\t' << s.channel << '\t'
        << format_seconds(s.onset, 6) << '\t' << format_seconds(s.duration, 6)
        << '\n';
  }
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

std::vector<std::string> read_labels(const std::string& path) {
  std::ifstream in = open_read(path, false);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

EmbeddingSet read_embeddings(const std::string& segments_path,
                             const std::string& vectors_path) {
  std::vector<TimedSegment> segments = read_segments(segments_path);

  std::ifstream in = open_read(vectors_path, true);
  expect_magic(in, "XVE1", vectors_path);
  const uint32_t n = read_pod<uint32_t>(in, vectors_path);
  const uint32_t d = read_pod<uint32_t>(in, vectors_path);
  if (d == 0) {
    throw Error(errc::malformed_header, "zero dimension in " + vectors_path);
  }
  if (n != segments.size()) {
    throw Error(errc::count_mismatch,
                vectors_path + " holds " + std::to_string(n) + " vectors but " +
                    segments_path + " lists " + std::to_string(segments.size()) +
                    " segments");
  }
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<float> row(d);
  for (uint32_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(float) * d));
    if (!in) throw Error(errc::io_failure, "unexpected end of file: " + vectors_path);
    for (uint32_t c = 0; c < d; ++c) {
      vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  // EmbeddingSet validates finiteness and segment ordering.
  return EmbeddingSet(std::move(segments), std::move(vectors));
}

void write_embeddings(const EmbeddingSet& data,
                      const std::string& segments_path,
                      const std::string& vectors_path) {
  write_segments(data.segments(), segments_path);
  std::ofstream out = open_write(vectors_path, true);
  write_magic(out, "XVE1");
  write_pod(out, static_cast<uint32_t>(data.size()));
  write_pod(out, static_cast<uint32_t>(data.dim()));
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.dim(); ++c) {
      write_pod(out, static_cast<float>(data.vectors()(i, c)));
    }
  }
  if (!out) throw Error(errc::io_failure, "write failed: " + vectors_path);
}

void write_rttm(const Annotation& annotation, const std::string& path) {
  std::ofstream out = open_write(path, false);
  for (const auto& e : annotation.entries) {
    if (e.duration <= 0.0) {
      throw Error(errc::invalid_argument,
                  "annotation entry with non-positive duration");
    }
    out << "SPEAKER " << e.recording_id << " 1 " << format_seconds(e.onset, 3)
        << ' ' << format_seconds(e.duration, 3) << " <NA> <NA> " << e.speaker
        << " <NA> <NA>\n";
  }
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

Annotation read_rttm(const std::string& path) {
  std::ifstream in = open_read(path, false);
  Annotation out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    const std::string where = "at " + path + ":" + std::to_string(line_no);
    if (tok.size() != 10 || tok[0] != "SPEAKER") {
      throw Error(errc::malformed_line, "not an RTTM SPEAKER line " + where);
    }
    AnnotationEntry e;
    e.recording_id = tok[1];
    e.onset = parse_double(tok[3], errc::malformed_line, where);
    e.duration = parse_double(tok[4], errc::malformed_line, where);
    e.speaker = tok[7];
    if (e.duration <= 0.0) {
      throw Error(errc::invalid_argument, "non-positive duration " + where);
    }
    if (e.speaker.empty()) {
      throw Error(errc::malformed_line, "empty speaker label " + where);
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

void save_plda(const PldaModel& model, const std::string& path) {
  std::ofstream out = open_write(path, true);
  write_magic(out, "PLD1");
  write_pod(out, static_cast<uint32_t>(model.dim()));
  write_matrix_f64(out, model.mean);
  write_matrix_f64(out, model.across_class);
  write_matrix_f64(out, model.within_class);
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

PldaModel load_plda(const std::string& path) {
  std::ifstream in = open_read(path, true);
  expect_magic(in, "PLD1", path);
  const auto d = static_cast<Eigen::Index>(read_pod<uint32_t>(in, path));
  PldaModel model;
  model.mean = read_matrix_f64(in, d, 1, path);
  model.across_class = read_matrix_f64(in, d, d, path);
  model.within_class = read_matrix_f64(in, d, d, path);
  return model;
}

void save_transform(const WhiteningTransform& t, const std::string& path) {
  std::ofstream out = open_write(path, true);
  write_magic(out, "WHT1");
  write_pod(out, static_cast<uint32_t>(t.dim()));
  write_pod(out, static_cast<uint8_t>(t.apply_length_norm ? 1 : 0));
  write_pod(out, t.length_norm_scale);
  write_matrix_f64(out, t.center);
  write_matrix_f64(out, t.whiten);
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

WhiteningTransform load_transform(const std::string& path) {
  std::ifstream in = open_read(path, true);
  expect_magic(in, "WHT1", path);
  const auto d = static_cast<Eigen::Index>(read_pod<uint32_t>(in, path));
  WhiteningTransform t;
  t.apply_length_norm = read_pod<uint8_t>(in, path) != 0;
  t.length_norm_scale = read_pod<double>(in, path);
  t.center = read_matrix_f64(in, d, 1, path);
  t.whiten = read_matrix_f64(in, d, d, path);
  return t;
}

void save_projection(const Projection& p, const std::string& path) {
  std::ofstream out = open_write(path, true);
  write_magic(out, "LDA1");
  write_pod(out, static_cast<uint32_t>(p.out_dim()));
  write_pod(out, static_cast<uint32_t>(p.in_dim()));
  write_matrix_f64(out, p.matrix);
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

Projection load_projection(const std::string& path) {
  std::ifstream in = open_read(path, true);
  expect_magic(in, "LDA1", path);
  const auto r = static_cast<Eigen::Index>(read_pod<uint32_t>(in, path));
  const auto d = static_cast<Eigen::Index>(read_pod<uint32_t>(in, path));
  return Projection{read_matrix_f64(in, r, d, path)};
}

void save_logistic(const LogisticModel& m, const std::string& path) {
  std::ofstream out = open_write(path, true);
  write_magic(out, "LGR1");
  write_pod(out, static_cast<uint32_t>(m.dim()));
  write_matrix_f64(out, m.weights);
  write_pod(out, m.bias);
  if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

LogisticModel load_logistic(const std::string& path) {
  std::ifstream in = open_read(path, true);
  expect_magic(in, "LGR1", path);
  const auto d = static_cast<Eigen::Index>(read_pod<uint32_t>(in, path));
  LogisticModel m;
  m.weights = read_matrix_f64(in, d, 1, path);
  m.bias = read_pod<double>(in, path);
  return m;
}

}  // namespace xdiar
