// xdiar/tests/test_synth.cc

#include <cmath>
#include <set>

#include "doctest.h"
#include "xdiar/error.h"
#include "xdiar/eval.h"
#include "xdiar/synth.h"

using namespace xdiar;

namespace {

PldaModel simple_model(Eigen::Index dim, double across = 4.0) {
  PldaModel m;
  m.mean = Eigen::VectorXd::Zero(dim);
  m.across_class = across * Eigen::MatrixXd::Identity(dim, dim);
  m.within_class = Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

SynthConfig base_config() {
  SynthConfig cfg;
  cfg.plda = simple_model(4);
  cfg.n_speakers = 3;
  cfg.n_subsegments = 200;
  cfg.loop_p = 0.95;
  cfg.seed = 1234;
  return cfg;
}

}  // namespace

TEST_CASE("synthesis is deterministic in the seed") {
  const SynthConfig cfg = base_config();
  const SynthResult a = synth_generate(cfg);
  const SynthResult b = synth_generate(cfg);
  CHECK((a.embeddings.vectors() - b.embeddings.vectors()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.first_speaker == b.first_speaker);
  REQUIRE(a.reference.entries.size() == b.reference.entries.size());

  SynthConfig other = cfg;
  other.seed = 99;
  const SynthResult c = synth_generate(other);
  CHECK((a.embeddings.vectors() - c.embeddings.vectors()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("a single speaker owns the whole timeline") {
  SynthConfig cfg = base_config();
  cfg.n_speakers = 1;
  const SynthResult r = synth_generate(cfg);
  std::set<std::string> speakers;
  double covered = 0.0;
  for (const auto& e : r.reference.entries) {
    speakers.insert(e.speaker);
    covered += e.duration;
  }
  CHECK(speakers.size() == 1);
  const double span = r.embeddings.segments().back().end();
  CHECK(covered == doctest::Approx(span));
}

TEST_CASE("empirical self-transition rate concentrates around loop_p") {
  SynthConfig cfg = base_config();
  cfg.loop_p = 0.99;
  cfg.n_subsegments = 1000;
  cfg.seed = 7;
  const SynthResult r = synth_generate(cfg);
  int stays = 0;
  for (size_t t = 1; t < r.first_speaker.size(); ++t) {
    if (r.first_speaker[t] == r.first_speaker[t - 1]) ++stays;
  }
  const double n = static_cast<double>(r.first_speaker.size() - 1);
  const double rate = stays / n;
  const double stderr_rate = std::sqrt(0.99 * 0.01 / n);
  CHECK(std::abs(rate - 0.99) <= 3.0 * stderr_rate);
}

TEST_CASE("injected overlaps land in the reference and the overlap list") {
  SynthConfig cfg = base_config();
  cfg.overlap_fraction = 0.2;
  const SynthResult r = synth_generate(cfg);
  const int expected = static_cast<int>(0.2 * cfg.n_subsegments);
  CHECK(static_cast<int>(r.overlaps.size()) == expected);

  int tagged = 0;
  for (int s : r.second_speaker) tagged += s >= 0 ? 1 : 0;
  CHECK(tagged == expected);

  // Overlap regions carry two reference speakers.
  for (const auto& ov : r.overlaps) {
    const double mid = ov.onset + 0.5 * ov.duration;
    int active = 0;
    for (const auto& e : r.reference.entries) {
      if (e.onset <= mid && mid < e.onset + e.duration) ++active;
    }
    CHECK(active == 2);
  }

  // Reference with the overlap entries scores zero against itself.
  const DerBreakdown b = compute_der(r.reference, r.reference);
  CHECK(b.der == 0.0);
}

TEST_CASE("channel copies share the timeline but not the noise") {
  const SynthConfig cfg = base_config();
  const SynthResult r = synth_generate(cfg);
  const auto channels = add_channel_noise(r.embeddings, cfg.plda, 3, 5);
  REQUIRE(channels.size() == 3);
  for (int c = 0; c < 3; ++c) {
    const auto& ch = channels[static_cast<size_t>(c)];
    REQUIRE(ch.size() == r.embeddings.size());
    for (Eigen::Index i = 0; i < ch.size(); ++i) {
      CHECK(ch.segments()[static_cast<size_t>(i)].onset ==
            r.embeddings.segments()[static_cast<size_t>(i)].onset);
      CHECK(ch.segments()[static_cast<size_t>(i)].channel == c);
    }
    CHECK((ch.vectors() - r.embeddings.vectors()).cwiseAbs().maxCoeff() > 0.0);
  }
  CHECK((channels[0].vectors() - channels[1].vectors()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("synth_generate validates the configuration") {
  SynthConfig cfg = base_config();
  cfg.n_speakers = 0;
  CHECK_THROWS_AS(synth_generate(cfg), Error);
  cfg = base_config();
  cfg.loop_p = 1.0;
  CHECK_THROWS_AS(synth_generate(cfg), Error);
  cfg = base_config();
  cfg.overlap_fraction = 1.0;
  CHECK_THROWS_AS(synth_generate(cfg), Error);
  cfg = base_config();
  cfg.plda = PldaModel{};
  CHECK_THROWS_AS(synth_generate(cfg), Error);
}
