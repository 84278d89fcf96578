// xdiar/tests/test_eval.cc

#include <random>

#include "doctest.h"
#include "oracles.h"
#include "xdiar/error.h"
#include "xdiar/eval.h"

using namespace xdiar;

namespace {

AnnotationEntry entry(const std::string& rec, double onset, double dur,
                      const std::string& spk) {
  return AnnotationEntry{rec, onset, dur, spk};
}

Annotation random_annotation(std::mt19937_64& rng, int n_speakers,
                             const std::string& rec) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Annotation out;
  double t = 0.0;
  while (t < 20.0) {
    const double dur = 0.4 + 2.5 * unif(rng);
    const int spk = static_cast<int>(rng() % static_cast<uint64_t>(n_speakers));
    out.entries.push_back(entry(rec, t, std::min(dur, 20.0 - t),
                                "q" + std::to_string(spk)));
    t += dur + (unif(rng) < 0.3 ? 0.5 * unif(rng) : 0.0);  // occasional gap
  }
  return out;
}

}  // namespace

TEST_CASE("identical annotations score zero") {
  Annotation ref;
  ref.entries = {entry("f1", 0, 4, "A"), entry("f1", 4, 6, "B")};
  const DerBreakdown b = compute_der(ref, ref);
  CHECK(b.der == 0.0);
  CHECK(b.miss == 0.0);
  CHECK(b.false_alarm == 0.0);
  CHECK(b.speaker_error == 0.0);
  CHECK(b.total_speech == 10.0);
}

TEST_CASE("a mislabeled tail counts as speaker error") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 10, "A")};
  hyp.entries = {entry("f1", 0, 8, "X"), entry("f1", 8, 2, "Y")};
  const DerBreakdown b = compute_der(ref, hyp);
  CHECK(b.speaker_error == doctest::Approx(2.0));
  CHECK(b.miss == 0.0);
  CHECK(b.false_alarm == 0.0);
  CHECK(b.der == doctest::Approx(0.2));
}

TEST_CASE("DER is invariant under hypothesis relabeling") {
  std::mt19937_64 rng(41);
  const Annotation ref = random_annotation(rng, 3, "f1");
  Annotation renamed = ref;
  for (auto& e : renamed.entries) e.speaker = "zz_" + e.speaker;
  const DerBreakdown b = compute_der(ref, renamed);
  CHECK(b.der == 0.0);

  const auto mapping = optimal_mapping(ref, renamed);
  for (const auto& [hyp_label, ref_label] : mapping) {
    CHECK(hyp_label == "zz_" + ref_label);
  }
}

TEST_CASE("optimal_mapping recovers a permutation and matches brute force") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Annotation ref = random_annotation(rng, 3, "f1");
    const Annotation hyp = random_annotation(rng, 3, "f1");
    const DerBreakdown fast = compute_der(ref, hyp);
    const DerBreakdown slow = oracle::best_permutation_der(ref, hyp);
    CHECK(fast.miss == slow.miss);
    CHECK(fast.false_alarm == slow.false_alarm);
    CHECK(fast.speaker_error == slow.speaker_error);
    CHECK(fast.total_speech == slow.total_speech);
  }
}

TEST_CASE("zero co-activity yields an empty mapping") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 1, "A")};
  hyp.entries = {entry("f1", 5, 1, "B")};
  CHECK(optimal_mapping(ref, hyp).empty());
  const DerBreakdown b = compute_der(ref, hyp);
  CHECK(b.miss == doctest::Approx(1.0));
  CHECK(b.false_alarm == doctest::Approx(1.0));
}

TEST_CASE("the collar excludes reference boundaries from scoring") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 10, "A")};
  hyp.entries = {entry("f1", 0.2, 9.8, "A")};
  const DerBreakdown strict = compute_der(ref, hyp, 0.0);
  CHECK(strict.miss == doctest::Approx(0.2));
  const DerBreakdown forgiving = compute_der(ref, hyp, 0.25);
  CHECK(forgiving.miss == 0.0);
  CHECK(forgiving.total_speech == doctest::Approx(9.5));
  CHECK(forgiving.der == 0.0);
}

TEST_CASE("overlap scoring counts reference speakers individually") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 2, "A"), entry("f1", 1, 1, "B")};
  hyp.entries = {entry("f1", 0, 2, "A")};

  const DerBreakdown with_overlap = compute_der(ref, hyp, 0.0, true);
  CHECK(with_overlap.total_speech == doctest::Approx(3.0));
  CHECK(with_overlap.miss == doctest::Approx(1.0));
  CHECK(with_overlap.der == doctest::Approx(1.0 / 3.0));

  const DerBreakdown without = compute_der(ref, hyp, 0.0, false);
  CHECK(without.total_speech == doctest::Approx(1.0));
  CHECK(without.der == 0.0);
}

TEST_CASE("components accumulate across recordings") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 10, "A"), entry("f2", 0, 10, "A")};
  hyp.entries = {entry("f1", 0, 10, "A"), entry("f2", 0, 5, "A"),
                 entry("f2", 5, 5, "B")};
  const DerBreakdown b = compute_der(ref, hyp);
  CHECK(b.total_speech == doctest::Approx(20.0));
  CHECK(b.speaker_error == doctest::Approx(5.0));
  CHECK(b.der == doctest::Approx(0.25));
}

TEST_CASE("empty reference speech is an error") {
  Annotation ref, hyp;
  hyp.entries = {entry("f1", 0, 1, "A")};
  CHECK_THROWS_AS(compute_der(ref, hyp), Error);
}

TEST_CASE("hypothesis with more speakers than the reference") {
  Annotation ref, hyp;
  ref.entries = {entry("f1", 0, 6, "A")};
  hyp.entries = {entry("f1", 0, 2, "X"), entry("f1", 2, 2, "Y"),
                 entry("f1", 4, 2, "Z")};
  const DerBreakdown fast = compute_der(ref, hyp);
  const DerBreakdown slow = oracle::best_permutation_der(ref, hyp);
  CHECK(fast.speaker_error == doctest::Approx(4.0));
  CHECK(fast.speaker_error == slow.speaker_error);
  CHECK(fast.der == slow.der);
}
