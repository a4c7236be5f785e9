#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "semcoop/agent.hpp"
#include "semcoop/skb_io.hpp"

using namespace semcoop;

namespace {

GroundTruthTable tiny_truth() {
  // M=3, d=2, picked far apart
  return GroundTruthTable(
      3, 2,
      {AttributeVector({0.1, 0.1}), AttributeVector({0.9, 0.1}),
       AttributeVector({0.5, 0.9})});
}

Skb quantized(const Skb& skb) {
  return decode_skb_binary(encode_skb_binary(skb), skb.role(),
                           skb.num_classes());
}

}  // namespace

TEST_CASE("build_initial_skb: all-uninformative pattern is constant 0.5") {
  const auto truth = synthetic_ground_truth(5, 4, 1);
  const InitPattern pattern(5, InitDirective::uninformative);
  const Skb skb = build_initial_skb(pattern, truth, 99, 1);
  for (const auto& [m, v] : skb.entries()) {
    for (double x : v.values()) {
      CHECK(x == 0.5);
    }
  }
}

TEST_CASE("build_initial_skb: split pattern mirrors the paper's pair 2") {
  const auto truth = synthetic_ground_truth(33, 81, 7);
  InitPattern pattern(33, InitDirective::truth_plus_noise, 0.8);
  pattern.set_range(1, 15, InitDirective::uninformative);
  const Skb skb = build_initial_skb(pattern, truth, 123, 2);
  for (ClassId m = 1; m <= 15; ++m) {
    for (double x : skb.at(m).values()) {
      CHECK(x == 0.5);
    }
  }
  // noisy classes differ from both 0.5 and the exact truth
  for (ClassId m = 16; m <= 33; ++m) {
    bool differs = false;
    for (std::size_t j = 0; j < 81; ++j) {
      if (skb.at(m)[j] != truth.of(m)[j]) {
        differs = true;
      }
      CHECK(skb.at(m)[j] >= 0.0);
      CHECK(skb.at(m)[j] <= 1.0);
    }
    CHECK(differs);
  }
  // deterministic in the seed
  const Skb again = build_initial_skb(pattern, truth, 123, 2);
  for (ClassId m = 1; m <= 33; ++m) {
    CHECK(again.at(m) == skb.at(m));
  }
}

TEST_CASE("build_initial_skb: zero noise reproduces ground truth") {
  const auto truth = synthetic_ground_truth(4, 6, 3);
  const InitPattern pattern(4, InitDirective::truth_plus_noise, 0.0);
  const Skb skb = build_initial_skb(pattern, truth, 5, 1);
  for (ClassId m = 1; m <= 4; ++m) {
    CHECK(skb.at(m) == truth.of(m));
  }
}

TEST_CASE("train_surrogate rejects a partial reference") {
  const auto truth = tiny_truth();
  PairState state = make_pair(1, InitPattern(3, InitDirective::uninformative),
                              truth, SurrogateParams{}, 1);
  const Skb partial(SkbRole::global, 3,
                    {{1, AttributeVector({0.5, 0.5})}});
  CHECK_THROWS_AS(train_surrogate(state, partial), std::invalid_argument);
}

TEST_CASE("predict: faithful encoder at leakage 0, noise 0") {
  const auto truth = tiny_truth();
  PairState state = make_pair(1, InitPattern(3, InitDirective::uninformative),
                              truth, SurrogateParams{0.0, 0.0}, 1);
  state = train_surrogate(state, truth.as_skb(SkbRole::initial));
  for (ClassId m = 1; m <= 3; ++m) {
    for (const auto& s : predict(state, truth, m, 5)) {
      CHECK(s == truth.of(m));
    }
  }
}

TEST_CASE("predict: fully anchored encoder reproduces the reference") {
  const auto truth = tiny_truth();
  PairState state = make_pair(1, InitPattern(3, InitDirective::uninformative),
                              truth, SurrogateParams{1.0, 0.0}, 1);
  state = train_surrogate(state, state.local);  // all-0.5 reference
  for (ClassId m = 1; m <= 3; ++m) {
    for (const auto& s : predict(state, truth, m, 4)) {
      CHECK(s == AttributeVector({0.5, 0.5}));
    }
  }
}

TEST_CASE("predict: empirical mean matches the convex combination") {
  // interior entries keep clipping inactive (boundary saturation would bias
  // the mean, as the clipping decision notes)
  GroundTruthTable truth(2, 3,
                         {AttributeVector({0.3, 0.5, 0.7}),
                          AttributeVector({0.6, 0.4, 0.2})});
  Skb ref(SkbRole::initial, 2,
          {{1, AttributeVector({0.7, 0.3, 0.5})},
           {2, AttributeVector({0.4, 0.6, 0.5})}});
  const double lambda = 0.3;
  const double sigma = 0.05;
  PairState state = make_pair(1, InitPattern(2, InitDirective::uninformative),
                              truth, SurrogateParams{lambda, sigma}, 42);
  state = train_surrogate(state, ref);

  const std::size_t n = 10000;
  for (ClassId m = 1; m <= 2; ++m) {
    const auto samples = predict(state, truth, m, n);
    for (std::size_t j = 0; j < 3; ++j) {
      double mean = 0.0;
      for (const auto& s : samples) {
        mean += s[j];
      }
      mean /= static_cast<double>(n);
      const double want =
          (1 - lambda) * truth.of(m)[j] + lambda * ref.at(m)[j];
      const double three_se = 3.0 * sigma / std::sqrt(double(n));
      CHECK(std::abs(mean - want) < three_se);
    }
  }
}

TEST_CASE("predict is deterministic in (seed, pair, class, round)") {
  const auto truth = synthetic_ground_truth(4, 8, 2);
  PairState a = make_pair(2, InitPattern(4, InitDirective::uninformative),
                          truth, SurrogateParams{0.5, 0.3}, 777);
  a = train_surrogate(a, a.local);
  PairState b = make_pair(2, InitPattern(4, InitDirective::uninformative),
                          truth, SurrogateParams{0.5, 0.3}, 777);
  b = train_surrogate(b, b.local);

  for (ClassId m = 1; m <= 4; ++m) {
    const auto sa = predict(a, truth, m, 6);
    const auto sb = predict(b, truth, m, 6);
    CHECK(sa == sb);
  }
  // a second training round draws a fresh stream
  PairState c = train_surrogate(b, b.local);
  CHECK(predict(c, truth, 1, 6) != predict(b, truth, 1, 6));
}

TEST_CASE("predict requires a trained pair") {
  const auto truth = tiny_truth();
  const PairState state =
      make_pair(1, InitPattern(3, InitDirective::uninformative), truth,
                SurrogateParams{}, 1);
  CHECK_THROWS_AS(predict(state, truth, 1, 1), std::logic_error);
}

TEST_CASE("training twice with one reference keeps prediction law fixed") {
  // identical streams come from identical (seed, pair, class, round); two
  // separately built pairs at the same round agree draw for draw
  const auto truth = synthetic_ground_truth(3, 5, 9);
  const InitPattern pattern(3, InitDirective::uninformative);
  PairState a = make_pair(1, pattern, truth, SurrogateParams{0.4, 0.2}, 11);
  a = train_surrogate(a, truth.as_skb(SkbRole::initial));
  a = train_surrogate(a, truth.as_skb(SkbRole::initial));

  PairState b = make_pair(1, pattern, truth, SurrogateParams{0.4, 0.2}, 11);
  b = train_surrogate(b, truth.as_skb(SkbRole::initial));
  b = train_surrogate(b, truth.as_skb(SkbRole::initial));
  for (ClassId m = 1; m <= 3; ++m) {
    CHECK(predict(a, truth, m, 8) == predict(b, truth, m, 8));
  }
}

TEST_CASE("evaluate_and_update: perfect pipeline") {
  const auto truth = tiny_truth();
  PairState state = make_pair(1, InitPattern(3, InitDirective::uninformative),
                              truth, SurrogateParams{0.0, 0.0}, 1);
  state = train_surrogate(state, truth.as_skb(SkbRole::initial));
  const EvalOutcome out = evaluate_and_update(state, truth, 10);
  CHECK(out.scores.macro_f1 == 1.0);
  for (ClassId m = 1; m <= 3; ++m) {
    CHECK(out.updated.at(m) == truth.of(m));
    CHECK(out.confusion.at(m, m) == 10);
  }
}

TEST_CASE("evaluate_and_update: all-0.5 reference degenerates to ties") {
  // every query ties across identical entries, so the lowest class wins:
  // accuracy is exactly chance 1/M and macro F1 is 2/(M(M+1))
  const std::uint16_t M = 33;
  const auto truth = synthetic_ground_truth(M, 81, 7);
  PairState state = make_pair(1, InitPattern(M, InitDirective::uninformative),
                              truth, SurrogateParams{1.0, 0.1}, 3);
  state = train_surrogate(state, state.local);
  const EvalOutcome out = evaluate_and_update(state, truth, 20);

  for (ClassId m = 1; m <= M; ++m) {
    CHECK(out.confusion.at(m, 1) == 20);  // constant prediction
  }
  const double accuracy =
      static_cast<double>(out.confusion.trace()) / out.confusion.total();
  CHECK(accuracy == doctest::Approx(1.0 / M));
  CHECK(out.scores.macro_f1 ==
        doctest::Approx(2.0 / (M * (M + 1.0))).epsilon(1e-12));
}

TEST_CASE("evaluate_and_update matches a hand-stepped oracle") {
  // M=3, d=2, N=4: replay each stage independently
  const auto truth = tiny_truth();
  const SurrogateParams params{0.5, 0.2};
  const std::uint64_t seed = 31337;
  InitPattern pattern(3, InitDirective::truth_plus_noise, 0.4);
  PairState state = make_pair(2, pattern, truth, params, seed);
  const Skb reference = state.local;
  state = train_surrogate(state, reference);
  const EvalOutcome out = evaluate_and_update(state, truth, 4);

  std::map<ClassId, std::vector<AttributeVector>> preds;
  for (ClassId m = 1; m <= 3; ++m) {
    preds[m] = predict(state, truth, m, 4);
  }
  // stage 1: mean vectors
  const Skb expected_updated = update_skb(preds, 3);
  for (ClassId m = 1; m <= 3; ++m) {
    CHECK(out.updated.at(m) == expected_updated.at(m));
  }
  // stage 2: classification against the training reference
  std::vector<ClassId> actual, predicted;
  for (ClassId m = 1; m <= 3; ++m) {
    for (const auto& s : preds[m]) {
      actual.push_back(m);
      predicted.push_back(nearest_match(s, reference).first);
    }
  }
  const ConfusionMatrix expected_cm =
      confusion_from_labels(actual, predicted, 3);
  for (ClassId a = 1; a <= 3; ++a) {
    for (ClassId p = 1; p <= 3; ++p) {
      CHECK(out.confusion.at(a, p) == expected_cm.at(a, p));
    }
  }
  // stage 3: scores
  const ClassScores expected_scores = compute_scores(expected_cm);
  CHECK(out.scores.macro_f1 == expected_scores.macro_f1);
}

TEST_CASE("evaluate at leakage 1, noise 0 echoes the reference exactly") {
  const auto truth = synthetic_ground_truth(5, 9, 12);
  // wire-quantized reference, as a broadcast global SKB would be
  InitPattern noisy(5, InitDirective::truth_plus_noise, 0.3);
  const Skb reference =
      quantized(build_initial_skb(noisy, truth, 55, 1));
  PairState state = make_pair(1, InitPattern(5, InitDirective::uninformative),
                              truth, SurrogateParams{1.0, 0.0}, 2);
  state = train_surrogate(state, reference);
  const EvalOutcome out = evaluate_and_update(state, truth, 80);
  for (ClassId m = 1; m <= 5; ++m) {
    CHECK(out.updated.at(m) == reference.at(m));
  }
}

TEST_CASE("emitted vectors respect [0,1] bounds") {
  const auto truth = synthetic_ground_truth(4, 7, 21);
  PairState state = make_pair(1, InitPattern(4, InitDirective::uninformative),
                              truth, SurrogateParams{0.5, 2.0}, 9);
  state = train_surrogate(state, state.local);
  for (ClassId m = 1; m <= 4; ++m) {
    for (const auto& s : predict(state, truth, m, 50)) {
      for (double x : s.values()) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
    }
  }
}

TEST_CASE("replacing an uninformative entry with truth never hurts that class") {
  // statistical check over 25 seeds at the default surrogate
  const std::uint16_t M = 10;
  const auto truth = synthetic_ground_truth(M, 20, 5);
  const ClassId target = 4;
  double mean_before = 0.0, mean_after = 0.0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    PairState flat = make_pair(1, InitPattern(M, InitDirective::uninformative),
                               truth, SurrogateParams{}, seed);
    PairState informed = flat;

    flat = train_surrogate(flat, flat.local);
    mean_before +=
        evaluate_and_update(flat, truth, 30).scores.of(target).f1;

    std::map<ClassId, AttributeVector> entries = informed.local.entries();
    entries.at(target) = truth.of(target);
    informed = train_surrogate(
        informed, Skb(SkbRole::initial, M, std::move(entries)));
    mean_after +=
        evaluate_and_update(informed, truth, 30).scores.of(target).f1;
  }
  CHECK(mean_after / 25 >= mean_before / 25);
}

TEST_CASE("identical seeds give bit-identical evaluations") {
  const auto truth = synthetic_ground_truth(6, 10, 77);
  InitPattern pattern(6, InitDirective::truth_plus_noise, 0.5);
  pattern.set_range(1, 2, InitDirective::uninformative);

  auto run = [&] {
    PairState s = make_pair(3, pattern, truth, SurrogateParams{}, 1234);
    const Skb init = s.local;
    s = train_surrogate(s, init);
    return evaluate_and_update(s, truth, 16);
  };
  const EvalOutcome a = run();
  const EvalOutcome b = run();
  CHECK(a.scores.macro_f1 == b.scores.macro_f1);
  for (ClassId m = 1; m <= 6; ++m) {
    CHECK(a.updated.at(m) == b.updated.at(m));
    for (ClassId p = 1; p <= 6; ++p) {
      CHECK(a.confusion.at(m, p) == b.confusion.at(m, p));
    }
  }
}
