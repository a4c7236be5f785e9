#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "semcoop/knowledge.hpp"

using namespace semcoop;

namespace {

Skb flat_skb(std::uint16_t num_classes, std::size_t d, double value) {
  std::map<ClassId, AttributeVector> entries;
  for (ClassId m = 1; m <= num_classes; ++m) {
    entries.emplace(m, AttributeVector(std::vector<double>(d, value)));
  }
  return Skb(SkbRole::updated, num_classes, std::move(entries));
}

ClassScores scores_from(const std::vector<double>& f1s) {
  ClassScores scores;
  for (double f1 : f1s) {
    scores.per_class.push_back({f1, f1, f1});
  }
  scores.macro_f1 = 0.0;
  for (double f1 : f1s) {
    scores.macro_f1 += f1 / f1s.size();
  }
  return scores;
}

KnowledgeUpload upload(PairId pair, ClassId cls, double f1) {
  return KnowledgeUpload{pair, cls, f1,
                         AttributeVector({f1, double(pair) / 100.0})};
}

}  // namespace

TEST_CASE("selection keeps exactly the classes with f1 above gamma") {
  const Skb skb = flat_skb(4, 3, 0.5);
  const ClassScores scores = scores_from({0.2, 0.9, 0.85, 0.86});
  const auto sel = select_knowledge(skb, scores, 0.85, 2);
  REQUIRE(sel.size() == 2);  // strict inequality drops the 0.85 class
  CHECK(sel[0].class_id == 2);
  CHECK(sel[1].class_id == 4);
  CHECK(sel[0].pair_id == 2);
  CHECK(sel[0].f1 == 0.9);
  CHECK(sel[0].vector == skb.at(2));
}

TEST_CASE("gamma 0 selects every class with positive f1") {
  const Skb skb = flat_skb(5, 2, 0.1);
  const ClassScores scores = scores_from({0.4, 0.01, 0.99, 0.5, 0.3});
  CHECK(select_knowledge(skb, scores, 0.0, 1).size() == 5);

  const ClassScores with_zero = scores_from({0.4, 0.0, 0.99, 0.5, 0.3});
  CHECK(select_knowledge(skb, with_zero, 0.0, 1).size() == 4);
}

TEST_CASE("gamma 1 selects nothing") {
  const Skb skb = flat_skb(3, 2, 0.1);
  const ClassScores scores = scores_from({1.0, 1.0, 1.0});
  CHECK(select_knowledge(skb, scores, 1.0, 1).empty());
}

TEST_CASE("selection sets are nested as gamma falls") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Skb skb = flat_skb(20, 2, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> f1s(20);
    for (auto& f : f1s) {
      f = uni(rng);
    }
    const ClassScores scores = scores_from(f1s);
    const double g_low = uni(rng) * 0.5;
    const double g_high = g_low + uni(rng) * (1.0 - g_low);
    const auto sel_high = select_knowledge(skb, scores, g_high, 1);
    const auto sel_low = select_knowledge(skb, scores, g_low, 1);
    CHECK(sel_high.size() <= sel_low.size());
    for (const auto& u : sel_high) {
      CHECK(std::any_of(sel_low.begin(), sel_low.end(), [&](const auto& v) {
        return v.class_id == u.class_id;
      }));
    }
  }
}

TEST_CASE("gamma outside [0,1] is rejected") {
  const Skb skb = flat_skb(2, 2, 0.5);
  const ClassScores scores = scores_from({0.5, 0.5});
  CHECK_THROWS_AS(select_knowledge(skb, scores, 1.5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(select_knowledge(skb, scores, -0.1, 1),
                  std::invalid_argument);
}

TEST_CASE("aggregating a single upload yields exactly that class") {
  const std::vector<KnowledgeUpload> uploads = {upload(1, 3, 0.7)};
  const GlobalSkb global = aggregate_global(uploads);
  CHECK(global.size() == 1);
  REQUIRE(global.contains(3));
  CHECK(global.at(3).f1 == 0.7);
  CHECK(global.at(3).source_pair == 1);
  CHECK_FALSE(global.contains(1));
}

TEST_CASE("the higher f1 wins a contested class") {
  const std::vector<KnowledgeUpload> uploads = {upload(2, 5, 0.9),
                                                upload(3, 5, 0.95)};
  const GlobalSkb global = aggregate_global(uploads);
  CHECK(global.at(5).source_pair == 3);
  CHECK(global.at(5).f1 == 0.95);
}

TEST_CASE("equal f1 breaks ties toward the lower pair id") {
  const std::vector<KnowledgeUpload> uploads = {upload(3, 2, 0.8),
                                                upload(1, 2, 0.8),
                                                upload(2, 2, 0.8)};
  CHECK(aggregate_global(uploads).at(2).source_pair == 1);
}

TEST_CASE("aggregation equals a max-scan oracle and ignores order") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> cls(1, 10);
  std::uniform_int_distribution<int> pair(1, 5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::vector<KnowledgeUpload> uploads;
  for (int i = 0; i < 100; ++i) {
    uploads.push_back(upload(static_cast<PairId>(pair(rng)),
                             static_cast<ClassId>(cls(rng)), uni(rng)));
  }
  const GlobalSkb global = aggregate_global(uploads);

  for (ClassId m = 1; m <= 10; ++m) {
    const KnowledgeUpload* best = nullptr;
    for (const auto& u : uploads) {
      if (u.class_id != m) {
        continue;
      }
      if (best == nullptr || u.f1 > best->f1 ||
          (u.f1 == best->f1 && u.pair_id < best->pair_id)) {
        best = &u;
      }
    }
    if (best == nullptr) {
      CHECK_FALSE(global.contains(m));
    } else {
      REQUIRE(global.contains(m));
      CHECK(global.at(m).f1 == best->f1);
      CHECK(global.at(m).source_pair == best->pair_id);
      CHECK(global.at(m).vector == best->vector);
    }
  }

  auto shuffled = uploads;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const GlobalSkb again = aggregate_global(shuffled);
  REQUIRE(again.size() == global.size());
  for (const auto& [m, e] : global.entries()) {
    CHECK(again.at(m).f1 == e.f1);
    CHECK(again.at(m).source_pair == e.source_pair);
    CHECK(again.at(m).vector == e.vector);
  }
}

TEST_CASE("aggregation is idempotent") {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> cls(1, 6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<KnowledgeUpload> uploads;
  for (int i = 0; i < 40; ++i) {
    uploads.push_back(upload(static_cast<PairId>(1 + i % 3),
                             static_cast<ClassId>(cls(rng)), uni(rng)));
  }
  const GlobalSkb once = aggregate_global(uploads);
  const auto round_trip = once.to_uploads();
  const GlobalSkb twice = aggregate_global(round_trip);
  REQUIRE(twice.size() == once.size());
  for (const auto& [m, e] : once.entries()) {
    CHECK(twice.at(m).f1 == e.f1);
    CHECK(twice.at(m).source_pair == e.source_pair);
    CHECK(twice.at(m).vector == e.vector);
  }
}

TEST_CASE("empty upload set aggregates to an empty global SKB") {
  const GlobalSkb global = aggregate_global(std::vector<KnowledgeUpload>{});
  CHECK(global.empty());
  CHECK_FALSE(global.complete(3));
}

TEST_CASE("winning f1 dominates every upload for that class") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> cls(1, 4);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<KnowledgeUpload> uploads;
  for (int i = 0; i < 60; ++i) {
    uploads.push_back(upload(static_cast<PairId>(1 + i % 4),
                             static_cast<ClassId>(cls(rng)), uni(rng)));
  }
  const GlobalSkb global = aggregate_global(uploads);
  for (const auto& u : uploads) {
    CHECK(global.at(u.class_id).f1 >= u.f1);
  }
}

TEST_CASE("merge_reference fills the gaps from the fallback") {
  const Skb fallback = flat_skb(4, 2, 0.25);
  GlobalSkb global;
  global.offer(upload(2, 2, 0.9));
  global.offer(upload(1, 4, 0.8));

  const Skb merged = merge_reference(global, fallback);
  CHECK(merged.role() == SkbRole::global);
  CHECK(merged.size() == 4);
  CHECK(merged.at(2) == global.at(2).vector);
  CHECK(merged.at(4) == global.at(4).vector);
  CHECK(merged.at(1) == fallback.at(1));
  CHECK(merged.at(3) == fallback.at(3));
}

TEST_CASE("merge with a complete global uses no fallback entries") {
  const Skb fallback = flat_skb(3, 2, 0.1);
  GlobalSkb global;
  for (ClassId m = 1; m <= 3; ++m) {
    global.offer(upload(1, m, 0.5));
  }
  CHECK(global.complete(3));
  const Skb merged = merge_reference(global, fallback);
  for (ClassId m = 1; m <= 3; ++m) {
    CHECK(merged.at(m) == global.at(m).vector);
  }
}
