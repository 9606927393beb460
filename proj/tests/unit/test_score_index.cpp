#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "rocstream/score_index.hpp"

using namespace rocstream;

namespace {

CountPair flat_left_count(const std::map<double, CountPair>& flat, double sigma) {
  CountPair acc;
  for (const auto& [s, w] : flat) {
    if (s < sigma) acc += w;
  }
  return acc;
}

}  // namespace

TEST_CASE("single insertion and same-key merge") {
  ScoreIndex idx;
  idx.insert(0.5, {1, 0});
  CHECK(idx.totals() == CountPair{1, 0});
  CHECK(idx.unique_scores() == 1);
  idx.insert(0.5, {1, 0});
  CHECK(idx.totals() == CountPair{2, 0});
  CHECK(idx.unique_scores() == 1);
  CHECK(idx.weight_at(0.5) == CountPair{2, 0});
}

TEST_CASE("height stays within the AVL bound") {
  ScoreIndex idx;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<> dist(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) idx.insert(dist(rng), {1, 0});
  CHECK(idx.audit());
  CHECK(idx.height() <= 1.45 * std::log2(idx.unique_scores() + 2.0));

  ScoreIndex sorted;
  for (int i = 0; i < 1000; ++i) sorted.insert(i, {0, 1});
  CHECK(sorted.audit());
  CHECK(sorted.height() <= 1.45 * std::log2(1002.0));
}

TEST_CASE("remove decrements and deletes") {
  ScoreIndex idx;
  idx.insert(0.5, {2, 1});
  idx.remove(0.5, {1, 0});
  CHECK(idx.weight_at(0.5) == CountPair{1, 1});
  idx.remove(0.5, {1, 1});
  CHECK(idx.empty());
  CHECK(idx.totals() == CountPair{});
}

TEST_CASE("remove error paths") {
  ScoreIndex idx;
  CHECK_THROWS_AS(idx.remove(0.9, {1, 0}), ScoreNotFoundError);
  idx.insert(0.5, {1, 0});
  CHECK_THROWS_AS(idx.remove(0.5, {0, 1}), InsufficientWeightError);
  CHECK_THROWS_AS(idx.insert(std::nan(""), {1, 0}), NonFiniteScoreError);
  CHECK_THROWS_AS(idx.insert(INFINITY, {1, 0}), NonFiniteScoreError);
}

TEST_CASE("left_count and weight_at on a small index") {
  ScoreIndex idx;
  idx.insert(0.1, {1, 0});
  idx.insert(0.2, {0, 1});
  idx.insert(0.3, {1, 0});
  CHECK(idx.left_count(0.3) == CountPair{1, 1});
  CHECK(idx.left_count(0.05) == CountPair{});
  CHECK(idx.left_count(0.25) == CountPair{1, 1});  // absent probe
  CHECK(idx.weight_at(0.1) == CountPair{1, 0});
  CHECK(idx.weight_at(0.2) == CountPair{0, 1});
  CHECK(idx.weight_at(0.15) == CountPair{});
}

TEST_CASE("negative zero folds into positive zero") {
  ScoreIndex idx;
  idx.insert(-0.0, {1, 0});
  idx.insert(0.0, {0, 1});
  CHECK(idx.unique_scores() == 1);
  CHECK(idx.weight_at(0.0) == CountPair{1, 1});
  CHECK(idx.left_count(-0.0) == idx.left_count(0.0));
}

TEST_CASE("randomized mutations agree with a flat map oracle") {
  std::mt19937_64 rng(23);
  ScoreIndex idx;
  std::map<double, CountPair> flat;
  std::uniform_int_distribution<int> score_pick(0, 30);
  for (int step = 0; step < 4000; ++step) {
    const double score = score_pick(rng) / 30.0;
    const CountPair w = rng() % 2 ? CountPair{1, 0} : CountPair{0, 1};
    const bool removing = !flat.empty() && rng() % 3 == 0;
    if (removing) {
      auto it = flat.begin();
      std::advance(it, rng() % flat.size());
      CountPair take{it->second.c1 > 0 ? 1 : 0, it->second.c1 > 0 ? 0 : 1};
      idx.remove(it->first, take);
      it->second -= take;
      if (it->second.is_zero()) flat.erase(it);
    } else {
      idx.insert(score, w);
      flat[score] += w;
    }
    if (step % 37 == 0) {
      REQUIRE(idx.audit());
      const double probe = score_pick(rng) / 30.0 + (rng() % 2 ? 0.013 : 0.0);
      CHECK(idx.left_count(probe) == flat_left_count(flat, probe));
    }
  }
  REQUIRE(idx.audit());
  // Full content comparison.
  std::map<double, CountPair> seen;
  idx.for_each([&](double s, CountPair w) { seen[s] = w; });
  CHECK(seen == flat);
}

TEST_CASE("insert then remove restores the content map") {
  std::mt19937_64 rng(5);
  ScoreIndex idx;
  for (int i = 0; i < 50; ++i) idx.insert((rng() % 17) / 17.0, {1, 1});
  std::map<double, CountPair> before;
  idx.for_each([&](double s, CountPair w) { before[s] = w; });
  idx.insert(0.123, {3, 4});
  idx.remove(0.123, {3, 4});
  std::map<double, CountPair> after;
  idx.for_each([&](double s, CountPair w) { after[s] = w; });
  CHECK(before == after);
  CHECK(idx.audit());
}
