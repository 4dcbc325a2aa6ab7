/*
 * Copyright 2026 The rankpair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankpair/assign.h"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "rankpair/errors.h"
#include "test_util.h"

namespace rankpair {
namespace {

using testing::make_instance;
using testing::N;
using testing::P;
using Set = std::vector<std::size_t>;

bool contains(const Set& s, std::size_t v) {
  return std::find(s.begin(), s.end(), v) != s.end();
}

TEST(Arps, Examples) {
  const auto single = make_instance({0, 0, 0}, {P, N, N}, {0.8, 0, 0});
  EXPECT_EQ(arps(single).at(0), (Set{1, 2}));

  const auto chain =
      make_instance({0, 0, 0, 0}, {P, P, P, N}, {0.9, 0.7, 0.5, 0.0});
  const AdaptiveNegativeSets s = arps(chain);
  EXPECT_EQ(s.at(0), (Set{1, 2, 3}));
  EXPECT_EQ(s.at(1), (Set{2, 3}));
  EXPECT_EQ(s.at(2), (Set{3}));
  EXPECT_EQ(s.total_pairs(), 6u);

  const auto tie = make_instance({0, 0}, {P, P}, {0.6, 0.6});
  EXPECT_TRUE(arps(tie).at(0).empty());
  EXPECT_TRUE(arps(tie).at(1).empty());

  EXPECT_TRUE(arps(make_instance({0, 0}, {N, N})).sets.empty());
  EXPECT_THROW(arps(chain).at(3), InvalidArgument);
}

TEST(Arps, IgnoredSamplesNeverPaired) {
  const auto inst = make_instance({0, 0, 0}, {P, Role::kIgnored, N},
                                  {0.9, 0.3, 0.0});
  EXPECT_EQ(arps(inst).at(0), Set{2});
}

TEST(Arps, LayoutProperties) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> role(0, 2);
  std::uniform_int_distribution<int> level(0, 4);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 25;
    std::vector<Role> roles(n);
    std::vector<double> ious(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int r = role(rng);
      roles[i] = r == 0 ? P : (r == 1 ? N : Role::kIgnored);
      ious[i] = 0.5 + 0.1 * level(rng);  // deliberately coarse: many ties
    }
    const auto inst = make_instance(std::vector<double>(n, 0.0), roles, ious);
    const AdaptiveNegativeSets s = arps(inst);
    const Set negs = inst.negatives();
    for (std::size_t u : inst.positives()) {
      const Set& a = s.at(u);
      EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
      std::size_t lower = 0;
      for (std::size_t v = 0; v < n; ++v) {
        const bool lower_pos = roles[v] == P && ious[v] < ious[u];
        lower += lower_pos ? 1 : 0;
        EXPECT_EQ(contains(a, v), roles[v] == N || lower_pos);
      }
      EXPECT_EQ(a.size(), negs.size() + lower);
      for (std::size_t v : inst.positives()) {
        if (v == u) continue;
        const int count = contains(a, v) + contains(s.at(v), u);
        EXPECT_EQ(count, ious[u] == ious[v] ? 0 : 1);
      }
    }
  }
}

TEST(IouThresholdAssign, Examples) {
  const std::vector<Box> gts{{0, 0, 1, 1}};
  const std::vector<Box> anchors{{0, 0, 1, 1}, {3, 3, 4, 4}, {0, 0, 1, 0.45}};
  const AssignerOutcome out = iou_threshold_assign(anchors, gts, 0.5, 0.4);
  EXPECT_EQ(out.positives, Set{0});
  EXPECT_EQ(out.negatives, Set{1});
  EXPECT_EQ(out.ignored, Set{2});
  EXPECT_EQ(out.matched_iou[0], 1.0);
  EXPECT_EQ(out.matched_iou[1], 0.0);
  EXPECT_DOUBLE_EQ(out.matched_iou[2], 0.45);
  EXPECT_EQ(out.matched_gt[0], 0);
  EXPECT_EQ(out.matched_gt[1], kBackground);
  EXPECT_EQ(out.roles(), (std::vector<Role>{P, N, Role::kIgnored}));
}

TEST(IouThresholdAssign, TiesGoToLowerGtAndNoGtsMeansNegative) {
  const std::vector<Box> gts{{0, 0, 1, 1}, {0, 0, 1, 1}};
  const std::vector<Box> anchors{{0, 0, 1, 1}};
  EXPECT_EQ(iou_threshold_assign(anchors, gts).matched_gt[0], 0);
  const AssignerOutcome none = iou_threshold_assign(anchors, {});
  EXPECT_EQ(none.negatives, Set{0});
  EXPECT_THROW(iou_threshold_assign(anchors, gts, 0.3, 0.4), InvalidArgument);
}

TEST(Normalize, Examples) {
  const std::vector<int> one{0, 0, 0};
  EXPECT_EQ(normalize_per_instance(std::vector<double>{2, 4, 6}, one),
            (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(normalize_per_instance(std::vector<double>{3, 3},
                                   std::vector<int>{4, 4}),
            (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(normalize_per_instance(std::vector<double>{1, 10, 3, 5},
                                   std::vector<int>{0, 1, 0, 1}),
            (std::vector<double>{0, 1, 1, 0}));
  EXPECT_THROW(normalize_per_instance(std::vector<double>{1.0}, one),
               InvalidArgument);
}

TEST(Normalize, AffineInvariantAndBounded) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_int_distribution<int> group(0, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(30);
    std::vector<int> ids(30);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = u(rng);
      ids[i] = group(rng);
    }
    const auto base = normalize_per_instance(v, ids);
    const double a = scale(rng), b = u(rng);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
    const auto moved = normalize_per_instance(w, ids);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(base[i], moved[i], 1e-12);
      EXPECT_GE(base[i], 0.0);
      EXPECT_LE(base[i], 1.0);
    }
  }
}

TEST(PaaStar, ExtremePointSplit) {
  const std::vector<double> rank{0.9, 0.1};
  const std::vector<double> loc{0.9, 0.1};
  const std::vector<int> ids{0, 0};
  const AssignerOutcome out = paa_star_assign(rank, loc, ids);
  EXPECT_EQ(out.positives, Set{0});
  EXPECT_EQ(out.negatives, Set{1});
  EXPECT_EQ(out.matched_gt[0], 0);
  EXPECT_EQ(out.matched_gt[1], kBackground);
}

TEST(PaaStar, BackgroundIsNegativeAndSingletonFallsBack) {
  const std::vector<double> rank{0.2, 0.8, 0.3, 0.3};
  const std::vector<double> loc{0.0, 0.7, 0.5, 0.5};
  const std::vector<int> ids{kBackground, 0, 1, 1};
  const AssignerOutcome out = paa_star_assign(rank, loc, ids);
  EXPECT_EQ(out.positives, (Set{1, 2}));
  EXPECT_EQ(out.negatives, (Set{0, 3}));
  for (const auto& r : out.responsibilities) {
    EXPECT_NEAR(r[0] + r[1], 1.0, 1e-12);
  }
}

TEST(PaaStar, NormalizationChangesOutcomeOnMismatchedScales) {
  // Ranking scores span [0, 0.1] and localization scores span [0.99, 1]:
  // unnormalized, the coordinate sum is dominated by the ranking score.
  const std::vector<double> rank{0.10, 0.095, 0.09, 0.0, 0.005, 0.01, 0.05};
  const std::vector<double> loc{0.990, 0.991, 0.992, 1.0, 0.999, 0.998, 0.9995};
  const std::vector<int> ids(rank.size(), 0);
  const AssignerOutcome normalized = paa_star_assign(rank, loc, ids, 0, true);
  const AssignerOutcome raw = paa_star_assign(rank, loc, ids, 0, false);
  EXPECT_NE(normalized.positives, raw.positives);
}

AssignerOutcome two_cluster_outcome(std::uint64_t seed,
                                    std::vector<int>* truth) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 0.05);
  std::vector<double> rank, loc;
  truth->clear();
  for (int c = 0; c < 2; ++c) {
    const double mu = c == 0 ? 0.1 : 0.9;
    for (int i = 0; i < 50; ++i) {
      rank.push_back(mu + z(rng));
      loc.push_back(mu + z(rng));
      truth->push_back(c);
    }
  }
  return paa_star_assign(rank, loc, std::vector<int>(rank.size(), 0), seed);
}

TEST(PaaStar, RecoversTwoClustersDeterministically) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<int> truth;
    const AssignerOutcome out = two_cluster_outcome(seed, &truth);
    const auto roles = out.roles();
    int correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      correct += (roles[i] == P) == (truth[i] == 1);
    }
    EXPECT_GE(correct, 95);
    std::vector<int> again_truth;
    const AssignerOutcome again = two_cluster_outcome(seed, &again_truth);
    EXPECT_EQ(again.positives, out.positives);
    EXPECT_EQ(again.responsibilities, out.responsibilities);
  }
}

}  // namespace
}  // namespace rankpair
