// Copyright 2026 The DCSH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "dcsh/retrieval.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "dcsh/error.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"
#include "dcsh/synthetic.h"
#include "dcsh/train.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace dcsh {
namespace {

Codeword C(const char* bits) { return Codeword::FromString(bits); }

std::vector<int> Bits(const Codeword& c) {
  std::vector<int> v(c.bits());
  for (int j = 0; j < c.bits(); ++j) v[j] = c.get(j);
  return v;
}

Codeword RandomCode(int bits, std::mt19937_64& rng) {
  Codeword c(bits);
  for (int j = 0; j < bits; ++j) c.set(j, rng() & 1);
  return c;
}

TEST(HammingTest, Examples) {
  EXPECT_EQ(Hamming(C("1010"), C("0110")), 2);
  EXPECT_EQ(Hamming(C("1010"), C("1010")), 0);
  EXPECT_THROW(Hamming(C("101"), C("1010")), Error);
}

TEST(HammingTest, MatchesNaiveLoop) {
  std::mt19937_64 rng(1);
  for (int bits : {12, 16, 24, 32, 48, 64, 67, 130}) {
    for (int pair = 0; pair < 1500; ++pair) {
      const Codeword a = RandomCode(bits, rng), b = RandomCode(bits, rng);
      ASSERT_EQ(Hamming(a, b), oracle::NaiveHamming(Bits(a), Bits(b)))
          << "B=" << bits;
    }
  }
}

TEST(PackedCodeIndexTest, PackingLayoutAndPadding) {
  std::mt19937_64 rng(2);
  std::vector<Codeword> codes;
  for (int i = 0; i < 5; ++i) codes.push_back(RandomCode(67, rng));
  const PackedCodeIndex index(codes, {10, 11, 12, 13, 14}, {});
  EXPECT_EQ(index.words_per_code(), 2);
  EXPECT_FALSE(index.has_labels());
  for (int row = 0; row < 5; ++row) {
    const auto words = index.code(row);
    for (int j = 0; j < 67; ++j) {
      EXPECT_EQ(((words[j / 64] >> (j % 64)) & 1u) != 0, codes[row].get(j));
    }
    EXPECT_EQ(words[1] >> 3, 0u);
  }
}

TEST(PackedCodeIndexTest, RejectsDuplicateIds) {
  const std::vector<Codeword> codes = {C("01"), C("10")};
  try {
    PackedCodeIndex index(codes, {4, 4}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(QueryTopKTest, HandRanking) {
  const std::vector<Codeword> codes = {C("111"), C("011"), C("000")};
  const PackedCodeIndex index(codes, {2, 1, 0}, {});
  const TopK top = QueryTopK(index, C("001"), 3);
  ASSERT_EQ(top.neighbors.size(), 3u);
  EXPECT_FALSE(top.clipped);
  EXPECT_EQ(top.neighbors[0].id, 0);
  EXPECT_EQ(top.neighbors[0].distance, 1);
  EXPECT_EQ(top.neighbors[1].id, 1);
  EXPECT_EQ(top.neighbors[1].distance, 1);
  EXPECT_EQ(top.neighbors[2].id, 2);
  EXPECT_EQ(top.neighbors[2].distance, 2);
}

TEST(QueryTopKTest, SelfRankedFirstAndClipping) {
  std::mt19937_64 rng(3);
  std::vector<Codeword> codes;
  std::vector<int64_t> ids;
  for (int i = 0; i < 20; ++i) {
    codes.push_back(RandomCode(32, rng));
    ids.push_back(100 + i);
  }
  const PackedCodeIndex index(codes, ids, {});
  const TopK top = QueryTopK(index, codes[7], 50);
  EXPECT_TRUE(top.clipped);
  EXPECT_EQ(top.neighbors.size(), 20u);
  EXPECT_EQ(top.neighbors[0].distance, 0);
  for (size_t i = 1; i < top.neighbors.size(); ++i) {
    const Neighbor& a = top.neighbors[i - 1];
    const Neighbor& b = top.neighbors[i];
    EXPECT_TRUE(a.distance < b.distance ||
                (a.distance == b.distance && a.id < b.id));
  }
}

TEST(QueryTopKTest, StorageOrderDoesNotMatter) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 40;
    std::vector<Codeword> codes;
    std::vector<int64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    // Short codes force many distance ties.
    for (int i = 0; i < n; ++i) codes.push_back(RandomCode(6, rng));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Codeword> pc;
    std::vector<int64_t> pid;
    for (int p : perm) {
      pc.push_back(codes[p]);
      pid.push_back(ids[p]);
    }
    const Codeword q = RandomCode(6, rng);
    const PackedCodeIndex a(codes, ids, {}), b(pc, pid, {});
    for (int k : {1, 7, n}) {
      const TopK ta = QueryTopK(a, q, k), tb = QueryTopK(b, q, k);
      ASSERT_EQ(ta.neighbors.size(), tb.neighbors.size());
      for (size_t i = 0; i < ta.neighbors.size(); ++i) {
        EXPECT_EQ(ta.neighbors[i].id, tb.neighbors[i].id);
        EXPECT_EQ(ta.neighbors[i].distance, tb.neighbors[i].distance);
      }
    }
  }
}

TEST(AveragePrecisionTest, Examples) {
  const std::vector<uint8_t> rel = {1, 0, 1};
  EXPECT_NEAR(AveragePrecision(rel, 2), (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_EQ(AveragePrecision(std::vector<uint8_t>{1, 1, 1, 1}, 9), 1.0);
  EXPECT_EQ(AveragePrecision(std::vector<uint8_t>{0, 0, 0}, 0), 0.0);
}

TEST(AveragePrecisionTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 40);
    std::vector<uint8_t> rel(k);
    std::vector<int> rel_int(k);
    int hits = 0;
    for (int i = 0; i < k; ++i) {
      rel[i] = static_cast<uint8_t>(rng() % 3 == 0);
      rel_int[i] = rel[i];
      hits += rel[i];
    }
    const int total = hits + static_cast<int>(rng() % 10);
    EXPECT_EQ(AveragePrecision(rel, total),
              oracle::AveragePrecision(rel_int, total));
  }
}

TEST(MapAtKTest, ArithmeticMean) {
  const std::vector<Codeword> codes = {C("00"), C("11")};
  const PackedCodeIndex gallery(codes, {0, 1}, {LabelSet{0}, LabelSet{1}});
  const std::vector<Query> queries = {{10, C("00"), LabelSet{0}},
                                      {11, C("00"), LabelSet{1}}};
  const MapResult r = MapAtK(queries, gallery, 2, RelevanceRule::kSameClass);
  EXPECT_EQ(r.ap, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(r.ids, (std::vector<int64_t>{10, 11}));
  EXPECT_DOUBLE_EQ(r.map, 0.75);
}

TEST(MapAtKTest, GalleryEqualsQueries) {
  std::vector<Codeword> codes;
  std::vector<int64_t> ids;
  std::vector<LabelSet> labels;
  std::vector<Query> queries;
  const HashCenterSet centers = GenHadamardCenters(16, 8);
  for (int c = 0; c < 8; ++c) {
    codes.push_back(centers[c]);
    ids.push_back(c);
    labels.push_back(LabelSet{c});
    queries.push_back({c, centers[c], LabelSet{c}});
  }
  const PackedCodeIndex gallery(codes, ids, labels);
  EXPECT_EQ(MapAtK(queries, gallery, 8, RelevanceRule::kSameClass).map, 1.0);
}

TEST(MapAtKTest, RelevanceRules) {
  EXPECT_TRUE(IsRelevant(LabelSet{1, 2}, LabelSet{2, 1},
                         RelevanceRule::kSameClass));
  EXPECT_FALSE(IsRelevant(LabelSet{1, 2}, LabelSet{2},
                          RelevanceRule::kSameClass));
  EXPECT_TRUE(IsRelevant(LabelSet{1, 2}, LabelSet{2, 5},
                         RelevanceRule::kShareAnyLabel));
  EXPECT_FALSE(IsRelevant(LabelSet{1, 2}, LabelSet{0, 5},
                          RelevanceRule::kShareAnyLabel));
}

TEST(MapAtKTest, Errors) {
  const std::vector<Codeword> codes = {C("00")};
  const PackedCodeIndex labeled(codes, {0}, {LabelSet{0}});
  const PackedCodeIndex unlabeled(codes, {0}, {});
  const std::vector<Query> none;
  const std::vector<Query> one = {{5, C("00"), LabelSet{0}}};
  EXPECT_THROW(MapAtK(none, labeled, 1, RelevanceRule::kSameClass), Error);
  EXPECT_THROW(MapAtK(one, labeled, 0, RelevanceRule::kSameClass), Error);
  EXPECT_THROW(MapAtK(one, unlabeled, 1, RelevanceRule::kSameClass), Error);
  EXPECT_THROW(PrCurve(none, labeled, RelevanceRule::kSameClass), Error);
}

TEST(PrCurveTest, TwoItemGallery) {
  const std::vector<Codeword> codes = {C("00"), C("01")};
  const PackedCodeIndex gallery(codes, {0, 1}, {LabelSet{0}, LabelSet{1}});
  const std::vector<Query> queries = {{9, C("00"), LabelSet{0}}};
  const auto curve = PrCurve(queries, gallery, RelevanceRule::kSameClass);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].threshold, 0);
  EXPECT_DOUBLE_EQ(curve[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(curve[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(curve[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(curve[1].precision, 0.5);
}

TEST(PrCurveTest, EmptyRetrievalCountsAsPrecisionOne) {
  const std::vector<Codeword> codes = {C("11")};
  const PackedCodeIndex gallery(codes, {0}, {LabelSet{0}});
  const std::vector<Query> queries = {{9, C("00"), LabelSet{0}}};
  const auto curve = PrCurve(queries, gallery, RelevanceRule::kSameClass);
  EXPECT_EQ(curve[0].precision, 1.0);
  EXPECT_EQ(curve[0].recall, 0.0);
  EXPECT_EQ(curve[2].recall, 1.0);
}

TEST(PrCurveTest, RecallMonotoneAndCompleteAtFullRadius) {
  std::mt19937_64 rng(6);
  std::vector<Codeword> codes;
  std::vector<int64_t> ids;
  std::vector<LabelSet> labels;
  for (int i = 0; i < 200; ++i) {
    codes.push_back(RandomCode(24, rng));
    ids.push_back(i);
    labels.push_back(LabelSet{static_cast<int>(rng() % 5)});
  }
  std::vector<Query> queries;
  for (int i = 0; i < 30; ++i) {
    queries.push_back({1000 + i, RandomCode(24, rng),
                       LabelSet{static_cast<int>(rng() % 5)}});
  }
  const PackedCodeIndex gallery(codes, ids, labels);
  const auto curve = PrCurve(queries, gallery, RelevanceRule::kShareAnyLabel);
  ASSERT_EQ(curve.size(), 25u);
  for (size_t t = 1; t < curve.size(); ++t) {
    EXPECT_GE(curve[t].recall, curve[t - 1].recall);
  }
  EXPECT_DOUBLE_EQ(curve.back().recall, 1.0);
  const MapResult r =
      MapAtK(queries, gallery, 50, RelevanceRule::kShareAnyLabel);
  EXPECT_GE(r.map, 0.0);
  EXPECT_LE(r.map, 1.0);
}

// 50 epochs on 900 samples; takes a few seconds.
TEST(TrainedRetrievalTest, SyntheticMapRegression) {
  SyntheticParams params;
  params.n = 1000;
  params.separation = 12.0;
  params.seed = 3;
  const Dataset data = GenSynthetic(params);
  const LabeledSamples train = data.Select(kSplitTrain);
  const LabeledSamples gallery = data.Select(kSplitGallery);
  const LabeledSamples queries = data.Select(kSplitQuery);
  ASSERT_EQ(gallery.size(), 900);
  ASSERT_EQ(queries.size(), 100);

  ModelShape shape;
  shape.input_dim = 32;
  DcshModel model = DcshModel::Create(shape, 5);
  TrainConfig config;
  config.epochs = 50;
  Train(model, config, train, nullptr, GenInitialCenters(32, 10, 5));

  const std::vector<Codeword> gallery_codes =
      Binarize(ForwardHashes(model, gallery.features));
  const std::vector<Codeword> query_codes =
      Binarize(ForwardHashes(model, queries.features));
  const PackedCodeIndex index(gallery_codes, gallery.ids, gallery.labels);
  std::vector<Query> qs;
  for (int i = 0; i < queries.size(); ++i) {
    qs.push_back({queries.ids[i], query_codes[i], queries.labels[i]});
  }
  const double map = MapAtK(qs, index, 100, RelevanceRule::kSameClass).map;
  EXPECT_GE(map, 0.95);
  EXPECT_NEAR(map, 0.975311, 1e-6);
}

}  // namespace
}  // namespace dcsh
