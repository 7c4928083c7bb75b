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
#include <bit>
#include <string>
#include <unordered_set>

#include "dcsh/error.h"

namespace dcsh {

namespace {

int PopcountXor(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  int d = 0;
  for (size_t w = 0; w < a.size(); ++w) d += std::popcount(a[w] ^ b[w]);
  return d;
}

}  // namespace

int Hamming(const Codeword& a, const Codeword& b) {
  if (a.bits() != b.bits()) {
    throw Error(ErrorCode::kDimension,
                "Hamming: code lengths differ (" + std::to_string(a.bits()) +
                    " vs " + std::to_string(b.bits()) + ")");
  }
  return PopcountXor(a.words(), b.words());
}

PackedCodeIndex::PackedCodeIndex(std::span<const Codeword> codes,
                                 std::vector<int64_t> ids,
                                 std::vector<LabelSet> labels)
    : ids_(std::move(ids)), labels_(std::move(labels)) {
  if (codes.size() != ids_.size() ||
      (!labels_.empty() && codes.size() != labels_.size())) {
    throw Error(ErrorCode::kDimension,
                "PackedCodeIndex: codes, ids and labels differ in count");
  }
  bits_ = codes.empty() ? 0 : codes.front().bits();
  words_per_code_ = Codeword::WordsFor(bits_);
  words_.reserve(codes.size() * words_per_code_);
  for (const Codeword& code : codes) {
    if (code.bits() != bits_) {
      throw Error(ErrorCode::kDimension,
                  "PackedCodeIndex: mixed code lengths in gallery");
    }
    words_.insert(words_.end(), code.words().begin(), code.words().end());
  }
  std::unordered_set<int64_t> seen;
  for (int64_t id : ids_) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kConfig,
                  "PackedCodeIndex: duplicate id " + std::to_string(id));
    }
  }
}

std::vector<int> PackedCodeIndex::Distances(const Codeword& query) const {
  if (query.bits() != bits_) {
    throw Error(ErrorCode::kDimension,
                "query has " + std::to_string(query.bits()) +
                    " bits, gallery has " + std::to_string(bits_));
  }
  std::vector<int> out(size());
  for (int row = 0; row < size(); ++row) {
    out[row] = PopcountXor(query.words(), code(row));
  }
  return out;
}

TopK QueryTopK(const PackedCodeIndex& index, const Codeword& query, int k) {
  TopK result;
  if (k > index.size()) {
    result.clipped = true;
    k = index.size();
  }
  k = std::max(k, 0);
  const std::vector<int> dist = index.Distances(query);
  std::vector<Neighbor> all(index.size());
  for (int row = 0; row < index.size(); ++row) {
    all[row] = {index.id(row), dist[row], row};
  }
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(k);
  result.neighbors = std::move(all);
  return result;
}

double AveragePrecision(std::span<const uint8_t> relevance,
                        int total_relevant) {
  const int k = static_cast<int>(relevance.size());
  const int denom = std::min(total_relevant, k);
  if (denom <= 0) return 0.0;
  double sum = 0.0;
  int hits = 0;
  for (int i = 0; i < k; ++i) {
    if (relevance[i]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(denom);
}

bool IsRelevant(const LabelSet& query, const LabelSet& item,
                RelevanceRule rule) {
  return rule == RelevanceRule::kSameClass ? query == item
                                           : query.Intersects(item);
}

MapResult MapAtK(std::span<const Query> queries,
                 const PackedCodeIndex& gallery, int k, RelevanceRule rule) {
  if (queries.empty()) {
    throw Error(ErrorCode::kConfig, "MapAtK: empty query set");
  }
  if (k < 1) throw Error(ErrorCode::kConfig, "MapAtK: k must be >= 1");
  if (!gallery.has_labels() && gallery.size() > 0) {
    throw Error(ErrorCode::kConfig, "MapAtK: gallery carries no labels");
  }
  MapResult result;
  result.ids.reserve(queries.size());
  result.ap.reserve(queries.size());
  double total = 0.0;
  for (const Query& q : queries) {
    int relevant_total = 0;
    for (int row = 0; row < gallery.size(); ++row) {
      if (IsRelevant(q.labels, gallery.labels(row), rule)) ++relevant_total;
    }
    const TopK top = QueryTopK(gallery, q.code, k);
    std::vector<uint8_t> rel(top.neighbors.size());
    for (size_t i = 0; i < rel.size(); ++i) {
      rel[i] = IsRelevant(q.labels, gallery.labels(top.neighbors[i].row), rule);
    }
    const double ap = AveragePrecision(rel, relevant_total);
    result.ids.push_back(q.id);
    result.ap.push_back(ap);
    total += ap;
  }
  result.map = total / static_cast<double>(queries.size());
  return result;
}

std::vector<PrPoint> PrCurve(std::span<const Query> queries,
                             const PackedCodeIndex& gallery,
                             RelevanceRule rule) {
  if (queries.empty()) {
    throw Error(ErrorCode::kConfig, "PrCurve: empty query set");
  }
  if (!gallery.has_labels() && gallery.size() > 0) {
    throw Error(ErrorCode::kConfig, "PrCurve: gallery carries no labels");
  }
  const int bits = gallery.bits();
  std::vector<double> recall_sum(bits + 1, 0.0);
  std::vector<double> precision_sum(bits + 1, 0.0);
  int counted = 0;
  std::vector<int> hist_all(bits + 1);
  std::vector<int> hist_rel(bits + 1);
  for (const Query& q : queries) {
    std::fill(hist_all.begin(), hist_all.end(), 0);
    std::fill(hist_rel.begin(), hist_rel.end(), 0);
    const std::vector<int> dist = gallery.Distances(q.code);
    int relevant_total = 0;
    for (int row = 0; row < gallery.size(); ++row) {
      ++hist_all[dist[row]];
      if (IsRelevant(q.labels, gallery.labels(row), rule)) {
        ++hist_rel[dist[row]];
        ++relevant_total;
      }
    }
    if (relevant_total == 0) continue;
    ++counted;
    int retrieved = 0;
    int hits = 0;
    for (int t = 0; t <= bits; ++t) {
      retrieved += hist_all[t];
      hits += hist_rel[t];
      recall_sum[t] += static_cast<double>(hits) / relevant_total;
      precision_sum[t] += retrieved == 0 ? 1.0
                                         : static_cast<double>(hits) / retrieved;
    }
  }
  if (counted == 0) {
    throw Error(ErrorCode::kConfig,
                "PrCurve: no query has a relevant gallery item");
  }
  std::vector<PrPoint> curve(bits + 1);
  for (int t = 0; t <= bits; ++t) {
    curve[t] = {t, recall_sum[t] / counted, precision_sum[t] / counted};
  }
  return curve;
}

}  // namespace dcsh
