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
#ifndef DCSH_RETRIEVAL_H_
#define DCSH_RETRIEVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dcsh/codeword.h"
#include "dcsh/labels.h"

namespace dcsh {

// Number of differing bits. Throws kDimension when lengths differ.
int Hamming(const Codeword& a, const Codeword& b);

// Immutable bit-packed gallery for linear Hamming scans.
class PackedCodeIndex {
 public:
  // \`labels\` may be empty for an unlabeled gallery (ranking only). Throws
  // kDimension on mixed code lengths or size mismatches, kConfig on duplicate
  // ids.
  PackedCodeIndex(std::span<const Codeword> codes,
                  std::vector<int64_t> ids, std::vector<LabelSet> labels);

  int bits() const { return bits_; }
  int size() const { return static_cast<int>(ids_.size()); }
  int words_per_code() const { return words_per_code_; }
  int64_t id(int row) const { return ids_[row]; }
  bool has_labels() const { return !labels_.empty(); }
  const LabelSet& labels(int row) const { return labels_[row]; }
  std::span<const uint64_t> code(int row) const {
    return {words_.data() + static_cast<size_t>(row) * words_per_code_,
            static_cast<size_t>(words_per_code_)};
  }

  // Distance from `query` to every stored code, in storage order.
  std::vector<int> Distances(const Codeword& query) const;

 private:
  int bits_ = 0;
  int words_per_code_ = 0;
  std::vector<uint64_t> words_;
  std::vector<int64_t> ids_;
  std::vector<LabelSet> labels_;
};

struct Neighbor {
  int64_t id = 0;
  int distance = 0;
  int row = 0;  // storage position in the index

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct TopK {
  std::vector<Neighbor> neighbors;  // ascending (distance, id)
  bool clipped = false;             // k exceeded the gallery size
};

TopK QueryTopK(const PackedCodeIndex& index, const Codeword& query, int k);

// Σ_{i<=k} P(i)·rel(i) / min(R_total, k); zero when the denominator is zero.
double AveragePrecision(std::span<const uint8_t> relevance, int total_relevant);

enum class RelevanceRule {
  kSameClass,       // single-label: identical label sets
  kShareAnyLabel,   // multi-label: at least one common class
};

bool IsRelevant(const LabelSet& query, const LabelSet& item,
                RelevanceRule rule);

struct Query {
  int64_t id = 0;
  Codeword code;
  LabelSet labels;
};

struct MapResult {
  double map = 0.0;
  std::vector<int64_t> ids;     // per query
  std::vector<double> ap;       // per query, same order
};

// Mean AP@k over all queries. Throws kConfig for an empty query set.
MapResult MapAtK(std::span<const Query> queries, const PackedCodeIndex& gallery,
                 int k, RelevanceRule rule);

struct PrPoint {
  int threshold = 0;
  double recall = 0.0;
  double precision = 0.0;
};

// One point per Hamming radius t = 0..B, macro-averaged over the queries that
// have at least one relevant gallery item. A query that retrieves nothing at
// radius t counts precision 1 there.
std::vector<PrPoint> PrCurve(std::span<const Query> queries,
                             const PackedCodeIndex& gallery,
                             RelevanceRule rule);

}  // namespace dcsh

#endif  // DCSH_RETRIEVAL_H_
