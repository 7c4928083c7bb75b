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
#include "dcsh/hash_centers.h"

#include <bit>
#include <random>
#include <string>

#include "dcsh/error.h"

namespace dcsh {

void HashCenterSet::Validate() const {
  for (int c = 0; c < classes(); ++c) {
    if (centers[c].bits() != bits) {
      throw Error(ErrorCode::kDimension,
                  "center " + std::to_string(c) + " has " +
                      std::to_string(centers[c].bits()) + " bits, expected " +
                      std::to_string(bits));
    }
  }
}

bool IsPowerOfTwo(int n) { return n > 0 && std::has_single_bit(
                                               static_cast<unsigned>(n)); }

HashCenterSet GenHadamardCenters(int bits, int classes) {
  if (!IsPowerOfTwo(bits)) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "Hadamard centers need a power-of-two length, got B=" +
                    std::to_string(bits) + "; use Bernoulli centers");
  }
  if (classes < 1 || classes > bits) {
    throw Error(ErrorCode::kCapacity,
                "Hadamard matrix of order " + std::to_string(bits) +
                    " holds at most " + std::to_string(bits) +
                    " centers, requested " + std::to_string(classes));
  }
  HashCenterSet set;
  set.bits = bits;
  set.epoch = 0;
  // Sylvester: H[i][j] = (-1)^popcount(i & j).
  for (int i = 0; i < classes; ++i) {
    Codeword code(bits);
    for (int j = 0; j < bits; ++j) {
      code.set(j, std::popcount(static_cast<unsigned>(i & j)) % 2 == 0);
    }
    set.centers.push_back(std::move(code));
  }
  return set;
}

int MinPairwiseDistance(const HashCenterSet& set) {
  int best = set.bits;
  for (int a = 0; a < set.classes(); ++a) {
    for (int b = a + 1; b < set.classes(); ++b) {
      int d = 0;
      const auto wa = set.centers[a].words();
      const auto wb = set.centers[b].words();
      for (size_t w = 0; w < wa.size(); ++w) d += std::popcount(wa[w] ^ wb[w]);
      best = std::min(best, d);
    }
  }
  return best;
}

HashCenterSet GenBernoulliCenters(int bits, int classes, uint64_t seed,
                                  int trials) {
  if (bits < 1 || classes < 1 || trials < 1) {
    throw Error(ErrorCode::kConfig,
                "Bernoulli centers need B >= 1, C >= 1, trials >= 1");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  HashCenterSet best;
  int best_distance = -1;
  for (int t = 0; t < trials; ++t) {
    HashCenterSet candidate;
    candidate.bits = bits;
    for (int c = 0; c < classes; ++c) {
      Codeword code(bits);
      for (int j = 0; j < bits; ++j) code.set(j, coin(rng));
      candidate.centers.push_back(std::move(code));
    }
    const int d = MinPairwiseDistance(candidate);
    if (d > best_distance) {
      best_distance = d;
      best = std::move(candidate);
    }
  }
  return best;
}

HashCenterSet GenInitialCenters(int bits, int classes, uint64_t seed,
                                int trials) {
  if (IsPowerOfTwo(bits) && classes <= bits) {
    return GenHadamardCenters(bits, classes);
  }
  return GenBernoulliCenters(bits, classes, seed, trials);
}

namespace {

// splitmix64 finalizer.
uint64_t Mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

bool TieBreakBit(uint64_t seed, uint64_t key, int bit) {
  const uint64_t h = Mix(Mix(Mix(seed) ^ key) ^ static_cast<uint64_t>(bit));
  return (h >> 63) != 0;
}

Codeword AssignTarget(const LabelSet& labels, const HashCenterSet& centers,
                      uint64_t seed, uint64_t sample_key) {
  if (labels.empty()) {
    throw Error(ErrorCode::kLabel, "AssignTarget: empty label set");
  }
  if (labels.max_class() >= centers.classes()) {
    throw Error(ErrorCode::kLabelRange,
                "AssignTarget: class " + std::to_string(labels.max_class()) +
                    " has no center (C=" + std::to_string(centers.classes()) +
                    ")");
  }
  if (labels.size() == 1) return centers[labels.classes().front()];

  const int voters = labels.size();
  Codeword target(centers.bits);
  for (int j = 0; j < centers.bits; ++j) {
    int ones = 0;
    for (int c : labels.classes()) ones += centers[c].get(j) ? 1 : 0;
    const int zeros = voters - ones;
    if (ones != zeros) {
      target.set(j, ones > zeros);
    } else {
      target.set(j, TieBreakBit(seed, sample_key, j));
    }
  }
  return target;
}

HashCenterSet UpdateCenters(const Matrix& hashes,
                            std::span<const LabelSet> labels, int classes,
                            int current_epoch,
                            const CenterUpdateOptions& options) {
  if (static_cast<size_t>(hashes.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimension,
                "UpdateCenters: " + std::to_string(hashes.rows()) +
                    " hash rows but " + std::to_string(labels.size()) +
                    " label sets");
  }
  const int bits = static_cast<int>(hashes.cols());
  Matrix sums = Matrix::Zero(classes, bits);
  std::vector<int> group_size(classes, 0);
  std::vector<double> weight_sum(classes, 0.0);

  for (Eigen::Index n = 0; n < hashes.rows(); ++n) {
    const LabelSet& l = labels[n];
    if (l.empty()) {
      throw Error(ErrorCode::kLabel,
                  "UpdateCenters: sample " + std::to_string(n) +
                      " has no labels");
    }
    if (l.max_class() >= classes) {
      throw Error(ErrorCode::kLabelRange,
                  "UpdateCenters: sample " + std::to_string(n) +
                      " carries class " + std::to_string(l.max_class()) +
                      " >= C=" + std::to_string(classes));
    }
    const double w = 1.0 / static_cast<double>(l.size());
    const RowVector mapped = (2.0 * hashes.row(n).array() - 1.0).matrix();
    for (int c : l.classes()) {
      sums.row(c) += w * mapped;
      group_size[c] += 1;
      weight_sum[c] += w;
    }
  }

  HashCenterSet out;
  out.bits = bits;
  out.epoch = current_epoch + 1;
  out.centers.reserve(classes);
  for (int c = 0; c < classes; ++c) {
    if (group_size[c] == 0) {
      throw Error(ErrorCode::kCoverage,
                  "UpdateCenters: class " + std::to_string(c) +
                      " has no samples");
    }
    const double denom = options.normalize_by_weight
                             ? weight_sum[c]
                             : static_cast<double>(group_size[c]);
    Codeword code(bits);
    for (int j = 0; j < bits; ++j) code.set(j, sums(c, j) / denom >= 0.0);
    out.centers.push_back(std::move(code));
  }
  return out;
}

}  // namespace dcsh
