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
#ifndef DCSH_HASH_CENTERS_H_
#define DCSH_HASH_CENTERS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dcsh/codeword.h"
#include "dcsh/labels.h"
#include "dcsh/numerics.h"

namespace dcsh {

// One B-bit target codeword per class, tagged with the epoch that produced
// it (0 = initial generation).
struct HashCenterSet {
  int bits = 0;
  int epoch = 0;
  std::vector<Codeword> centers;  // centers[c] belongs to class c

  int classes() const { return static_cast<int>(centers.size()); }
  const Codeword& operator[](int c) const { return centers[c]; }

  // Throws kDimension unless every center has exactly `bits` bits.
  void Validate() const;

  friend bool operator==(const HashCenterSet&,
                         const HashCenterSet&) = default;
};

bool IsPowerOfTwo(int n);

// First C rows of the B×B Sylvester Hadamard matrix, +1 → 1 and -1 → 0.
// Distinct rows differ in exactly B/2 positions.
HashCenterSet GenHadamardCenters(int bits, int classes);

// Best of `trials` i.i.d. Bern(0.5) codebooks, scored by minimum pairwise
// Hamming distance. Ties go to the earliest trial.
HashCenterSet GenBernoulliCenters(int bits, int classes, uint64_t seed,
                                  int trials = 100);

// Hadamard when B is a power of two and C <= B, Bernoulli otherwise.
HashCenterSet GenInitialCenters(int bits, int classes, uint64_t seed,
                                int trials = 100);

int MinPairwiseDistance(const HashCenterSet& set);

// Deterministic fair coin for (seed, key, bit).
bool TieBreakBit(uint64_t seed, uint64_t key, int bit);

// Training target of one sample. A single label returns that class's center;
// several labels take a per-bit majority vote over their centers, with exact
// ties settled by TieBreakBit(seed, sample_key, bit).
Codeword AssignTarget(const LabelSet& labels, const HashCenterSet& centers,
                      uint64_t seed, uint64_t sample_key);

struct CenterUpdateOptions {
  // Divide the weighted sum by Σw instead of the group size.
  bool normalize_by_weight = false;
};

// Weighted-mean-and-threshold update. Each hash row (values in [0, 1]) is
// mapped to 2x - 1, weighted by 1/|labels|, summed into every class it carries
// and divided by the class group size; elements >= 0 become 1. The result is
// tagged current_epoch + 1. Throws kCoverage naming the first class with an
// empty group.
HashCenterSet UpdateCenters(const Matrix& hashes,
                            std::span<const LabelSet> labels, int classes,
                            int current_epoch,
                            const CenterUpdateOptions& options = {});

}  // namespace dcsh

#endif  // DCSH_HASH_CENTERS_H_
