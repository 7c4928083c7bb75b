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
#ifndef DCSH_DATASET_H_
#define DCSH_DATASET_H_

#include <cstdint>
#include <vector>

#include "dcsh/labels.h"
#include "dcsh/numerics.h"

namespace dcsh {

// Membership flags of one sample. Query and gallery are mutually exclusive;
// train may be combined with gallery.
enum SplitFlag : uint8_t {
  kSplitTrain = 1,
  kSplitGallery = 2,
  kSplitQuery = 4,
};

// A subset of a Dataset, rows keyed by their index in the parent.
struct LabeledSamples {
  Matrix features;
  std::vector<LabelSet> labels;
  std::vector<int64_t> ids;

  int size() const { return static_cast<int>(ids.size()); }
};

struct Dataset {
  Matrix features;               // N × D
  std::vector<LabelSet> labels;  // N
  std::vector<uint8_t> splits;   // N, SplitFlag bits
  int num_classes = 0;

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Throws on count mismatch, out-of-range labels, or query/gallery overlap.
  void Validate() const;

  // Rows whose split mask contains `flag`, in index order.
  LabeledSamples Select(SplitFlag flag) const;
};

}  // namespace dcsh

#endif  // DCSH_DATASET_H_
