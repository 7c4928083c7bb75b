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
#ifndef DCSH_SYNTHETIC_H_
#define DCSH_SYNTHETIC_H_

#include <cstdint>

#include "dcsh/dataset.h"

namespace dcsh {

// Gaussian clusters around class prototypes, a stand-in for precomputed image
// features. Sample i has primary class i mod C.
struct SyntheticParams {
  int n = 1000;
  int dim = 32;
  int classes = 10;
  // Prototype norm; the within-class noise is unit Gaussian per dimension.
  double separation = 6.0;
  // Chance that a sample also carries a second, distinct class.
  double multilabel_p = 0.0;
  uint64_t seed = 1;
  // Query count; negative means n / 10. Queries are drawn stratified by
  // primary class and never enter the gallery.
  int num_queries = -1;
  // Training samples taken (stratified) from the gallery; negative means the
  // whole gallery.
  int num_train = -1;
};

Dataset GenSynthetic(const SyntheticParams& params);

}  // namespace dcsh

#endif  // DCSH_SYNTHETIC_H_
