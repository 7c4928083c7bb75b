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
#ifndef DCSH_GRADCHECK_H_
#define DCSH_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dcsh {

// Central-difference verification of the analytic gradients. Every error is
// RelativeError(analytic, finite_difference).
struct GradCheckRow {
  int instance = 0;
  std::string what;  // "dccf" or "backward"
  int rows = 0;
  int cols = 0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckRow> rows;
  double max_dccf = 0.0;
  double max_backward = 0.0;
};

// `instances` random DCCF problems (views up to 24 × 6) and as many
// end-to-end network problems (24 samples, D=6, B=4, C=3), all seeded from
// `seed`. The backward error of an instance is the largest over its
// parameter blocks.
GradCheckReport RunGradientChecks(uint64_t seed, int instances,
                                  double step = 1e-5);

}  // namespace dcsh

#endif  // DCSH_GRADCHECK_H_
