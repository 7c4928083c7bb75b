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

#include "dcsh/error.h"

namespace dcsh {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kLabel: return "label";
    case ErrorCode::kCoverage: return "coverage";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kNotPowerOfTwo: return "not-power-of-two";
    case ErrorCode::kState: return "state";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kCountMismatch: return "count-mismatch";
    case ErrorCode::kLabelRange: return "label-range";
    case ErrorCode::kSplitOverlap: return "split-overlap";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace dcsh
