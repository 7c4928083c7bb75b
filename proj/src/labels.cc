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
#include "dcsh/labels.h"

#include <algorithm>

#include "dcsh/error.h"

namespace dcsh {

LabelSet::LabelSet(std::vector<int> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw Error(ErrorCode::kLabel, "empty label set");
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()),
                 classes_.end());
  if (classes_.front() < 0) {
    throw Error(ErrorCode::kLabel, "negative class index in label set");
  }
}

bool LabelSet::contains(int c) const {
  return std::binary_search(classes_.begin(), classes_.end(), c);
}

bool LabelSet::Intersects(const LabelSet& other) const {
  auto a = classes_.begin();
  auto b = other.classes_.begin();
  while (a != classes_.end() && b != other.classes_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

}  // namespace dcsh
