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
#ifndef DCSH_LABELS_H_
#define DCSH_LABELS_H_

#include <initializer_list>
#include <vector>

namespace dcsh {

// The classes a sample belongs to: sorted, unique, non-empty.
class LabelSet {
 public:
  LabelSet() = default;
  // Sorts and deduplicates. Throws kLabel when empty or any index < 0.
  explicit LabelSet(std::vector<int> classes);
  LabelSet(std::initializer_list<int> classes)
      : LabelSet(std::vector<int>(classes)) {}

  const std::vector<int>& classes() const { return classes_; }
  int size() const { return static_cast<int>(classes_.size()); }
  bool empty() const { return classes_.empty(); }
  bool contains(int c) const;
  int max_class() const { return classes_.back(); }

  // True when the two sets share at least one class.
  bool Intersects(const LabelSet& other) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<int> classes_;
};

}  // namespace dcsh

#endif  // DCSH_LABELS_H_
