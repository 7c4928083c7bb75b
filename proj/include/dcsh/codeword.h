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
#ifndef DCSH_CODEWORD_H_
#define DCSH_CODEWORD_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dcsh {

// A B-bit binary code. Bit j lives at bit (j mod 64) of word (j / 64); the
// unused high bits of the last word are always zero.
class Codeword {
 public:
  Codeword() = default;
  explicit Codeword(int bits);

  // Parses a string of '0'/'1' characters; character j is bit j.
  static Codeword FromString(std::string_view text);

  int bits() const { return bits_; }
  bool get(int j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(int j, bool value);

  std::span<const uint64_t> words() const { return words_; }
  std::string ToString() const;

  friend bool operator==(const Codeword&, const Codeword&) = default;

  static int WordsFor(int bits) { return (bits + 63) / 64; }

 private:
  int bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace dcsh

#endif  // DCSH_CODEWORD_H_
