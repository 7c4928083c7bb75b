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
#include "dcsh/codeword.h"

#include "dcsh/error.h"

namespace dcsh {

Codeword::Codeword(int bits) : bits_(bits), words_(WordsFor(bits), 0) {
  if (bits < 0) throw Error(ErrorCode::kConfig, "Codeword: negative length");
}

Codeword Codeword::FromString(std::string_view text) {
  Codeword code(static_cast<int>(text.size()));
  for (int j = 0; j < code.bits_; ++j) {
    const char ch = text[j];
    if (ch != '0' && ch != '1') {
      throw Error(ErrorCode::kFormat,
                  "Codeword: character '" + std::string(1, ch) +
                      "' at position " + std::to_string(j) +
                      " is not 0 or 1");
    }
    code.set(j, ch == '1');
  }
  return code;
}

void Codeword::set(int j, bool value) {
  const uint64_t mask = uint64_t{1} << (j & 63);
  if (value) {
    words_[j >> 6] |= mask;
  } else {
    words_[j >> 6] &= ~mask;
  }
}

std::string Codeword::ToString() const {
  std::string out(bits_, '0');
  for (int j = 0; j < bits_; ++j) {
    if (get(j)) out[j] = '1';
  }
  return out;
}

}  // namespace dcsh
