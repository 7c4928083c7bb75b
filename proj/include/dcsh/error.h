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

#ifndef DCSH_ERROR_H_
#define DCSH_ERROR_H_

#include <stdexcept>
#include <string>

namespace dcsh {

enum class ErrorCode {
  kDimension,      // operand shapes do not agree
  kShape,          // matrix not square / not symmetric
  kConfig,         // parameter combination rejected
  kNumeric,        // NaN or Inf produced
  kLabel,          // empty or malformed label set
  kCoverage,       // a class has no samples
  kCapacity,       // more centers requested than a Hadamard matrix holds
  kNotPowerOfTwo,  // Hadamard requested for a non power-of-two length
  kState,          // stale or missing cache
  kFormat,         // bad magic, version or syntax in a file
  kCountMismatch,  // header counts disagree with the payload
  kLabelRange,     // class index outside [0, C)
  kSplitOverlap,   // a sample tagged both query and gallery
  kIo,             // file could not be opened / written
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the library. The message is meant for humans; the
// code is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dcsh

#endif  // DCSH_ERROR_H_
