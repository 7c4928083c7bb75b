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
#ifndef DCSH_NETWORK_H_
#define DCSH_NETWORK_H_

#include <cstdint>
#include <vector>

#include "dcsh/codeword.h"
#include "dcsh/numerics.h"

namespace dcsh {

// y = x·W + b with W stored fan_in × fan_out.
struct AffineLayer {
  Matrix weight;
  RowVector bias;

  int fan_in() const { return static_cast<int>(weight.rows()); }
  int fan_out() const { return static_cast<int>(weight.cols()); }
};

struct ModelShape {
  int input_dim = 0;
  std::vector<int> hidden = {256, 256};
  int bits = 32;
  int classes = 10;
  // 0 selects max(4·C, 128).
  int intermediate = 0;

  int ResolvedIntermediate() const;
};

// Feature extractor (affine + ReLU, any depth) followed by
//   hashing layer:        affine + sigmoid  → x_h ∈ (0,1)^B
//   intermediate layer:   affine + ReLU
//   classification layer: affine + sigmoid  → x_c ∈ (0,1)^C
class DcshModel {
 public:
  DcshModel() = default;
  // Takes ownership of the layers; validates the chain of widths.
  explicit DcshModel(std::vector<AffineLayer> layers);

  // Uniform ±sqrt(6 / (fan_in + fan_out)) weights, zero biases.
  static DcshModel Create(const ModelShape& shape, uint64_t seed);

  const std::vector<AffineLayer>& layers() const { return layers_; }
  std::vector<AffineLayer>& mutable_layers() {
    ++version_;
    return layers_;
  }

  int input_dim() const { return layers_.front().fan_in(); }
  int bits() const { return layers_[hash_layer()].fan_out(); }
  int classes() const { return layers_.back().fan_out(); }
  int hash_layer() const { return static_cast<int>(layers_.size()) - 3; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  bool IsSigmoid(int layer) const {
    return layer == hash_layer() || layer == num_layers() - 1;
  }

  // Bumped on every parameter change; forward caches remember it.
  uint64_t version() const { return version_; }

 private:
  std::vector<AffineLayer> layers_;
  uint64_t version_ = 0;
};

struct ForwardCache {
  uint64_t model_version = 0;
  std::vector<Matrix> inputs;       // inputs[l] fed to layer l
  std::vector<Matrix> pre_act;      // x·W + b of layer l
  std::vector<Matrix> outputs;      // activation of layer l
};

struct ForwardResult {
  Matrix xh;  // M × B
  Matrix xc;  // M × C
  ForwardCache cache;
};

ForwardResult Forward(const DcshModel& model, const Matrix& batch);

// Hash outputs only, for encoding and center updates. Processes the rows in
// chunks of `chunk` to bound memory.
Matrix ForwardHashes(const DcshModel& model, const Matrix& features,
                     int chunk = 1024);

// Parameter gradients laid out like DcshModel::layers().
using Gradients = std::vector<AffineLayer>;

// The hashing layer receives grad_xh directly plus whatever flows back
// through the intermediate and classification layers. Throws kState when the
// cache came from a different model version.
Gradients Backward(const DcshModel& model, const ForwardCache& cache,
                   const Matrix& grad_xh, const Matrix& grad_xc);

// Throws kNumeric naming the layer of the first non-finite gradient entry.
void CheckGradientsFinite(const Gradients& grads);

// p ← p − lr·g on every parameter.
void SgdStep(DcshModel& model, const Gradients& grads, double lr);

// SGD with classical momentum: v ← μ·v + g, p ← p − lr·v. With μ = 0 it is
// identical to SgdStep.
class Sgd {
 public:
  explicit Sgd(double momentum = 0.0) : momentum_(momentum) {}
  void Step(DcshModel& model, const Gradients& grads, double lr);

 private:
  double momentum_;
  Gradients velocity_;
};

// Bit j is 1 iff x_h(·, j) >= 0.5.
std::vector<Codeword> Binarize(const Matrix& xh);

}  // namespace dcsh

#endif  // DCSH_NETWORK_H_
