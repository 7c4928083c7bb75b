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
#include "dcsh/network.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dcsh/error.h"

namespace dcsh {

int ModelShape::ResolvedIntermediate() const {
  return intermediate > 0 ? intermediate : std::max(4 * classes, 128);
}

DcshModel::DcshModel(std::vector<AffineLayer> layers)
    : layers_(std::move(layers)) {
  if (layers_.size() < 3) {
    throw Error(ErrorCode::kConfig,
                "model needs hashing, intermediate and classification layers");
  }
  for (size_t l = 0; l < layers_.size(); ++l) {
    const AffineLayer& layer = layers_[l];
    if (layer.bias.size() != layer.weight.cols()) {
      throw Error(ErrorCode::kDimension,
                  "layer " + std::to_string(l) + ": bias has " +
                      std::to_string(layer.bias.size()) + " entries, expected " +
                      std::to_string(layer.weight.cols()));
    }
    if (l > 0 && layer.weight.rows() != layers_[l - 1].weight.cols()) {
      throw Error(ErrorCode::kDimension,
                  "layer " + std::to_string(l) + " expects " +
                      std::to_string(layer.weight.rows()) +
                      " inputs but layer " + std::to_string(l - 1) +
                      " produces " + std::to_string(layers_[l - 1].weight.cols()));
    }
  }
  const int intermediate = layers_[layers_.size() - 2].fan_out();
  if (intermediate <= classes()) {
    throw Error(ErrorCode::kConfig,
                "intermediate width " + std::to_string(intermediate) +
                    " must exceed the class count " +
                    std::to_string(classes()));
  }
}

DcshModel DcshModel::Create(const ModelShape& shape, uint64_t seed) {
  if (shape.input_dim < 1 || shape.bits < 1 || shape.classes < 1) {
    throw Error(ErrorCode::kConfig, "model dimensions must be positive");
  }
  std::vector<int> widths = {shape.input_dim};
  widths.insert(widths.end(), shape.hidden.begin(), shape.hidden.end());
  widths.push_back(shape.bits);
  widths.push_back(shape.ResolvedIntermediate());
  widths.push_back(shape.classes);

  std::mt19937_64 rng(seed);
  std::vector<AffineLayer> layers;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    if (fan_out < 1) throw Error(ErrorCode::kConfig, "layer width must be >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    AffineLayer layer;
    layer.weight.resize(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) layer.weight(i, j) = dist(rng);
    }
    layer.bias = RowVector::Zero(fan_out);
    layers.push_back(std::move(layer));
  }
  return DcshModel(std::move(layers));
}

namespace {

Matrix Sigmoid(const Matrix& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

}  // namespace

ForwardResult Forward(const DcshModel& model, const Matrix& batch) {
  if (batch.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimension,
                "Forward: batch has " + std::to_string(batch.cols()) +
                    " columns, model expects " +
                    std::to_string(model.input_dim()));
  }
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.model_version = model.version();
  const int n = model.num_layers();
  cache.inputs.reserve(n);
  cache.pre_act.reserve(n);
  cache.outputs.reserve(n);

  Matrix current = batch;
  for (int l = 0; l < n; ++l) {
    const AffineLayer& layer = model.layers()[l];
    Matrix z = current * layer.weight;
    z.rowwise() += layer.bias;
    Matrix a = model.IsSigmoid(l) ? Sigmoid(z) : Matrix(z.cwiseMax(0.0));
    cache.inputs.push_back(std::move(current));
    cache.pre_act.push_back(std::move(z));
    current = a;
    cache.outputs.push_back(std::move(a));
  }
  result.xh = cache.outputs[model.hash_layer()];
  result.xc = cache.outputs.back();
  return result;
}

Matrix ForwardHashes(const DcshModel& model, const Matrix& features,
                     int chunk) {
  if (features.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimension,
                "ForwardHashes: features have " +
                    std::to_string(features.cols()) +
                    " columns, model expects " +
                    std::to_string(model.input_dim()));
  }
  Matrix out(features.rows(), model.bits());
  for (Eigen::Index start = 0; start < features.rows(); start += chunk) {
    const Eigen::Index len = std::min<Eigen::Index>(chunk, features.rows() - start);
    Matrix current = features.middleRows(start, len);
    for (int l = 0; l <= model.hash_layer(); ++l) {
      const AffineLayer& layer = model.layers()[l];
      Matrix z = current * layer.weight;
      z.rowwise() += layer.bias;
      current = model.IsSigmoid(l) ? Sigmoid(z) : Matrix(z.cwiseMax(0.0));
    }
    out.middleRows(start, len) = current;
  }
  return out;
}

Gradients Backward(const DcshModel& model, const ForwardCache& cache,
                   const Matrix& grad_xh, const Matrix& grad_xc) {
  const int n = model.num_layers();
  if (cache.model_version != model.version() ||
      static_cast<int>(cache.outputs.size()) != n) {
    throw Error(ErrorCode::kState,
                "Backward: forward cache is stale for this model");
  }
  const Matrix& xh = cache.outputs[model.hash_layer()];
  const Matrix& xc = cache.outputs.back();
  if (grad_xh.rows() != xh.rows() || grad_xh.cols() != xh.cols() ||
      grad_xc.rows() != xc.rows() || grad_xc.cols() != xc.cols()) {
    throw Error(ErrorCode::kDimension,
                "Backward: incoming gradients do not match forward outputs");
  }

  Gradients grads(n);
  Matrix upstream = grad_xc;  // ∂L/∂(output of layer l)
  for (int l = n - 1; l >= 0; --l) {
    if (l == model.hash_layer()) upstream += grad_xh;
    const Matrix& out = cache.outputs[l];
    Matrix dz;
    if (model.IsSigmoid(l)) {
      dz = (upstream.array() * out.array() * (1.0 - out.array())).matrix();
    } else {
      dz = (upstream.array() * (cache.pre_act[l].array() > 0.0).cast<double>())
               .matrix();
    }
    grads[l].weight = cache.inputs[l].transpose() * dz;
    grads[l].bias = dz.colwise().sum();
    if (l > 0) upstream = dz * model.layers()[l].weight.transpose();
  }
  return grads;
}

void CheckGradientsFinite(const Gradients& grads) {
  for (size_t l = 0; l < grads.size(); ++l) {
    if (!grads[l].weight.allFinite() || !grads[l].bias.allFinite()) {
      throw Error(ErrorCode::kNumeric, "non-finite gradient in layer " +
                                           std::to_string(l));
    }
  }
}

void SgdStep(DcshModel& model, const Gradients& grads, double lr) {
  if (grads.size() != model.layers().size()) {
    throw Error(ErrorCode::kDimension, "SgdStep: gradient layer count");
  }
  CheckGradientsFinite(grads);
  auto& layers = model.mutable_layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    layers[l].weight -= lr * grads[l].weight;
    layers[l].bias -= lr * grads[l].bias;
  }
}

void Sgd::Step(DcshModel& model, const Gradients& grads, double lr) {
  if (momentum_ == 0.0) {
    SgdStep(model, grads, lr);
    return;
  }
  CheckGradientsFinite(grads);
  if (velocity_.empty()) {
    velocity_ = grads;
  } else {
    for (size_t l = 0; l < grads.size(); ++l) {
      velocity_[l].weight = momentum_ * velocity_[l].weight + grads[l].weight;
      velocity_[l].bias = momentum_ * velocity_[l].bias + grads[l].bias;
    }
  }
  SgdStep(model, velocity_, lr);
}

std::vector<Codeword> Binarize(const Matrix& xh) {
  std::vector<Codeword> codes;
  codes.reserve(xh.rows());
  for (Eigen::Index i = 0; i < xh.rows(); ++i) {
    Codeword code(static_cast<int>(xh.cols()));
    for (Eigen::Index j = 0; j < xh.cols(); ++j) {
      code.set(static_cast<int>(j), xh(i, j) >= 0.5);
    }
    codes.push_back(std::move(code));
  }
  return codes;
}

}  // namespace dcsh
