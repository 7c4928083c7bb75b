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
#include "dcsh/gradcheck.h"

#include <algorithm>
#include <random>

#include "dcsh/cca_loss.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"
#include "dcsh/train.h"

namespace dcsh {

namespace {

Matrix RandomNormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

double CheckDccf(std::mt19937_64& rng, int& rows, int& cols, double step) {
  std::uniform_int_distribution<int> pick_m(12, 24);
  std::uniform_int_distribution<int> pick_d(2, 6);
  const int m = pick_m(rng);
  const int dx = pick_d(rng);
  const int dy = pick_d(rng);
  const Matrix x = RandomNormal(m, dx, rng);
  // Partially correlated target so the top correlations are well separated.
  const Matrix y =
      x * RandomNormal(dx, dy, rng) + 0.7 * RandomNormal(m, dy, rng);
  const int k = KMax(dx, dy, m);
  const double reg = kDefaultCovarianceReg;
  const Matrix analytic = DccfGrad(DccfLoss({x, y, reg}, k));
  const Matrix numeric = FdGradient(
      [&](const Matrix& probe) { return DccfLoss({probe, y, reg}, k).loss; },
      x, step);
  rows = m;
  cols = dx;
  return RelativeError(analytic, numeric);
}

double CheckBackward(std::mt19937_64& rng, uint64_t instance_seed,
                     double step) {
  constexpr int kSamples = 24;
  constexpr int kDim = 6;
  constexpr int kBits = 4;
  constexpr int kClasses = 3;
  ModelShape shape;
  shape.input_dim = kDim;
  shape.hidden = {8};
  shape.bits = kBits;
  shape.classes = kClasses;
  shape.intermediate = 8;
  DcshModel model = DcshModel::Create(shape, instance_seed);

  const Matrix batch = RandomNormal(kSamples, kDim, rng);
  std::uniform_int_distribution<int> pick_class(0, kClasses - 1);
  std::bernoulli_distribution second(0.3);
  std::vector<LabelSet> labels;
  std::vector<int64_t> ids;
  for (int i = 0; i < kSamples; ++i) {
    std::vector<int> cls = {i % kClasses};
    if (second(rng)) cls.push_back(pick_class(rng));
    labels.emplace_back(std::move(cls));
    ids.push_back(i);
  }
  const HashCenterSet centers = GenHadamardCenters(kBits, kClasses);
  const Matrix yh = BuildHashTargets(labels, ids, centers, instance_seed);
  const Matrix yc = MultiHot(labels, kClasses);
  const double alpha = Alpha(kBits, kClasses, AlphaMode::kEmphasized);

  auto loss_of = [&](const DcshModel& m) {
    const ForwardResult fwd = Forward(m, batch);
    return DcshLoss(fwd.xh, yh, fwd.xc, yc, alpha);
  };
  const ForwardResult fwd = Forward(model, batch);
  const DcshLossResult loss = DcshLoss(fwd.xh, yh, fwd.xc, yc, alpha);
  const Gradients grads = Backward(model, fwd.cache, loss.grad_xh, loss.grad_xc);

  double worst = 0.0;
  for (int l = 0; l < model.num_layers(); ++l) {
    const Matrix numeric_w = FdGradient(
        [&](const Matrix& w) {
          DcshModel probe = model;
          probe.mutable_layers()[l].weight = w;
          return loss_of(probe).loss;
        },
        model.layers()[l].weight, step);
    const Matrix numeric_b = FdGradient(
        [&](const Matrix& b) {
          DcshModel probe = model;
          probe.mutable_layers()[l].bias = b;
          return loss_of(probe).loss;
        },
        model.layers()[l].bias, step);
    worst = std::max(worst, RelativeError(grads[l].weight, numeric_w));
    worst = std::max(worst, RelativeError(grads[l].bias, numeric_b));
  }
  return worst;
}

}  // namespace

GradCheckReport RunGradientChecks(uint64_t seed, int instances, double step) {
  GradCheckReport report;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    GradCheckRow dccf;
    dccf.instance = i;
    dccf.what = "dccf";
    dccf.rel_error = CheckDccf(rng, dccf.rows, dccf.cols, step);
    report.max_dccf = std::max(report.max_dccf, dccf.rel_error);
    report.rows.push_back(dccf);

    GradCheckRow bwd;
    bwd.instance = i;
    bwd.what = "backward";
    bwd.rows = 24;
    bwd.cols = 6;
    bwd.rel_error = CheckBackward(rng, seed * 1000003u + i, step);
    report.max_backward = std::max(report.max_backward, bwd.rel_error);
    report.rows.push_back(bwd);
  }
  return report;
}

}  // namespace dcsh
