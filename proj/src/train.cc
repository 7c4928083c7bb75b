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
#include "dcsh/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dcsh/error.h"

namespace dcsh {

void TrainConfig::Validate(int bits, int classes) const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kConfig, msg);
  };
  if (batch_size <= bits) {
    fail("batch size M=" + std::to_string(batch_size) +
         " must exceed the bit count B=" + std::to_string(bits));
  }
  if (batch_size <= classes) {
    fail("batch size M=" + std::to_string(batch_size) +
         " must exceed the class count C=" + std::to_string(classes));
  }
  if (!(lr > 0.0)) fail("initial learning rate must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
    fail("learning rate decay must lie in (0, 1]");
  }
  if (decay_every < 1) fail("decay interval must be >= 1 epoch");
  if (epochs < 0) fail("epoch count must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) fail("momentum must lie in [0, 1)");
  if (reg < 0.0) fail("covariance regularizer must be >= 0");
  if (!(clamp > 0.0)) fail("eigenvalue clamp must be positive");
  if (alpha.has_value() && !(*alpha >= 0.0 && std::isfinite(*alpha))) {
    fail("alpha must be finite and >= 0");
  }
}

double ResolveAlpha(const TrainConfig& config, int bits, int classes) {
  return config.alpha.has_value() ? *config.alpha
                                  : Alpha(bits, classes, config.alpha_mode);
}

double LossLowerBound(const TrainConfig& config, int bits, int classes) {
  const bool defaults = !config.alpha.has_value() && config.hash_k == 0 &&
                        config.class_k == 0 &&
                        config.alpha_mode == AlphaMode::kEmphasized;
  if (defaults) return DcshLowerBound(bits, classes);
  const int hash_k =
      config.hash_k > 0 ? config.hash_k : std::min(bits, classes) - 1;
  const int class_k = config.class_k > 0 ? config.class_k : classes - 1;
  return -hash_k - ResolveAlpha(config, bits, classes) * class_k;
}

double LearningRateAt(const TrainConfig& config, int epoch) {
  return config.lr * std::pow(config.lr_decay, epoch / config.decay_every);
}

Matrix BuildHashTargets(const std::vector<LabelSet>& labels,
                        const std::vector<int64_t>& ids,
                        const HashCenterSet& centers, uint64_t seed) {
  Matrix out(static_cast<Eigen::Index>(labels.size()), centers.bits);
  for (size_t n = 0; n < labels.size(); ++n) {
    const Codeword target = AssignTarget(labels[n], centers, seed,
                                         static_cast<uint64_t>(ids[n]));
    for (int j = 0; j < centers.bits; ++j) {
      out(static_cast<Eigen::Index>(n), j) = target.get(j) ? 1.0 : 0.0;
    }
  }
  return out;
}

Matrix MultiHot(const std::vector<LabelSet>& labels, int classes) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (size_t n = 0; n < labels.size(); ++n) {
    for (int c : labels[n].classes()) {
      if (c >= classes) {
        throw Error(ErrorCode::kLabelRange,
                    "MultiHot: class " + std::to_string(c) + " >= C=" +
                        std::to_string(classes));
      }
      out(static_cast<Eigen::Index>(n), c) = 1.0;
    }
  }
  return out;
}

std::vector<double> TrainHistory::TrainLosses() const {
  std::vector<double> out;
  for (const EpochStats& e : epochs) out.push_back(e.train_loss);
  return out;
}

std::vector<double> TrainHistory::TestLosses() const {
  std::vector<double> out;
  for (const EpochStats& e : epochs) out.push_back(e.test_loss);
  return out;
}

namespace {

struct Batch {
  Matrix features;
  std::vector<LabelSet> labels;
  std::vector<int64_t> ids;
};

Batch Gather(const LabeledSamples& samples, const std::vector<int>& order,
             size_t start, int size) {
  Batch b;
  b.features.resize(size, samples.features.cols());
  b.labels.reserve(size);
  b.ids.reserve(size);
  for (int r = 0; r < size; ++r) {
    const int src = order[start + r];
    b.features.row(r) = samples.features.row(src);
    b.labels.push_back(samples.labels[src]);
    b.ids.push_back(samples.ids[src]);
  }
  return b;
}

DcshLossOptions LossOptions(const TrainConfig& config) {
  DcshLossOptions opt;
  opt.reg = config.reg;
  opt.clamp = config.clamp;
  opt.hash_k = config.hash_k;
  opt.class_k = config.class_k;
  return opt;
}

Error AtCoordinates(const Error& e, int epoch, int batch) {
  return Error(e.code(), "epoch " + std::to_string(epoch) + " batch " +
                             std::to_string(batch) + ": " + e.what());
}

}  // namespace

double EvaluateLoss(const DcshModel& model, const LabeledSamples& samples,
                    const HashCenterSet& centers, const TrainConfig& config) {
  const int m = config.batch_size;
  const int batches = samples.size() / m;
  if (batches == 0) return std::numeric_limits<double>::quiet_NaN();
  const double alpha = ResolveAlpha(config, model.bits(), model.classes());
  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  for (int b = 0; b < batches; ++b) {
    const Batch batch = Gather(samples, order, static_cast<size_t>(b) * m, m);
    const ForwardResult fwd = Forward(model, batch.features);
    const Matrix yh =
        BuildHashTargets(batch.labels, batch.ids, centers, config.target_seed);
    const Matrix yc = MultiHot(batch.labels, model.classes());
    total += DcshLoss(fwd.xh, yh, fwd.xc, yc, alpha, LossOptions(config)).loss;
  }
  return total / batches;
}

TrainHistory Train(DcshModel& model, const TrainConfig& config,
                   const LabeledSamples& train, const LabeledSamples* test,
                   HashCenterSet initial_centers,
                   const std::function<void(const EpochStats&)>& on_epoch) {
  const int bits = model.bits();
  const int classes = model.classes();
  config.Validate(bits, classes);
  initial_centers.Validate();
  if (initial_centers.bits != bits || initial_centers.classes() != classes) {
    throw Error(ErrorCode::kDimension,
                "Train: centers are B=" + std::to_string(initial_centers.bits) +
                    " C=" + std::to_string(initial_centers.classes()) +
                    ", model is B=" + std::to_string(bits) +
                    " C=" + std::to_string(classes));
  }
  const int m = config.batch_size;
  const int batches = train.size() / m;
  if (batches == 0) {
    throw Error(ErrorCode::kConfig,
                "Train: " + std::to_string(train.size()) +
                    " training samples do not fill one batch of " +
                    std::to_string(m));
  }
  const double alpha = ResolveAlpha(config, bits, classes);
  const DcshLossOptions loss_options = LossOptions(config);

  TrainHistory history;
  history.centers.push_back(std::move(initial_centers));
  std::mt19937_64 shuffle_rng(config.shuffle_seed);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Sgd optimizer(config.momentum);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const HashCenterSet& centers = history.centers.back();
    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = LearningRateAt(config, epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    for (int b = 0; b < batches; ++b) {
      try {
        const Batch batch = Gather(train, order, static_cast<size_t>(b) * m, m);
        const ForwardResult fwd = Forward(model, batch.features);
        const Matrix yh = BuildHashTargets(batch.labels, batch.ids, centers,
                                           config.target_seed);
        const Matrix yc = MultiHot(batch.labels, classes);
        const DcshLossResult loss =
            DcshLoss(fwd.xh, yh, fwd.xc, yc, alpha, loss_options);
        if (!std::isfinite(loss.loss)) {
          throw Error(ErrorCode::kNumeric, "non-finite loss");
        }
        const Gradients grads =
            Backward(model, fwd.cache, loss.grad_xh, loss.grad_xc);
        optimizer.Step(model, grads, stats.lr);
        stats.train_loss += loss.loss;
        stats.hash_loss += loss.hash_loss;
        stats.class_loss += loss.class_loss;
      } catch (const Error& e) {
        throw AtCoordinates(e, epoch, b);
      }
    }
    stats.train_loss /= batches;
    stats.hash_loss /= batches;
    stats.class_loss /= batches;
    stats.test_loss = test != nullptr
                          ? EvaluateLoss(model, *test, centers, config)
                          : std::numeric_limits<double>::quiet_NaN();

    const Matrix hashes = ForwardHashes(model, train.features);
    try {
      history.centers.push_back(UpdateCenters(
          hashes, train.labels, classes, centers.epoch,
          CenterUpdateOptions{config.normalize_center_mean}));
    } catch (const Error& e) {
      throw Error(e.code(), "epoch " + std::to_string(epoch) +
                                " center update: " + e.what());
    }
    history.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

}  // namespace dcsh
