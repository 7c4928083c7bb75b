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
#ifndef DCSH_TRAIN_H_
#define DCSH_TRAIN_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dcsh/cca_loss.h"
#include "dcsh/dataset.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"

namespace dcsh {

struct TrainConfig {
  int batch_size = 200;
  int epochs = 50;
  double lr = 3e-4;
  double lr_decay = 0.7;
  int decay_every = 10;
  AlphaMode alpha_mode = AlphaMode::kEmphasized;
  // When set, used instead of the value implied by alpha_mode.
  std::optional<double> alpha;
  double momentum = 0.0;
  uint64_t shuffle_seed = 1;
  // Keys the tie-break coin of multi-label majority-vote targets.
  uint64_t target_seed = 1;
  double reg = kDefaultCovarianceReg;
  double clamp = kDefaultEigenClamp;
  int hash_k = 0;   // 0 = KMax
  int class_k = 0;  // 0 = KMax
  bool normalize_center_mean = false;

  // Throws kConfig naming the violated constraint.
  void Validate(int bits, int classes) const;
};

// Weight of the classification term for a model with `bits` and `classes`.
double ResolveAlpha(const TrainConfig& config, int bits, int classes);

// Smallest attainable loss under `config`: each term is bounded by minus its
// k. Equals DcshLowerBound for the default emphasized setup.
double LossLowerBound(const TrainConfig& config, int bits, int classes);

// lr · decay^floor(epoch / decay_every), epoch counted from 0.
double LearningRateAt(const TrainConfig& config, int epoch);

// Row n is the training target of sample ids[n] under `centers`.
Matrix BuildHashTargets(const std::vector<LabelSet>& labels,
                        const std::vector<int64_t>& ids,
                        const HashCenterSet& centers, uint64_t seed);

// Group indicator matrix: row n has a 1 in every column of labels[n].
Matrix MultiHot(const std::vector<LabelSet>& labels, int classes);

struct EpochStats {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;  // mean over the epoch's batches
  double hash_loss = 0.0;
  double class_loss = 0.0;
  double test_loss = 0.0;   // NaN without a usable test split
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  // centers[0] is the initial set; centers[e + 1] follows epoch e.
  std::vector<HashCenterSet> centers;

  std::vector<double> TrainLosses() const;
  std::vector<double> TestLosses() const;
};

// Mean DCSH loss over the full batches of `samples` in index order. NaN when
// there is not a single full batch.
double EvaluateLoss(const DcshModel& model, const LabeledSamples& samples,
                    const HashCenterSet& centers, const TrainConfig& config);

// Mini-batch SGD on the DCSH loss with a center update after every epoch.
// Trailing partial batches are dropped. Numeric failures are rethrown as
// kNumeric with the epoch and batch index in the message.
TrainHistory Train(DcshModel& model, const TrainConfig& config,
                   const LabeledSamples& train, const LabeledSamples* test,
                   HashCenterSet initial_centers,
                   const std::function<void(const EpochStats&)>& on_epoch = {});

}  // namespace dcsh

#endif  // DCSH_TRAIN_H_
