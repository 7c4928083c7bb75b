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
#include "dcsh/synthetic.h"

#include <algorithm>
#include <random>
#include <string>

#include "dcsh/error.h"

namespace dcsh {

namespace {

// Takes `count` indices round-robin across the per-class queues.
std::vector<int> TakeStratified(std::vector<std::vector<int>>& queues,
                                int count) {
  std::vector<int> taken;
  while (static_cast<int>(taken.size()) < count) {
    bool progressed = false;
    for (auto& q : queues) {
      if (static_cast<int>(taken.size()) == count) break;
      if (!q.empty()) {
        taken.push_back(q.back());
        q.pop_back();
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return taken;
}

}  // namespace

Dataset GenSynthetic(const SyntheticParams& p) {
  if (p.n < 1 || p.classes < 1 || p.dim < p.classes) {
    throw Error(ErrorCode::kConfig,
                "GenSynthetic: need n >= 1, C >= 1 and D >= C");
  }
  if (!(p.multilabel_p >= 0.0 && p.multilabel_p < 1.0)) {
    throw Error(ErrorCode::kConfig,
                "GenSynthetic: multilabel_p must lie in [0, 1)");
  }
  if (p.multilabel_p > 0.0 && p.classes < 2) {
    throw Error(ErrorCode::kConfig,
                "GenSynthetic: multi-label data needs at least 2 classes");
  }
  const int num_queries = p.num_queries < 0 ? p.n / 10 : p.num_queries;
  if (num_queries > p.n) {
    throw Error(ErrorCode::kConfig, "GenSynthetic: more queries than samples");
  }
  const int gallery_size = p.n - num_queries;
  const int num_train = p.num_train < 0 ? gallery_size : p.num_train;
  if (num_train > gallery_size) {
    throw Error(ErrorCode::kConfig,
                "GenSynthetic: train set larger than the gallery (" +
                    std::to_string(num_train) + " > " +
                    std::to_string(gallery_size) + ")");
  }

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix prototypes(p.classes, p.dim);
  for (int c = 0; c < p.classes; ++c) {
    for (int j = 0; j < p.dim; ++j) prototypes(c, j) = normal(rng);
    prototypes.row(c) *= p.separation / prototypes.row(c).norm();
  }

  Dataset ds;
  ds.num_classes = p.classes;
  ds.features.resize(p.n, p.dim);
  ds.labels.reserve(p.n);
  for (int i = 0; i < p.n; ++i) {
    const int primary = i % p.classes;
    std::vector<int> classes = {primary};
    if (p.multilabel_p > 0.0 && unit(rng) < p.multilabel_p) {
      std::uniform_int_distribution<int> other(0, p.classes - 2);
      int second = other(rng);
      if (second >= primary) ++second;
      classes.push_back(second);
    }
    RowVector x = RowVector::Zero(p.dim);
    for (int c : classes) x += prototypes.row(c);
    x /= static_cast<double>(classes.size());
    for (int j = 0; j < p.dim; ++j) x(j) += normal(rng);
    ds.features.row(i) = x;
    ds.labels.emplace_back(std::move(classes));
  }

  std::vector<std::vector<int>> queues(p.classes);
  for (int i = 0; i < p.n; ++i) queues[i % p.classes].push_back(i);
  for (auto& q : queues) std::shuffle(q.begin(), q.end(), rng);

  ds.splits.assign(p.n, kSplitGallery);
  for (int i : TakeStratified(queues, num_queries)) ds.splits[i] = kSplitQuery;
  for (int i : TakeStratified(queues, num_train)) {
    ds.splits[i] = kSplitGallery | kSplitTrain;
  }
  ds.Validate();
  return ds;
}

}  // namespace dcsh
