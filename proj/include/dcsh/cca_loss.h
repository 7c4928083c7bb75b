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
#ifndef DCSH_CCA_LOSS_H_
#define DCSH_CCA_LOSS_H_

#include <optional>

#include "dcsh/numerics.h"

namespace dcsh {

// Two data views of one batch. `x` is the trainable view, `y` the target.
struct CcaViews {
  Matrix x;  // M × d_x
  Matrix y;  // M × d_y
  double reg = kDefaultCovarianceReg;
  double clamp = kDefaultEigenClamp;
};

// Factors retained from the forward computation; everything DccfGrad needs.
struct DccfCache {
  Matrix xc;             // centered x
  Matrix yc;             // centered y
  Matrix sxx_inv_sqrt;   // Σ_XX^(-1/2)
  Matrix syy_inv_sqrt;   // Σ_YY^(-1/2)
  Matrix u;              // left singular vectors of K (top k columns)
  Matrix v;              // right singular vectors of K (top k columns)
  Vector sigma;          // top k singular values
};

struct DccfResult {
  double loss = 0.0;           // -Σ of the top k singular values of K
  Vector correlations;         // those k values, non-increasing
  int k = 0;
  std::optional<DccfCache> cache;
};

// min(min(d_x, M), min(d_y, M)) - 1: the number of non-trivial canonical
// correlations once both views are mean-centered. Throws kConfig when the
// result is below one.
int KMax(int dx, int dy, int m);

// CCA correlation loss between the two views, summing the k largest
// canonical correlations. Rank deficiency is absorbed by `reg` and `clamp`.
DccfResult DccfLoss(const CcaViews& views, int k);

// ∂loss/∂x (M × d_x). y is treated as a constant.
Matrix DccfGrad(const DccfResult& result);

enum class AlphaMode { kEqualized, kEmphasized };

// Weight of the classification term relative to the hashing term.
//   kEqualized:  (min(B, C) - 1) / (C - 1)
//   kEmphasized: (B - 1) / (C - 1)
double Alpha(int bits, int classes, AlphaMode mode);

// Lower bound of the combined loss with the emphasized weight:
// -(min(B, C) - 1) - (B - 1).
int DcshLowerBound(int bits, int classes);

struct DcshLossOptions {
  double reg = kDefaultCovarianceReg;
  double clamp = kDefaultEigenClamp;
  // Zero selects KMax for each term.
  int hash_k = 0;
  int class_k = 0;
};

struct DcshLossResult {
  double loss = 0.0;
  double hash_loss = 0.0;
  double class_loss = 0.0;
  Matrix grad_xh;  // M × B
  Matrix grad_xc;  // M × C, already multiplied by alpha
};

// L_hash(x_h, y_h) + alpha · L_class(x_c, y_c).
//
// The hashing term sums min(B, C) - 1 correlations: the target view holds at
// most C distinct center rows, so its rank is bounded by min(B, C). The
// classification term sums C - 1. Requires M > B and M > C.
DcshLossResult DcshLoss(const Matrix& xh, const Matrix& yh, const Matrix& xc,
                        const Matrix& yc, double alpha,
                        const DcshLossOptions& options = {});

}  // namespace dcsh

#endif  // DCSH_CCA_LOSS_H_
