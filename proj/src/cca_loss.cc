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
#include "dcsh/cca_loss.h"

#include <algorithm>
#include <string>

#include "dcsh/error.h"

namespace dcsh {

int KMax(int dx, int dy, int m) {
  if (m < 2) {
    throw Error(ErrorCode::kConfig,
                "KMax: batch size must be at least 2, got " +
                    std::to_string(m));
  }
  const int k = std::min(std::min(dx, m), std::min(dy, m)) - 1;
  if (k < 1) {
    throw Error(ErrorCode::kConfig, "views too small for CCA (d_x=" +
                                        std::to_string(dx) + ", d_y=" +
                                        std::to_string(dy) + ", M=" +
                                        std::to_string(m) + ")");
  }
  return k;
}

DccfResult DccfLoss(const CcaViews& views, int k) {
  const Matrix& x = views.x;
  const Matrix& y = views.y;
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::kDimension,
                "DccfLoss: views have " + std::to_string(x.rows()) + " and " +
                    std::to_string(y.rows()) + " rows");
  }
  const int m = static_cast<int>(x.rows());
  const int dx = static_cast<int>(x.cols());
  const int dy = static_cast<int>(y.cols());
  if (m <= dx || m <= dy) {
    throw Error(ErrorCode::kConfig,
                "DccfLoss: batch size M=" + std::to_string(m) +
                    " must exceed both view widths (" + std::to_string(dx) +
                    ", " + std::to_string(dy) + ")");
  }
  const int k_max = KMax(dx, dy, m);
  if (k < 1 || k > k_max) {
    throw Error(ErrorCode::kConfig, "DccfLoss: k=" + std::to_string(k) +
                                        " outside [1, " +
                                        std::to_string(k_max) + "]");
  }
  CheckFinite(x, "DccfLoss x view");
  CheckFinite(y, "DccfLoss y view");

  DccfCache cache;
  cache.xc = CenterColumns(x);
  cache.yc = CenterColumns(y);
  cache.sxx_inv_sqrt = InvSqrtSym(AutoCovariance(cache.xc, views.reg),
                                  views.clamp);
  cache.syy_inv_sqrt = InvSqrtSym(AutoCovariance(cache.yc, views.reg),
                                  views.clamp);
  const Matrix sxy = Covariance(cache.xc, cache.yc, 0.0, /*same_view=*/false);
  const Matrix kmat = cache.sxx_inv_sqrt * sxy * cache.syy_inv_sqrt;
  const Svd svd = ThinSvd(kmat);

  cache.u = svd.u.leftCols(k);
  cache.v = svd.v.leftCols(k);
  cache.sigma = svd.sigma.head(k);

  DccfResult result;
  result.k = k;
  result.correlations = cache.sigma;
  result.loss = -cache.sigma.sum();
  result.cache = std::move(cache);
  return result;
}

Matrix DccfGrad(const DccfResult& result) {
  if (!result.cache.has_value()) {
    throw Error(ErrorCode::kState, "DccfGrad: result carries no cache");
  }
  const DccfCache& c = *result.cache;
  const double denom = static_cast<double>(c.xc.rows() - 1);

  // d(Σσ)/dΣ_XY = Σ_XX^(-1/2) U Vᵀ Σ_YY^(-1/2)
  // d(Σσ)/dΣ_XX = -½ Σ_XX^(-1/2) U diag(σ) Uᵀ Σ_XX^(-1/2)
  const Matrix a = c.sxx_inv_sqrt * c.u;  // canonical directions of x
  const Matrix b = c.syy_inv_sqrt * c.v;  // canonical directions of y
  const Matrix d_sxy = a * b.transpose();
  const Matrix d_sxx = -0.5 * a * c.sigma.asDiagonal() * a.transpose();

  Matrix grad_corr = (2.0 * c.xc * d_sxx + c.yc * d_sxy.transpose()) / denom;
  // Back through the mean subtraction.
  grad_corr = CenterColumns(grad_corr);
  Matrix grad = -grad_corr;
  CheckFinite(grad, "DccfGrad");
  return grad;
}

double Alpha(int bits, int classes, AlphaMode mode) {
  if (bits < 2 || classes < 2) {
    throw Error(ErrorCode::kConfig, "Alpha: need B >= 2 and C >= 2");
  }
  const double num = mode == AlphaMode::kEqualized
                         ? static_cast<double>(std::min(bits, classes) - 1)
                         : static_cast<double>(bits - 1);
  return num / static_cast<double>(classes - 1);
}

int DcshLowerBound(int bits, int classes) {
  if (bits < 2 || classes < 2) {
    throw Error(ErrorCode::kConfig, "DcshLowerBound: need B >= 2 and C >= 2");
  }
  return -(std::min(bits, classes) - 1) - (bits - 1);
}

DcshLossResult DcshLoss(const Matrix& xh, const Matrix& yh, const Matrix& xc,
                        const Matrix& yc, double alpha,
                        const DcshLossOptions& options) {
  if (xh.rows() != yh.rows() || xh.cols() != yh.cols()) {
    throw Error(ErrorCode::kDimension,
                "DcshLoss: hash outputs and targets differ in shape");
  }
  if (xc.rows() != yc.rows() || xc.cols() != yc.cols()) {
    throw Error(ErrorCode::kDimension,
                "DcshLoss: class scores and labels differ in shape");
  }
  if (xh.rows() != xc.rows()) {
    throw Error(ErrorCode::kDimension,
                "DcshLoss: hash and class views differ in batch size");
  }
  const int m = static_cast<int>(xh.rows());
  const int bits = static_cast<int>(xh.cols());
  const int classes = static_cast<int>(xc.cols());
  if (m <= bits) {
    throw Error(ErrorCode::kConfig, "batch too small: need M > B (M=" +
                                        std::to_string(m) + ", B=" +
                                        std::to_string(bits) + ")");
  }
  if (m <= classes) {
    throw Error(ErrorCode::kConfig, "batch too small: need M > C (M=" +
                                        std::to_string(m) + ", C=" +
                                        std::to_string(classes) + ")");
  }
  const int hash_k = options.hash_k > 0
                         ? options.hash_k
                         : KMax(bits, std::min(bits, classes), m);
  const int class_k =
      options.class_k > 0 ? options.class_k : KMax(classes, classes, m);

  const DccfResult hash =
      DccfLoss({xh, yh, options.reg, options.clamp}, hash_k);
  const DccfResult cls =
      DccfLoss({xc, yc, options.reg, options.clamp}, class_k);

  DcshLossResult out;
  out.hash_loss = hash.loss;
  out.class_loss = cls.loss;
  out.loss = hash.loss + alpha * cls.loss;
  out.grad_xh = DccfGrad(hash);
  out.grad_xc = alpha * DccfGrad(cls);
  return out;
}

}  // namespace dcsh
