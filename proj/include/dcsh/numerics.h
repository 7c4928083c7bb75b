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

#ifndef DCSH_NUMERICS_H_
#define DCSH_NUMERICS_H_

#include <functional>

#include <Eigen/Core>

namespace dcsh {

// Row = sample, column = dimension. Row-major so that a batch row is
// contiguous, matching the on-disk feature layout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kDefaultEigenClamp = 1e-8;
inline constexpr double kDefaultCovarianceReg = 1e-4;

// Throws kNumeric naming `what` and the first offending (row, col).
void CheckFinite(const Matrix& m, const char* what);

// Subtracts the column means. Requires at least two rows.
Matrix CenterColumns(const Matrix& x);

// Xcᵀ·Yc / (M-1). When `same_view` is set, reg·I is added to the diagonal
// (autocovariance of one view); Xc and Yc must then be square-compatible.
Matrix Covariance(const Matrix& xc, const Matrix& yc, double reg,
                  bool same_view);

// Autocovariance shorthand: Covariance(xc, xc, reg, true).
Matrix AutoCovariance(const Matrix& xc, double reg);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values(i)
};

// Deterministic eigendecomposition of a symmetric matrix.
SymmetricEigen EigenSym(const Matrix& s);

// Q·diag(max(λ, clamp)^(-1/2))·Qᵀ for symmetric S.
Matrix InvSqrtSym(const Matrix& s, double clamp = kDefaultEigenClamp);

struct Svd {
  Matrix u;      // m × r, orthonormal columns
  Vector sigma;  // r = min(m, n), non-increasing, non-negative
  Matrix v;      // n × r, orthonormal columns
};

Svd ThinSvd(const Matrix& a);

// Central differences of `f` for every entry of `x`. Throws kNumeric with
// the entry index when an evaluation is not finite.
Matrix FdGradient(const std::function<double(const Matrix&)>& f,
                  const Matrix& x, double h);

// ‖a − b‖_F / max(‖b‖_F, floor). The measure used for every gradient check.
double RelativeError(const Matrix& a, const Matrix& b, double floor = 1e-12);

}  // namespace dcsh

#endif  // DCSH_NUMERICS_H_
