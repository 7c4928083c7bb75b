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
#include "dcsh/numerics.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dcsh/error.h"

namespace dcsh {

void CheckFinite(const Matrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        throw Error(ErrorCode::kNumeric,
                    std::string(what) + ": non-finite entry at (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

Matrix CenterColumns(const Matrix& x) {
  if (x.rows() < 2) {
    throw Error(ErrorCode::kDimension,
                "CenterColumns: need at least 2 rows, got " +
                    std::to_string(x.rows()));
  }
  const RowVector mean = x.colwise().mean();
  return x.rowwise() - mean;
}

Matrix Covariance(const Matrix& xc, const Matrix& yc, double reg,
                  bool same_view) {
  if (xc.rows() != yc.rows()) {
    throw Error(ErrorCode::kDimension,
                "Covariance: row counts differ (" + std::to_string(xc.rows()) +
                    " vs " + std::to_string(yc.rows()) + ")");
  }
  if (xc.rows() < 2) {
    throw Error(ErrorCode::kDimension, "Covariance: need at least 2 rows");
  }
  Matrix cov = xc.transpose() * yc / static_cast<double>(xc.rows() - 1);
  if (same_view) {
    if (cov.rows() != cov.cols()) {
      throw Error(ErrorCode::kDimension,
                  "Covariance: same-view operands must have equal width");
    }
    cov.diagonal().array() += reg;
  }
  return cov;
}

Matrix AutoCovariance(const Matrix& xc, double reg) {
  return Covariance(xc, xc, reg, /*same_view=*/true);
}

namespace {

void CheckSymmetric(const Matrix& s, const char* what) {
  if (s.rows() != s.cols()) {
    throw Error(ErrorCode::kShape, std::string(what) + ": matrix is " +
                                       std::to_string(s.rows()) + "x" +
                                       std::to_string(s.cols()) +
                                       ", expected square");
  }
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw Error(ErrorCode::kShape, std::string(what) +
                                       ": matrix not symmetric (max |S-Sᵀ| = " +
                                       std::to_string(asym) + ")");
  }
}

}  // namespace

SymmetricEigen EigenSym(const Matrix& s) {
  CheckSymmetric(s, "EigenSym");
  // Only the lower triangle is read; symmetrize so both halves agree.
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumeric, "EigenSym: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix InvSqrtSym(const Matrix& s, double clamp) {
  if (!(clamp > 0.0)) {
    throw Error(ErrorCode::kConfig, "InvSqrtSym: clamp must be positive");
  }
  const SymmetricEigen eig = EigenSym(s);
  const Vector scale =
      eig.values.array().max(clamp).rsqrt().matrix();
  Matrix out = eig.vectors * scale.asDiagonal() * eig.vectors.transpose();
  // Exact symmetry, not just to rounding.
  out = 0.5 * (out + out.transpose()).eval();
  CheckFinite(out, "InvSqrtSym");
  return out;
}

Svd ThinSvd(const Matrix& a) {
  CheckFinite(a, "ThinSvd input");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix FdGradient(const std::function<double(const Matrix&)>& f,
                  const Matrix& x, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kConfig, "FdGradient: step must be positive");
  }
  Matrix grad(x.rows(), x.cols());
  Matrix probe = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + h;
      const double plus = f(probe);
      probe(i, j) = saved - h;
      const double minus = f(probe);
      probe(i, j) = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw Error(ErrorCode::kNumeric,
                    "FdGradient: non-finite evaluation at entry (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      grad(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

double RelativeError(const Matrix& a, const Matrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimension, "RelativeError: shape mismatch");
  }
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace dcsh
