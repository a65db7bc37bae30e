// mvsv/efr.h

// Copyright 2026  The mvsv Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MVSV_EFR_H_
#define MVSV_EFR_H_

#include <span>
#include <vector>

#include "mvsv/types.h"

namespace mvsv {

struct LengthNormStage {
  Vector mean;      // w-bar of the stage's input
  Matrix whitener;  // V^{-1/2}, symmetric
};

/// Iterated whitening plus projection onto the unit sphere.
class LengthNormalizer {
 public:
  LengthNormalizer() = default;
  explicit LengthNormalizer(std::vector<LengthNormStage> stages)
      : stages_(std::move(stages)) {}

  const std::vector<LengthNormStage> &stages() const { return stages_; }
  int Dim() const { return stages_.empty() ? 0 : static_cast<int>(stages_[0].mean.size()); }

  /// v <- W (v - mean) / ||W (v - mean)|| for each stage in turn.
  /// Throws kZeroVector when v - mean vanishes at some stage.
  Vector Apply(const Vector &v) const;
  Matrix ApplyRows(const Matrix &rows) const;

 private:
  std::vector<LengthNormStage> stages_;
};

/// Symmetric inverse square root with eigenvalues floored at
/// 1e-10 * max eigenvalue.
Matrix InverseSqrtSym(const Matrix &cov);

/// ML (1/n) covariance of the rows about their mean.
Matrix Covariance(const Matrix &rows, Vector *mean);

/**
   Fits `iterations` stages, stage k on the output of stages 1..k-1.  When
   `normalized` is given it receives the training rows after all stages,
   computed exactly as ApplyRows would.
*/
LengthNormalizer FitLengthNormalizer(const Matrix &rows, int iterations,
                                     Matrix *normalized = nullptr);

struct EfrModel {
  LengthNormalizer normalizer;
  Matrix omega_inv;
  /// Set when the within-class covariance needed a ridge to be inverted.
  bool omega_regularized = false;

  Vector Normalize(const Vector &v) const { return normalizer.Apply(v); }
};

/// Length-normalization stages plus the inverse of the within-speaker
/// covariance of the normalized training vectors (pooled over sessions).
EfrModel FitEfr(const Matrix &rows, std::span<const int> labels,
                int iterations = 2);

/// -(a - b)^T Omega^{-1} (a - b) on vectors already normalized by `model`.
double MahalanobisScore(const EfrModel &model, const Vector &a, const Vector &b);

/// Same normalizer, returned with the normalized training rows.
struct PldaPreprocessed {
  LengthNormalizer normalizer;
  Matrix normalized;
};

/// Two whiten-and-length-normalize stages, fitted and applied.
PldaPreprocessed PldaPreprocess(const Matrix &rows, int iterations = 2);

}  // namespace mvsv

#endif  // MVSV_EFR_H_
