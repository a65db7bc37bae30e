// mvsv/projections.h

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

#ifndef MVSV_PROJECTIONS_H_
#define MVSV_PROJECTIONS_H_

#include <map>
#include <span>
#include <vector>

#include "mvsv/types.h"

namespace mvsv {

/// Row indices per label, labels in ascending order.
std::map<int, std::vector<long>> GroupByLabel(std::span<const int> labels);

/// Per-dimension standardization.  std uses the n-1 sample variance.
struct MeanVarNorm {
  Vector mean;
  Vector std;
  /// Dimensions whose std fell below 1e-12; their std is set to 1.
  std::vector<int> clamped_dims;

  Vector Apply(const Vector &v) const;
  Matrix ApplyRows(const Matrix &rows) const;
};

/// Needs at least two rows.
MeanVarNorm FitMeanVar(const Matrix &rows);

struct PcaModel {
  Vector mean;
  Matrix basis;        // N x q, orthonormal columns, eigenvalue-descending
  Vector eigenvalues;  // all N eigenvalues of the sample covariance, descending

  Vector Project(const Vector &v) const;
  Matrix ProjectRows(const Matrix &rows) const;
};

/// Top-q eigenvectors of the n-1 sample covariance.  Each column is signed so
/// its largest-magnitude entry is positive.
PcaModel FitPca(const Matrix &rows, int q);

struct LdaModel {
  Vector mean;
  Matrix basis;        // N x q generalized eigenvectors, u^T B u = 1
  Vector eigenvalues;  // q leading generalized eigenvalues

  Vector Project(const Vector &v) const;
  Matrix ProjectRows(const Matrix &rows) const;
};

/**
   Fisher LDA.  With S_w and S_b the count-normalized within- and
   between-class scatters (class means weighted by class counts), solves
     S_b u = lambda (S_w + ridge * tr(S_w) / N * I) u
   and keeps the q leading eigenvectors.  When S_w is zero, tr(S_b) takes the
   place of tr(S_w).
*/
LdaModel FitLda(const Matrix &rows, std::span<const int> labels, int q,
                double ridge = 1e-6);

/// Intra-speaker subspace U with unit noise; P = I + U^T U.
class PpcaNapModel {
 public:
  PpcaNapModel() = default;
  explicit PpcaNapModel(Matrix u);

  const Matrix &u() const { return u_; }
  int Dim() const { return static_cast<int>(u_.rows()); }
  int Rank() const { return static_cast<int>(u_.cols()); }

  /// y = P^{-1} U^T o.
  Vector PointEstimate(const Vector &o) const;
  /// o - U y.
  Vector Project(const Vector &v) const;
  Matrix ProjectRows(const Matrix &rows) const;

 private:
  Matrix u_;
  Matrix estimator_;  // P^{-1} U^T
};

/// Gaussian log-likelihood of the rows under N(0, U U^T + I).
double PpcaLogLikelihood(const Matrix &u, const Matrix &rows);

/// Rows with their speaker mean removed; speakers with a single session are
/// dropped.  Throws kNoWithinSpeakerVariation if nothing remains.
Matrix CenterPerSpeaker(const Matrix &rows, std::span<const int> labels);

/**
   ML estimate of U by EM on speaker-centered rows, exactly `iters`
   iterations.  U starts from the top-q within-speaker principal directions
   scaled by the square roots of their eigenvalues.  The log-likelihood before
   the first and after each iteration goes to loglike_trace when given.
*/
PpcaNapModel FitPpcaNap(const Matrix &rows, std::span<const int> labels, int q,
                        int iters = 30,
                        std::vector<double> *loglike_trace = nullptr);

/// Symmetric eigendecomposition with eigenvalues in descending order; equal
/// eigenvalues keep ascending index order.
void SortedEigen(const Matrix &sym, Vector *values, Matrix *vectors);

/// Flips each column so its largest-magnitude entry is positive.
void NormalizeColumnSigns(Matrix *m);

}  // namespace mvsv

#endif  // MVSV_PROJECTIONS_H_
