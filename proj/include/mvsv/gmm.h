// mvsv/gmm.h

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

#ifndef MVSV_GMM_H_
#define MVSV_GMM_H_

#include <cstdint>
#include <vector>

#include "mvsv/types.h"

namespace mvsv {

/// Diagonal-covariance Gaussian mixture.  Means and variances are M x D.
class DiagonalGmm {
 public:
  DiagonalGmm() = default;
  /// Validates shapes, weights (sum to 1 within 1e-10) and variances (> 0).
  DiagonalGmm(Vector weights, Matrix means, Matrix variances);

  int NumComponents() const { return static_cast<int>(weights_.size()); }
  int Dim() const { return static_cast<int>(means_.cols()); }

  const Vector &weights() const { return weights_; }
  const Matrix &means() const { return means_; }
  const Matrix &variances() const { return variances_; }

  /// T x M matrix of log(w_s N(x_t; mu_s, var_s)).
  Matrix ComponentLogLikes(const Matrix &frames) const;

  /// Posterior over components for one frame, computed in the log domain.
  Vector Responsibilities(const Vector &frame) const;

  /// T x M posteriors.  If frame_loglikes is given it receives log p(x_t).
  Matrix Responsibilities(const Matrix &frames,
                          Vector *frame_loglikes = nullptr) const;

  double LogLikelihood(const Matrix &frames) const;

  /// Same mixture with replaced means (used for adapted models).
  DiagonalGmm WithMeans(Matrix means) const;

 private:
  void ComputeDerivedVars();

  Vector weights_;
  Matrix means_;
  Matrix variances_;
  // Derived: inverse variances and log(w_s) - 0.5 (D log 2pi + log|Sigma_s|).
  Matrix inv_vars_;
  Vector log_consts_;
};

struct GmmStats {
  Vector occupancy;     // M
  Matrix first_order;   // M x D, sum_t gamma_s(t) x_t
  int64_t frame_count = 0;
};

/// Zero-order and first-order statistics, summed in frame order.
GmmStats AccumulateStats(const DiagonalGmm &gmm, const Matrix &frames);

struct GmmTrainOptions {
  int max_em_iters = 20;
  double var_floor_fraction = 1e-3;
  uint64_t seed = 0;
};

/**
   Trains a UBM: k-means++ seeding (distances scaled by the global variance)
   followed by max_em_iters EM iterations.  Variances are floored at
   var_floor_fraction times the global per-dimension variance.
   If loglike_trace is non-null it receives the total log-likelihood of the
   initial model and after every iteration (max_em_iters + 1 entries).
*/
DiagonalGmm TrainUbm(const Matrix &frames, int num_components,
                     const GmmTrainOptions &opts,
                     std::vector<double> *loglike_trace = nullptr);

}  // namespace mvsv

#endif  // MVSV_GMM_H_
