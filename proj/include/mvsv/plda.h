// mvsv/plda.h

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

#ifndef MVSV_PLDA_H_
#define MVSV_PLDA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mvsv/types.h"

namespace mvsv {

/**
   Generative model  w = mu + Phi y + Gamma z + eps  with y ~ N(0, I) shared
   by all sessions of a speaker, z ~ N(0, I) per session and
   eps ~ N(0, diag(lambda)).
*/
struct PldaModel {
  Vector mu;
  Matrix phi;     // N x q_s
  Matrix gamma;   // N x q_c
  Vector lambda;  // N, entries >= 1e-10

  int Dim() const { return static_cast<int>(mu.size()); }
  int SpeakerDim() const { return static_cast<int>(phi.cols()); }
  int ChannelDim() const { return static_cast<int>(gamma.cols()); }

  /// Phi Phi^T + Gamma Gamma^T + diag(lambda).
  Matrix TotalCovariance() const;
  /// Phi Phi^T.
  Matrix AcrossCovariance() const;
  /// Throws kDimensionError on inconsistent shapes.
  void Check() const;
};

/**
   Same-speaker versus different-speaker log-likelihood ratio.  With
   T = total covariance and C = across-class covariance, the joint inverse
   [[T, C], [C, T]]^{-1} = [[Ja, Jb], [Jb, Ja]] where
     Ja = ((T+C)^{-1} + (T-C)^{-1}) / 2,  Jb = ((T+C)^{-1} - (T-C)^{-1}) / 2,
   so that with d = w - mu
     LLR = 1/2 d1'Q d1 + 1/2 d2'Q d2 + d1'P d2 + k,
     Q = T^{-1} - Ja,  P = -Jb,  k = log|T| - 1/2 (log|T+C| + log|T-C|).
*/
class PldaScorer {
 public:
  PldaScorer() = default;
  explicit PldaScorer(const PldaModel &model);

  double Score(const Vector &w1, const Vector &w2) const;
  int Dim() const { return static_cast<int>(mu_.size()); }

 private:
  Vector mu_;
  Matrix q_;
  Matrix p_;
  double offset_ = 0.0;
};

struct PldaTrainOptions {
  int iters = 20;
  uint64_t seed = 0;
};

/// mu = data mean, lambda = per-dimension data variance, [Phi Gamma] = a
/// seeded random orthonormal N x (q_s + q_c) block scaled by the mean
/// per-dimension standard deviation.  When q_s + q_c > N the two blocks are
/// drawn independently.
PldaModel InitPlda(const Matrix &rows, int speaker_dim, int channel_dim,
                   uint64_t seed);

/// One EM iteration; mu is held fixed.  The posterior over the stacked
/// latents [y; z_1 .. z_n] of each speaker is computed exactly.
PldaModel PldaEmIteration(const PldaModel &model, const Matrix &rows,
                          std::span<const int> labels);

/// Exact marginal log-likelihood, latents integrated out per speaker.
double PldaLogLikelihood(const PldaModel &model, const Matrix &rows,
                         std::span<const int> labels);

/// InitPlda followed by opts.iters EM iterations.  The log-likelihood of
/// the initial model and after each iteration goes to loglike_trace.
PldaModel FitPlda(const Matrix &rows, std::span<const int> labels,
                  int speaker_dim, int channel_dim,
                  const PldaTrainOptions &opts = PldaTrainOptions(),
                  std::vector<double> *loglike_trace = nullptr);

}  // namespace mvsv

#endif  // MVSV_PLDA_H_
