// mvsv/synthdata.h

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

#ifndef MVSV_SYNTHDATA_H_
#define MVSV_SYNTHDATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvsv/gmm.h"
#include "mvsv/pipeline.h"
#include "mvsv/plda.h"
#include "mvsv/random.h"
#include "mvsv/types.h"

namespace mvsv {

struct GmmCorpusSpec {
  uint64_t seed = 1;
  int speakers = 4;
  int sessions_per_speaker = 2;
  int frames_per_session = 2000;
  int dim = 10;
  int components = 32;
  /// Scale of the per-speaker transform perturbation (alpha).
  double speaker_strength = 0.1;
  /// Scale of the per-session mean offset (beta).
  double channel_strength = 0.0;
  /// Standard deviation of the UBM mean entries.
  double mean_spread = 2.0;

  void Check() const;
};

struct Session {
  std::string speaker_id;
  std::string session_id;
  int speaker_index = 0;
  Matrix frames;  // T x D
};

struct GmmCorpus {
  DiagonalGmm ubm;
  std::vector<Session> sessions;
  /// Ground-truth A_r, one per speaker.
  std::vector<Matrix> speaker_transforms;
};

/**
   UBM: weights proportional to 0.5 + U(0,1), mean entries N(0, mean_spread^2),
   variances 0.5 + U(0,1).  Speaker r gets A_r = I + alpha R_r with R_r
   entries N(0,1) / D.  A frame of session j of speaker r picks component s
   by weight and is drawn from N(A_r mu_s + beta c_rj, diag(var_s)), where
   c_rj ~ N(0, I) is the session's channel offset.

   Streams: UBM from Derive(0), speaker r from Derive({1, r}), session j of
   speaker r from Derive({2, r, j}).  Ids are "spkNNNN" and "spkNNNN-sesNN".
*/
GmmCorpus GenerateGmmCorpus(const GmmCorpusSpec &spec);

/// Frames of a single session drawn from `gmm` with means mapped by `a`.
Matrix SampleFrames(const DiagonalGmm &gmm, const Matrix &a, const Vector &offset,
                    int num_frames, RandomStream *rng);

struct PldaCorpusSpec {
  uint64_t seed = 1;
  int speakers = 200;
  int sessions_per_speaker = 10;
  int dim = 20;
  int speaker_dim = 4;
  int channel_dim = 2;
  double speaker_scale = 1.0;
  double channel_scale = 1.0;
  double noise_scale = 0.5;

  void Check() const;
};

struct PldaCorpus {
  VectorSet vectors;
  PldaModel truth;
};

/**
   Ground truth: mu ~ N(0, I); Phi and Gamma are speaker_scale and
   channel_scale times a random orthonormal N x (q_s + q_c) block;
   lambda_i = noise_scale^2 (0.5 + U(0,1)).  Session j of speaker r is
   mu + Phi y_r + Gamma z_rj + sqrt(lambda) * e with y_r, z_rj, e standard
   normal.
*/
PldaCorpus GeneratePldaCorpus(const PldaCorpusSpec &spec);

/**
   Trial list over labeled sessions.  Speakers are taken in order of first
   appearance; the first session of each speaker enrolls.  Every later session
   of the same speaker gives a target trial, and as many sessions of the next
   speaker (cyclically) give nontarget trials.
*/
std::vector<Trial> MakeTrials(const std::vector<std::string> &sessions,
                              const std::vector<std::string> &speakers);

std::string SpeakerId(int r);
std::string SessionId(int r, int j);

}  // namespace mvsv

#endif  // MVSV_SYNTHDATA_H_
