// mvsv/pipeline.h

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

#ifndef MVSV_PIPELINE_H_
#define MVSV_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvsv/efr.h"
#include "mvsv/eval.h"
#include "mvsv/mvector.h"
#include "mvsv/plda.h"
#include "mvsv/projections.h"
#include "mvsv/types.h"

namespace mvsv {

/// Labeled vectors, one per row.
struct VectorSet {
  Matrix rows;
  std::vector<std::string> speakers;
  std::vector<std::string> sessions;

  long Size() const { return rows.rows(); }
  int Dim() const { return static_cast<int>(rows.cols()); }
  void Check() const;
  /// Integer speaker labels in sorted speaker-id order.
  std::vector<int> SpeakerLabels() const;
};

enum class BackendKind { kLdaEfr, kPcaEfr, kPpcaNapEfr, kPlda, kCascade };

const char *BackendKindName(BackendKind kind);
/// Accepts "lda-efr", "pca-efr", "ppcanap-efr", "plda", "cascade".
BackendKind ParseBackendKind(const std::string &text);

struct BackendSpec {
  BackendKind kind = BackendKind::kLdaEfr;
  /// LDA / PCA output dim, or the PPCA-NAP subspace rank.
  int projection_dim = 0;
  int plda_speaker_dim = 0;
  int plda_channel_dim = 0;
  int efr_iters = 2;
  int plda_iters = 20;
  int ppca_iters = 30;
  double lda_ridge = 1e-6;
  uint64_t seed = 0;

  /// Throws kInvalidSpec unless the dims fit an input of size input_dim.
  void Check(int input_dim) const;
};

/// A trained back-end for one subsystem.  Only the members used by `kind`
/// are populated.
struct Backend {
  BackendKind kind = BackendKind::kLdaEfr;
  MeanVarNorm norm;
  LdaModel lda;
  PcaModel pca;
  PpcaNapModel nap;
  EfrModel efr;
  LengthNormalizer plda_norm;
  PldaModel plda;
  PldaScorer scorer;

  /// Full post-processing chain applied to a raw input vector.
  Vector Transform(const Vector &v) const;
  /// Score between two transformed vectors; larger means same speaker.
  double Score(const Vector &a, const Vector &b) const;
};

Backend TrainBackend(const BackendSpec &spec, const Matrix &rows,
                     std::span<const int> labels);

struct SystemModel {
  BackendSpec spec;
  /// Unset for the full super-vector system.
  std::optional<WindowPlan> plan;
  int input_dim = 0;
  std::vector<Backend> subsystems;

  int NumSubsystems() const { return static_cast<int>(subsystems.size()); }
  /// Input of subsystem i.
  Vector SubsystemInput(const Vector &v, int i) const;
};

/// window == nullopt trains the full system.  Subsystems are independent.
SystemModel TrainSystem(const BackendSpec &spec, const VectorSet &train,
                        std::optional<int> window, int threads = 1);

struct ScoreOptions {
  /// Average transformed enrollment vectors when an id names several rows.
  bool average_enrollment = false;
  int threads = 1;
};

/**
   Score of a trial is the plain mean of the subsystem scores, summed in
   subsystem order.  Trial ids are resolved against session ids; with
   average_enrollment an enrollment id may also name a speaker.
*/
ScoreSet ScoreTrials(const SystemModel &system, const VectorSet &enroll,
                     const VectorSet &test, const std::vector<Trial> &trials,
                     const ScoreOptions &opts = ScoreOptions());

/// Per-trial weighted sum.  Empty weights mean equal weights 1/K.  With
/// standardize each set is first shifted and scaled to zero mean and unit
/// variance over its trials.
ScoreSet LateFuse(const std::vector<ScoreSet> &sets,
                  const std::vector<double> &weights = {},
                  bool standardize = false);

/// Row-wise concatenation aligned on session ids of the first set.  Sets
/// without rows are skipped.
VectorSet EarlyFuse(const std::vector<VectorSet> &sets);

struct SystemResult {
  double eer = 0.0;
  double min_dcf = 0.0;
};

/// Train on `train`, score `trials` and evaluate.
SystemResult EvaluateSystem(const BackendSpec &spec, std::optional<int> window,
                            const VectorSet &train, const VectorSet &enroll,
                            const VectorSet &test, const std::vector<Trial> &trials,
                            const DcfParams &dcf, int threads = 1);

/// Runs fn(0..n-1) on up to `threads` workers.  fn must write only to
/// index-owned storage.
void ParallelFor(int n, int threads, const std::function<void(int)> &fn);

}  // namespace mvsv

#endif  // MVSV_PIPELINE_H_
