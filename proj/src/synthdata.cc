// src/synthdata.cc

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

#include "mvsv/synthdata.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "mvsv/error.h"
#include "mvsv/random.h"

namespace mvsv {

std::string SpeakerId(int r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%04d", r);
  return buf;
}

std::string SessionId(int r, int j) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "spk%04d-ses%02d", r, j);
  return buf;
}

void GmmCorpusSpec::Check() const {
  if (speakers < 1 || sessions_per_speaker < 1 || frames_per_session < 1 ||
      dim < 1 || components < 1)
    throw Error(ErrorKind::kInvalidSpec, "corpus counts must be positive");
  if (!(speaker_strength >= 0.0) || !(channel_strength >= 0.0) || !(mean_spread > 0.0))
    throw Error(ErrorKind::kInvalidSpec, "corpus strengths must be >= 0");
}

void PldaCorpusSpec::Check() const {
  if (speakers < 1 || sessions_per_speaker < 1 || dim < 1 || speaker_dim < 0 ||
      channel_dim < 0 || speaker_dim + channel_dim > dim)
    throw Error(ErrorKind::kInvalidSpec, "invalid PLDA corpus dims");
  if (!(speaker_scale >= 0.0) || !(channel_scale >= 0.0) || !(noise_scale > 0.0))
    throw Error(ErrorKind::kInvalidSpec, "invalid PLDA corpus scales");
}

Matrix SampleFrames(const DiagonalGmm &gmm, const Matrix &a, const Vector &offset,
                    int num_frames, RandomStream *rng) {
  const int m = gmm.NumComponents(), d = gmm.Dim();
  Matrix means = gmm.means() * a.transpose();
  means.rowwise() += offset.transpose();
  const Matrix sd = gmm.variances().cwiseSqrt();
  Vector cdf(m);
  double run = 0.0;
  for (int s = 0; s < m; s++) cdf(s) = (run += gmm.weights()(s));
  Matrix frames(num_frames, d);
  for (int t = 0; t < num_frames; t++) {
    double u = rng->Uniform() * run;
    int s = 0;
    while (s + 1 < m && cdf(s) < u) s++;
    for (int i = 0; i < d; i++) frames(t, i) = means(s, i) + sd(s, i) * rng->Gaussian();
  }
  return frames;
}

GmmCorpus GenerateGmmCorpus(const GmmCorpusSpec &spec) {
  spec.Check();
  const int d = spec.dim, m = spec.components;
  RandomStream root(spec.seed);

  RandomStream ubm_rng = root.Derive(0);
  Vector weights(m);
  for (int s = 0; s < m; s++) weights(s) = 0.5 + ubm_rng.Uniform();
  weights /= weights.sum();
  Matrix means = spec.mean_spread * ubm_rng.GaussianMatrix(m, d);
  Matrix vars(m, d);
  for (int s = 0; s < m; s++)
    for (int i = 0; i < d; i++) vars(s, i) = 0.5 + ubm_rng.Uniform();

  GmmCorpus corpus;
  corpus.ubm = DiagonalGmm(weights, means, vars);
  corpus.speaker_transforms.resize(spec.speakers);
  corpus.sessions.resize(static_cast<size_t>(spec.speakers) * spec.sessions_per_speaker);
  for (int r = 0; r < spec.speakers; r++) {
    RandomStream spk_rng = root.Derive({1, static_cast<uint64_t>(r)});
    Matrix a = Matrix::Identity(d, d) +
               (spec.speaker_strength / d) * spk_rng.GaussianMatrix(d, d);
    corpus.speaker_transforms[r] = a;
    for (int j = 0; j < spec.sessions_per_speaker; j++) {
      RandomStream ses_rng =
          root.Derive({2, static_cast<uint64_t>(r), static_cast<uint64_t>(j)});
      Vector offset = spec.channel_strength * ses_rng.GaussianVector(d);
      Session &ses = corpus.sessions[static_cast<size_t>(r) * spec.sessions_per_speaker + j];
      ses.speaker_id = SpeakerId(r);
      ses.session_id = SessionId(r, j);
      ses.speaker_index = r;
      ses.frames = SampleFrames(corpus.ubm, a, offset, spec.frames_per_session, &ses_rng);
    }
  }
  return corpus;
}

PldaCorpus GeneratePldaCorpus(const PldaCorpusSpec &spec) {
  spec.Check();
  const int n = spec.dim, qs = spec.speaker_dim, qc = spec.channel_dim;
  RandomStream root(spec.seed);
  RandomStream model_rng = root.Derive(0);
  PldaCorpus corpus;
  PldaModel &truth = corpus.truth;
  truth.mu = model_rng.GaussianVector(n);
  Matrix basis = RandomOrthonormal(&model_rng, n, qs + qc);
  truth.phi = spec.speaker_scale * basis.leftCols(qs);
  truth.gamma = spec.channel_scale * basis.rightCols(qc);
  truth.lambda.resize(n);
  for (int i = 0; i < n; i++)
    truth.lambda(i) = spec.noise_scale * spec.noise_scale * (0.5 + model_rng.Uniform());
  const Vector noise_sd = truth.lambda.cwiseSqrt();

  VectorSet &vs = corpus.vectors;
  const long total = static_cast<long>(spec.speakers) * spec.sessions_per_speaker;
  vs.rows.resize(total, n);
  long row = 0;
  for (int r = 0; r < spec.speakers; r++) {
    RandomStream spk_rng = root.Derive({1, static_cast<uint64_t>(r)});
    Vector y = spk_rng.GaussianVector(qs);
    for (int j = 0; j < spec.sessions_per_speaker; j++) {
      RandomStream ses_rng =
          root.Derive({2, static_cast<uint64_t>(r), static_cast<uint64_t>(j)});
      Vector z = ses_rng.GaussianVector(qc);
      Vector e = ses_rng.GaussianVector(n);
      Vector w = truth.mu + truth.phi * y + truth.gamma * z +
                 noise_sd.cwiseProduct(e);
      vs.rows.row(row++) = w.transpose();
      vs.speakers.push_back(SpeakerId(r));
      vs.sessions.push_back(SessionId(r, j));
    }
  }
  return corpus;
}

std::vector<Trial> MakeTrials(const std::vector<std::string> &sessions,
                              const std::vector<std::string> &speakers) {
  if (sessions.size() != speakers.size())
    throw Error(ErrorKind::kDimensionMismatch, "MakeTrials: id lists differ in length");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> by_speaker;
  for (size_t i = 0; i < sessions.size(); i++) {
    auto &list = by_speaker[speakers[i]];
    if (list.empty()) order.push_back(speakers[i]);
    list.push_back(sessions[i]);
  }
  if (order.size() < 2)
    throw Error(ErrorKind::kTooFewSpeakers, "MakeTrials: need at least 2 speakers");
  std::vector<Trial> trials;
  for (size_t r = 0; r < order.size(); r++) {
    const auto &own = by_speaker[order[r]];
    const auto &next = by_speaker[order[(r + 1) % order.size()]];
    for (size_t j = 1; j < own.size(); j++)
      trials.push_back({own[0], own[j], TrialLabel::kTarget});
    for (size_t j = 0; j + 1 < own.size() && j < next.size(); j++)
      trials.push_back({own[0], next[next.size() - 1 - j], TrialLabel::kNonTarget});
  }
  return trials;
}

}  // namespace mvsv
