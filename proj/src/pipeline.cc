// src/pipeline.cc

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

#include "mvsv/pipeline.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvsv/error.h"

namespace mvsv {

void VectorSet::Check() const {
  if (static_cast<long>(speakers.size()) != rows.rows() ||
      static_cast<long>(sessions.size()) != rows.rows())
    throw Error(ErrorKind::kFormat, "vector set ids do not match row count");
}

std::vector<int> VectorSet::SpeakerLabels() const {
  std::map<std::string, int> index;
  for (const std::string &s : speakers) index.emplace(s, 0);
  int next = 0;
  for (auto &kv : index) kv.second = next++;
  std::vector<int> labels;
  labels.reserve(speakers.size());
  for (const std::string &s : speakers) labels.push_back(index[s]);
  return labels;
}

const char *BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kLdaEfr: return "lda-efr";
    case BackendKind::kPcaEfr: return "pca-efr";
    case BackendKind::kPpcaNapEfr: return "ppcanap-efr";
    case BackendKind::kPlda: return "plda";
    case BackendKind::kCascade: return "cascade";
  }
  return "unknown";
}

BackendKind ParseBackendKind(const std::string &text) {
  for (BackendKind k : {BackendKind::kLdaEfr, BackendKind::kPcaEfr,
                        BackendKind::kPpcaNapEfr, BackendKind::kPlda,
                        BackendKind::kCascade})
    if (text == BackendKindName(k)) return k;
  throw Error(ErrorKind::kUsage, "unknown back-end kind '" + text + "'");
}

void BackendSpec::Check(int input_dim) const {
  std::ostringstream os;
  const bool projects = kind != BackendKind::kPlda;
  if (projects) {
    int max_q = kind == BackendKind::kPpcaNapEfr ? input_dim - 1 : input_dim;
    if (projection_dim < 1 || projection_dim > max_q)
      os << "projection dim " << projection_dim << " not in [1, " << max_q << "]";
  }
  const bool uses_plda = kind == BackendKind::kPlda || kind == BackendKind::kCascade;
  if (os.str().empty() && uses_plda) {
    int plda_in = kind == BackendKind::kPlda ? input_dim : projection_dim;
    if (plda_speaker_dim < 0 || plda_channel_dim < 0 || plda_speaker_dim > plda_in ||
        plda_channel_dim > plda_in)
      os << "PLDA dims (" << plda_speaker_dim << "," << plda_channel_dim
         << ") do not fit PLDA input dim " << plda_in;
  }
  if (os.str().empty() && (efr_iters < 1 || plda_iters < 0 || ppca_iters < 0))
    os << "iteration counts must be positive";
  if (!os.str().empty()) throw Error(ErrorKind::kInvalidSpec, os.str());
}

Vector Backend::Transform(const Vector &v) const {
  switch (kind) {
    case BackendKind::kLdaEfr: return efr.Normalize(lda.Project(norm.Apply(v)));
    case BackendKind::kPcaEfr: return efr.Normalize(pca.Project(norm.Apply(v)));
    case BackendKind::kPpcaNapEfr: return efr.Normalize(nap.Project(norm.Apply(v)));
    case BackendKind::kPlda: return plda_norm.Apply(v);
    case BackendKind::kCascade: return plda_norm.Apply(lda.Project(norm.Apply(v)));
  }
  return v;
}

double Backend::Score(const Vector &a, const Vector &b) const {
  if (kind == BackendKind::kPlda || kind == BackendKind::kCascade)
    return scorer.Score(a, b);
  return MahalanobisScore(efr, a, b);
}

Backend TrainBackend(const BackendSpec &spec, const Matrix &rows,
                     std::span<const int> labels) {
  spec.Check(static_cast<int>(rows.cols()));
  Backend b;
  b.kind = spec.kind;
  if (spec.kind == BackendKind::kPlda) {
    PldaPreprocessed pre = PldaPreprocess(rows, spec.efr_iters);
    b.plda_norm = std::move(pre.normalizer);
    b.plda = FitPlda(pre.normalized, labels, spec.plda_speaker_dim,
                     spec.plda_channel_dim, {spec.plda_iters, spec.seed});
    b.scorer = PldaScorer(b.plda);
    return b;
  }
  b.norm = FitMeanVar(rows);
  Matrix x = b.norm.ApplyRows(rows);
  Matrix y;
  switch (spec.kind) {
    case BackendKind::kLdaEfr:
    case BackendKind::kCascade:
      b.lda = FitLda(x, labels, spec.projection_dim, spec.lda_ridge);
      y = b.lda.ProjectRows(x);
      break;
    case BackendKind::kPcaEfr:
      b.pca = FitPca(x, spec.projection_dim);
      y = b.pca.ProjectRows(x);
      break;
    case BackendKind::kPpcaNapEfr:
      b.nap = FitPpcaNap(x, labels, spec.projection_dim, spec.ppca_iters);
      y = b.nap.ProjectRows(x);
      break;
    case BackendKind::kPlda:
      break;
  }
  if (spec.kind == BackendKind::kCascade) {
    PldaPreprocessed pre = PldaPreprocess(y, spec.efr_iters);
    b.plda_norm = std::move(pre.normalizer);
    b.plda = FitPlda(pre.normalized, labels, spec.plda_speaker_dim,
                     spec.plda_channel_dim, {spec.plda_iters, spec.seed});
    b.scorer = PldaScorer(b.plda);
  } else {
    b.efr = FitEfr(y, labels, spec.efr_iters);
  }
  return b;
}

Vector SystemModel::SubsystemInput(const Vector &v, int i) const {
  CheckDim(v.size(), input_dim, "system input");
  if (!plan) return v;
  return SliceWindow(*plan, v, i);
}

void ParallelFor(int n, int threads, const std::function<void(int)> &fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; i++) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  const int count = std::min(threads, n);
  for (int w = 0; w < count; w++) {
    workers.emplace_back([&]() {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto &t : workers) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

SystemModel TrainSystem(const BackendSpec &spec, const VectorSet &train,
                        std::optional<int> window, int threads) {
  train.Check();
  SystemModel sys;
  sys.spec = spec;
  sys.input_dim = train.Dim();
  if (window) sys.plan = PlanWindows(train.Dim(), *window);
  const int n = sys.plan ? sys.plan->NumWindows() : 1;
  const std::vector<int> labels = train.SpeakerLabels();
  sys.subsystems.resize(n);
  ParallelFor(n, threads, [&](int i) {
    if (sys.plan) {
      Matrix cols = train.rows.middleCols(sys.plan->offsets[i], sys.plan->window);
      sys.subsystems[i] = TrainBackend(spec, cols, labels);
    } else {
      sys.subsystems[i] = TrainBackend(spec, train.rows, labels);
    }
  });
  return sys;
}

namespace {

std::multimap<std::string, long> IndexBy(const std::vector<std::string> &ids) {
  std::multimap<std::string, long> index;
  for (size_t i = 0; i < ids.size(); i++) index.emplace(ids[i], static_cast<long>(i));
  return index;
}

std::vector<long> Resolve(const std::multimap<std::string, long> &primary,
                          const std::multimap<std::string, long> *fallback,
                          const std::string &id) {
  std::vector<long> rows;
  auto range = primary.equal_range(id);
  for (auto it = range.first; it != range.second; ++it) rows.push_back(it->second);
  if (rows.empty() && fallback) {
    range = fallback->equal_range(id);
    for (auto it = range.first; it != range.second; ++it) rows.push_back(it->second);
  }
  if (rows.empty()) throw Error(ErrorKind::kUnknownId, "unknown id '" + id + "'");
  return rows;
}

// Transformed vectors of one id, one per subsystem.
using Embedding = std::vector<Vector>;

Embedding Embed(const SystemModel &sys, const VectorSet &set,
                const std::vector<long> &rows) {
  Embedding out(sys.NumSubsystems());
  for (int i = 0; i < sys.NumSubsystems(); i++) {
    Vector acc;
    for (long r : rows) {
      Vector t = sys.subsystems[i].Transform(
          sys.SubsystemInput(set.rows.row(r).transpose(), i));
      if (acc.size() == 0) acc = t;
      else acc += t;
    }
    out[i] = acc / static_cast<double>(rows.size());
  }
  return out;
}

}  // namespace

ScoreSet ScoreTrials(const SystemModel &system, const VectorSet &enroll,
                     const VectorSet &test, const std::vector<Trial> &trials,
                     const ScoreOptions &opts) {
  enroll.Check();
  test.Check();
  auto enroll_sessions = IndexBy(enroll.sessions);
  auto enroll_speakers = IndexBy(enroll.speakers);
  auto test_sessions = IndexBy(test.sessions);

  std::map<std::string, std::vector<long>> enroll_rows, test_rows;
  for (const Trial &t : trials) {
    if (!enroll_rows.count(t.enroll_id)) {
      auto rows = Resolve(enroll_sessions,
                          opts.average_enrollment ? &enroll_speakers : nullptr,
                          t.enroll_id);
      if (rows.size() > 1 && !opts.average_enrollment)
        throw Error(ErrorKind::kUnknownId, "enrollment id '" + t.enroll_id +
                                               "' names several vectors");
      enroll_rows.emplace(t.enroll_id, std::move(rows));
    }
    if (!test_rows.count(t.test_id)) {
      auto rows = Resolve(test_sessions, nullptr, t.test_id);
      if (rows.size() > 1)
        throw Error(ErrorKind::kUnknownId, "test id '" + t.test_id +
                                               "' names several vectors");
      test_rows.emplace(t.test_id, std::move(rows));
    }
  }

  auto embed_all = [&](const VectorSet &set,
                       const std::map<std::string, std::vector<long>> &ids) {
    std::vector<const std::pair<const std::string, std::vector<long>> *> items;
    for (const auto &kv : ids) items.push_back(&kv);
    std::vector<Embedding> emb(items.size());
    ParallelFor(static_cast<int>(items.size()), opts.threads,
                [&](int k) { emb[k] = Embed(system, set, items[k]->second); });
    std::map<std::string, Embedding> out;
    for (size_t k = 0; k < items.size(); k++) out.emplace(items[k]->first, std::move(emb[k]));
    return out;
  };
  const auto enroll_emb = embed_all(enroll, enroll_rows);
  const auto test_emb = embed_all(test, test_rows);

  ScoreSet result;
  result.entries.resize(trials.size());
  result.subsystem_scores.resize(trials.size());
  const int n = system.NumSubsystems();
  ParallelFor(static_cast<int>(trials.size()), opts.threads, [&](int k) {
    const Embedding &a = enroll_emb.at(trials[k].enroll_id);
    const Embedding &b = test_emb.at(trials[k].test_id);
    std::vector<double> &sub = result.subsystem_scores[k];
    sub.resize(n);
    double sum = 0.0;
    for (int i = 0; i < n; i++) {
      sub[i] = system.subsystems[i].Score(a[i], b[i]);
      sum += sub[i];
    }
    result.entries[k] = {trials[k], sum / n};
  });
  return result;
}

namespace {
std::string TrialKey(const Trial &t) { return t.enroll_id + '\n' + t.test_id; }
}

ScoreSet LateFuse(const std::vector<ScoreSet> &sets,
                  const std::vector<double> &weights, bool standardize) {
  if (sets.empty()) throw Error(ErrorKind::kUsage, "nothing to fuse");
  std::vector<double> w = weights;
  if (w.empty()) w.assign(sets.size(), 1.0 / sets.size());
  if (w.size() != sets.size())
    throw Error(ErrorKind::kUsage, "one weight per score set required");
  for (double x : w)
    if (!(x >= 0.0)) throw Error(ErrorKind::kUsage, "fusion weights must be >= 0");

  const ScoreSet &first = sets[0];
  std::vector<std::vector<double>> aligned(sets.size());
  for (size_t s = 0; s < sets.size(); s++) {
    if (sets[s].entries.size() != first.entries.size())
      throw Error(ErrorKind::kTrialMismatch, "score sets have different trial counts");
    std::map<std::string, double> by_key;
    for (const ScoredTrial &e : sets[s].entries) by_key[TrialKey(e.trial)] = e.score;
    if (by_key.size() != sets[s].entries.size())
      throw Error(ErrorKind::kTrialMismatch, "duplicate trial in score set");
    aligned[s].reserve(first.entries.size());
    for (const ScoredTrial &e : first.entries) {
      auto it = by_key.find(TrialKey(e.trial));
      if (it == by_key.end())
        throw Error(ErrorKind::kTrialMismatch, "trial " + e.trial.enroll_id + " " +
                                                   e.trial.test_id + " missing");
      aligned[s].push_back(it->second);
    }
    if (standardize && !aligned[s].empty()) {
      double mean = 0.0, var = 0.0;
      for (double x : aligned[s]) mean += x;
      mean /= aligned[s].size();
      for (double x : aligned[s]) var += (x - mean) * (x - mean);
      double sd = std::sqrt(var / aligned[s].size());
      for (double &x : aligned[s]) x = sd > 0.0 ? (x - mean) / sd : x - mean;
    }
  }
  ScoreSet out;
  out.entries = first.entries;
  for (size_t k = 0; k < out.entries.size(); k++) {
    double sum = 0.0;
    for (size_t s = 0; s < sets.size(); s++) sum += w[s] * aligned[s][k];
    out.entries[k].score = sum;
  }
  return out;
}

VectorSet EarlyFuse(const std::vector<VectorSet> &sets) {
  std::vector<const VectorSet *> parts;
  for (const VectorSet &s : sets) {
    s.Check();
    if (s.Size() > 0) parts.push_back(&s);
  }
  if (parts.empty()) return VectorSet();
  const VectorSet &first = *parts[0];
  long dim = 0;
  for (const VectorSet *p : parts) dim += p->Dim();
  VectorSet out;
  out.speakers = first.speakers;
  out.sessions = first.sessions;
  out.rows.resize(first.Size(), dim);
  long col = 0;
  for (const VectorSet *p : parts) {
    std::map<std::string, long> index;
    for (long i = 0; i < p->Size(); i++) index.emplace(p->sessions[i], i);
    if (p->Size() != first.Size() || static_cast<long>(index.size()) != p->Size())
      throw Error(ErrorKind::kSessionMismatch, "vector sets cover different sessions");
    for (long i = 0; i < first.Size(); i++) {
      auto it = index.find(first.sessions[i]);
      if (it == index.end())
        throw Error(ErrorKind::kSessionMismatch,
                    "session '" + first.sessions[i] + "' missing from a vector set");
      out.rows.block(i, col, 1, p->Dim()) = p->rows.row(it->second);
    }
    col += p->Dim();
  }
  return out;
}

SystemResult EvaluateSystem(const BackendSpec &spec, std::optional<int> window,
                            const VectorSet &train, const VectorSet &enroll,
                            const VectorSet &test, const std::vector<Trial> &trials,
                            const DcfParams &dcf, int threads) {
  SystemModel sys = TrainSystem(spec, train, window, threads);
  ScoreOptions opts;
  opts.threads = threads;
  ScoreSet scores = ScoreTrials(sys, enroll, test, trials, opts);
  MetricsReport report = Evaluate(scores, dcf);
  return {report.eer, report.min_dcf};
}

}  // namespace mvsv
