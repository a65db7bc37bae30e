// tests/acceptance-test.cc

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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "cli.h"
#include "metric-oracle.h"
#include "mvsv/efr.h"
#include "mvsv/io.h"
#include "mvsv/mllr.h"
#include "mvsv/mvector.h"
#include "mvsv/pipeline.h"
#include "mvsv/plda.h"
#include "mvsv/projections.h"
#include "mvsv/random.h"
#include "mvsv/synthdata.h"
#include "test-util.h"

namespace mvsv {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string &what) {
    if (!ok) {
      detail << (pass ? "; failed: " : ", ");
      detail << what;
      pass = false;
    }
  }
};

bool NonDecreasing(const std::vector<double> &trace, double rel_tol) {
  for (size_t k = 1; k < trace.size(); k++)
    if (trace[k] < trace[k - 1] - rel_tol * std::abs(trace[k - 1])) return false;
  return true;
}

VectorSet Rows(const VectorSet &set, long begin, long end) {
  VectorSet out;
  out.rows = set.rows.middleRows(begin, end - begin);
  out.speakers.assign(set.speakers.begin() + begin, set.speakers.begin() + end);
  out.sessions.assign(set.sessions.begin() + begin, set.sessions.begin() + end);
  return out;
}

// 1. MLLR recovery of the generating transforms.
void MllrRecovery(Outcome *o) {
  GmmCorpusSpec spec;
  spec.seed = 11;
  spec.speakers = 4;
  spec.sessions_per_speaker = 1;
  spec.frames_per_session = 50000;
  spec.dim = 10;
  spec.components = 32;
  spec.speaker_strength = 0.1;
  GmmCorpus c = GenerateGmmCorpus(spec);
  RegressionClassMap map = RegressionClassMap::Global(32);
  double worst = 0.0;
  for (const Session &s : c.sessions) {
    Matrix a = EstimateMllr(c.ubm, s.frames, map).matrices[0];
    worst = std::max(worst, testing::RelFrobError(a, c.speaker_transforms[s.speaker_index]));
  }
  o->detail << "max rel err " << worst;
  o->Require(worst < 0.05, "perturbed transform error >= 0.05");

  spec.speaker_strength = 0.0;
  spec.speakers = 2;
  GmmCorpus id = GenerateGmmCorpus(spec);
  Matrix eye = Matrix::Identity(10, 10);
  double worst_id = 0.0;
  for (const Session &s : id.sessions)
    worst_id = std::max(worst_id,
                        testing::RelFrobError(EstimateMllr(id.ubm, s.frames, map).matrices[0], eye));
  o->detail << ", identity corpus " << worst_id;
  o->Require(worst_id < 0.05, "identity corpus error >= 0.05");
}

// 2. Window plans against a direct enumeration of the rule.
void Windowing(Outcome *o) {
  long pairs = 0, mismatches = 0, gaps = 0;
  for (int n = 1; n <= 2000; n++) {
    for (int w = 2; w <= n; w += 2) {
      const int hop = w / 2;
      std::vector<int> expected;
      for (int off = 0; off + w <= n; off++)
        if (off % hop == 0) expected.push_back(off);
      if (expected.back() + w < n) expected.push_back(n - w);
      WindowPlan plan = PlanWindows(n, w);
      pairs++;
      if (plan.offsets != expected || plan.window != w) mismatches++;
      int covered = 0;
      for (int off : plan.offsets) {
        if (off > covered) break;
        covered = std::max(covered, off + w);
      }
      if (covered != n || plan.offsets.front() != 0) gaps++;
    }
  }
  WindowPlan p = PlanWindows(1764, 650);
  o->detail << pairs << " (N, W) pairs, " << mismatches << " mismatches, " << gaps
            << " coverage gaps";
  o->Require(mismatches == 0, "plan differs from enumeration");
  o->Require(gaps == 0, "incomplete coverage");
  o->Require(p.offsets == std::vector<int>{0, 325, 650, 975, 1114}, "N=1764 W=650 offsets");
}

// 3. Length normalization and Mahalanobis scoring invariants.
void EfrInvariants(Outcome *o) {
  RandomStream rng(33);
  const int dim = 20;
  Matrix mix = rng.GaussianMatrix(dim, dim);
  Vector shift = 3.0 * rng.GaussianVector(dim);
  auto draw = [&](int n) {
    Matrix rows = rng.GaussianMatrix(n, dim) * mix;
    return Matrix(rows.rowwise() + shift.transpose());
  };
  Matrix train = draw(1000);
  std::vector<int> labels;
  for (int i = 0; i < 1000; i++) labels.push_back(i / 10);
  EfrModel model = FitEfr(train, labels, 2);
  double norm_err = 0.0;
  for (const Matrix &rows : {train, draw(1000)}) {
    Matrix out = model.normalizer.ApplyRows(rows);
    for (long i = 0; i < out.rows(); i++)
      norm_err = std::max(norm_err, std::abs(out.row(i).norm() - 1.0));
  }
  const LengthNormStage &first = model.normalizer.stages()[0];
  Matrix cov = Covariance(train, nullptr);
  double white_err =
      (first.whitener * cov * first.whitener - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  bool symmetric = true, zero = true;
  Matrix test = model.normalizer.ApplyRows(draw(200));
  for (long i = 0; i + 1 < test.rows(); i++) {
    Vector a = test.row(i).transpose(), b = test.row(i + 1).transpose();
    symmetric &= MahalanobisScore(model, a, b) == MahalanobisScore(model, b, a);
    zero &= MahalanobisScore(model, a, a) == 0.0;
  }
  o->detail << "max |norm-1| " << norm_err << ", whitened cov err " << white_err;
  o->Require(norm_err <= 1e-12, "unit norm");
  o->Require(white_err <= 1e-6, "whitened covariance");
  o->Require(symmetric, "score symmetry");
  o->Require(zero, "zero self distance");
}

// 4. PLDA training and scoring.
void PldaCorrectness(Outcome *o) {
  PldaCorpusSpec spec;
  spec.seed = 44;
  spec.speakers = 150;
  spec.sessions_per_speaker = 8;
  spec.dim = 20;
  spec.speaker_dim = 4;
  spec.channel_dim = 2;
  PldaCorpus c = GeneratePldaCorpus(spec);
  std::vector<int> labels = c.vectors.SpeakerLabels();
  std::vector<double> trace;
  PldaTrainOptions opts;
  opts.iters = 20;
  opts.seed = 44;
  PldaModel model = FitPlda(c.vectors.rows, labels, 4, 2, opts, &trace);
  o->Require(trace.size() == 21 && NonDecreasing(trace, 1e-8), "EM log-likelihood decreased");

  PldaModel one;
  one.mu = Vector::Zero(1);
  one.phi = Matrix::Ones(1, 1);
  one.gamma = Matrix::Zero(1, 0);
  one.lambda = Vector::Ones(1);
  const double hand = PldaScorer(one).Score(Vector::Ones(1), Vector::Ones(1));
  o->detail << "hand example " << hand;
  o->Require(std::abs(hand - 0.3105) <= 1e-4, "1-D hand oracle");

  PldaModel flat = model;
  flat.phi.setZero();
  PldaScorer zero(flat), scorer(model);
  RandomStream rng(45);
  bool all_zero = true;
  double asym = 0.0;
  for (int k = 0; k < 200; k++) {
    Vector a = c.vectors.rows.row(rng.UniformInt(c.vectors.Size())).transpose();
    Vector b = model.mu + 2.0 * rng.GaussianVector(20);
    all_zero &= zero.Score(a, b) == 0.0;
    asym = std::max(asym, std::abs(scorer.Score(a, b) - scorer.Score(b, a)));
  }
  o->detail << ", max asymmetry " << asym;
  o->Require(all_zero, "Phi=0 scores");
  o->Require(asym <= 1e-10, "score symmetry");
}

// 5. PPCA-NAP E-step, subspace recovery and monotone likelihood.
void PpcaNap(Outcome *o) {
  RandomStream rng(55);
  Matrix u = rng.GaussianMatrix(12, 3);
  PpcaNapModel nap(u);
  double estep = 0.0;
  for (int k = 0; k < 50; k++) {
    Vector v = rng.GaussianVector(12);
    Matrix p = Matrix::Identity(3, 3) + u.transpose() * u;
    Vector direct = p.fullPivLu().solve(u.transpose() * v);
    estep = std::max(estep, (nap.PointEstimate(v) - direct).norm());
  }
  PldaCorpusSpec spec;
  spec.seed = 56;
  spec.speakers = 200;
  spec.sessions_per_speaker = 10;
  spec.dim = 10;
  spec.speaker_dim = 3;
  spec.channel_dim = 2;
  spec.speaker_scale = 3.0;
  spec.channel_scale = 3.0;
  spec.noise_scale = 1.0;
  PldaCorpus c = GeneratePldaCorpus(spec);
  std::vector<double> trace;
  PpcaNapModel fit = FitPpcaNap(c.vectors.rows, c.vectors.SpeakerLabels(), 2, 30, &trace);
  double angle = testing::MaxPrincipalAngleDeg(fit.u(), c.truth.gamma);
  o->detail << "E-step err " << estep << ", max principal angle " << angle << " deg";
  o->Require(estep <= 1e-10, "E-step");
  o->Require(angle < 5.0, "subspace recovery");
  o->Require(NonDecreasing(trace, 1e-8), "log-likelihood decreased");
}

// 6. EER and MinDCF against direct threshold sweeps.
void MetricOracles(Outcome *o) {
  RandomStream rng(66);
  double worst = 0.0;
  bool invariant = true;
  const DcfParams presets[] = {DcfParams::Sre08(), DcfParams::Sre10()};
  for (int set = 0; set < 100; set++) {
    int nt = 1 + rng.UniformInt(200), nn = 1 + rng.UniformInt(500);
    double shift = 3.0 * rng.Uniform();
    bool quantize = set % 3 == 0;
    std::vector<double> tar, non;
    for (int i = 0; i < nt; i++) {
      double s = rng.Gaussian() + shift;
      tar.push_back(quantize ? std::round(4 * s) / 4 : s);
    }
    for (int i = 0; i < nn; i++) {
      double s = rng.Gaussian();
      non.push_back(quantize ? std::round(4 * s) / 4 : s);
    }
    double eer = ComputeEer(tar, non).eer;
    worst = std::max(worst, std::abs(eer - testing::BruteForceEer(tar, non)));
    for (const DcfParams &p : presets)
      worst = std::max(worst, std::abs(ComputeMinDcf(tar, non, p) -
                                       testing::BruteForceMinDcf(tar, non, p)));
    std::vector<double> t2, n2;
    for (double s : tar) t2.push_back(std::exp(0.5 * s) + 7.0);
    for (double s : non) n2.push_back(std::exp(0.5 * s) + 7.0);
    invariant &= ComputeEer(t2, n2).eer == eer;
  }
  o->detail << "max deviation from sweep " << worst;
  o->Require(worst <= 1e-12, "oracle mismatch");
  o->Require(invariant, "monotone transform changed EER");
}

// 7. A single full-width window reproduces the full system bit for bit.
void DegenerateComposition(Outcome *o) {
  PldaCorpusSpec spec;
  spec.seed = 77;
  spec.speakers = 50;
  spec.sessions_per_speaker = 5;
  spec.dim = 16;
  spec.speaker_dim = 3;
  spec.channel_dim = 2;
  PldaCorpus c = GeneratePldaCorpus(spec);
  VectorSet train = Rows(c.vectors, 0, 150), eval = Rows(c.vectors, 150, 250);
  std::vector<Trial> trials = MakeTrials(eval.sessions, eval.speakers);
  int kinds = 0;
  for (BackendKind kind : {BackendKind::kLdaEfr, BackendKind::kPcaEfr, BackendKind::kPpcaNapEfr,
                           BackendKind::kPlda, BackendKind::kCascade}) {
    BackendSpec b;
    b.kind = kind;
    b.projection_dim = kind == BackendKind::kPpcaNapEfr ? 2 : 8;
    b.plda_speaker_dim = 3;
    b.plda_channel_dim = 2;
    b.seed = 77;
    ScoreSet full = ScoreTrials(TrainSystem(b, train, std::nullopt), eval, eval, trials);
    ScoreSet win = ScoreTrials(TrainSystem(b, train, 16), eval, eval, trials);
    bool same = full.entries.size() == win.entries.size();
    for (size_t k = 0; same && k < full.entries.size(); k++)
      same = full.entries[k].score == win.entries[k].score;
    o->Require(same, std::string(BackendKindName(kind)) + " differs");
    kinds++;
  }
  o->detail << kinds << " kinds, " << trials.size() << " trials each";
}

// 8. Directional trend on a synthetic frame corpus.
struct TrendResult {
  double full = 0, mvector = 0, plda = 0, cascade = 0;
};

TrendResult RunTrend(uint64_t seed) {
  const int train_speakers = 60, eval_speakers = 40, sessions = 6;
  GmmCorpusSpec spec;
  spec.seed = seed;
  spec.speakers = train_speakers + eval_speakers;
  spec.sessions_per_speaker = sessions;
  spec.frames_per_session = 1000;
  spec.dim = 20;
  spec.components = 64;
  spec.speaker_strength = 0.3;
  spec.channel_strength = 0.5;
  GmmCorpus corpus = GenerateGmmCorpus(spec);

  const int num_train = train_speakers * sessions;
  Matrix ubm_frames(static_cast<long>(num_train) * spec.frames_per_session, spec.dim);
  for (int i = 0; i < num_train; i++)
    ubm_frames.middleRows(static_cast<long>(i) * spec.frames_per_session,
                          spec.frames_per_session) = corpus.sessions[i].frames;
  GmmTrainOptions gopts;
  gopts.max_em_iters = 10;
  gopts.seed = seed;
  DiagonalGmm ubm = TrainUbm(ubm_frames, spec.components, gopts);

  RegressionClassMap map = RegressionClassMap::Global(spec.components);
  VectorSet all;
  all.rows.resize(static_cast<long>(corpus.sessions.size()), spec.dim * spec.dim);
  for (size_t i = 0; i < corpus.sessions.size(); i++) {
    const Session &s = corpus.sessions[i];
    all.rows.row(i) =
        BuildSuperVector(EstimateMllr(ubm, s.frames, map), s.speaker_id, s.session_id)
            .values.transpose();
    all.sessions.push_back(s.session_id);
    all.speakers.push_back(s.speaker_id);
  }
  VectorSet train = Rows(all, 0, num_train), eval = Rows(all, num_train, all.Size());
  std::vector<Trial> trials = MakeTrials(eval.sessions, eval.speakers);

  BackendSpec lda;
  lda.kind = BackendKind::kLdaEfr;
  lda.projection_dim = 40;
  lda.seed = seed;
  BackendSpec plda = lda;
  plda.kind = BackendKind::kPlda;
  plda.plda_speaker_dim = 20;
  plda.plda_channel_dim = 10;
  BackendSpec cascade = plda;
  cascade.kind = BackendKind::kCascade;
  const DcfParams dcf = DcfParams::Sre08();
  TrendResult r;
  r.full = EvaluateSystem(lda, std::nullopt, train, eval, eval, trials, dcf).eer;
  r.mvector = EvaluateSystem(lda, 160, train, eval, eval, trials, dcf).eer;
  r.plda = EvaluateSystem(plda, std::nullopt, train, eval, eval, trials, dcf).eer;
  r.cascade = EvaluateSystem(cascade, std::nullopt, train, eval, eval, trials, dcf).eer;
  return r;
}

void DeskScaleTrend(Outcome *o) {
  int passed = 0;
  for (uint64_t seed : {101, 202, 303, 404}) {
    TrendResult r = RunTrend(seed);
    bool ok = r.mvector <= r.full && r.cascade <= r.plda;
    passed += ok;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%sseed %llu: full %.4f mvec %.4f plda %.4f cascade %.4f %s",
                  seed == 101 ? "" : "; ", static_cast<unsigned long long>(seed), r.full,
                  r.mvector, r.plda, r.cascade, ok ? "ok" : "no");
    o->detail << buf;
  }
  o->Require(passed >= 3, std::to_string(passed) + " of 4 seeds follow the ordering");
}

// 9. Reruns of the command-line pipeline produce identical files.
uint64_t Fnv1a(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  uint64_t h = 0xcbf29ce484222325ULL;
  char ch;
  while (is.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::map<std::string, uint64_t> RunCliPipeline(const std::string &dir, std::string *log) {
  std::ostringstream out, err;
  auto run = [&](std::vector<std::string> args) {
    if (RunCli(args, out, err) != 0) throw Error(ErrorKind::kInvalidSpec, err.str());
  };
  const std::string data = dir + "/data";
  run({"synth-gen", "--type", "gmm", "--out-dir", data, "--seed", "9", "--speakers", "12",
       "--sessions", "4", "--frames", "800", "--dim", "6", "--components", "8",
       "--speaker-strength", "0.5", "--channel-strength", "0.3"});
  run({"ubm-train", "--manifest", data + "/manifest.txt", "--out", dir + "/ubm.mdl",
       "--components", "8", "--iters", "5", "--seed", "3"});
  run({"mllr-extract", "--manifest", data + "/manifest.txt", "--ubm", dir + "/ubm.mdl",
       "--out", dir + "/sv.vec", "--threads", "3"});
  run({"segment", "--in", dir + "/sv.vec", "--window", "12", "--out-prefix", dir + "/mv",
       "--cross"});
  for (std::string kind : {"lda-efr", "cascade"}) {
    std::vector<std::string> args{"backend-train", "--train", dir + "/sv.vec", "--out",
                                  dir + "/" + kind + ".mdl", "--kind", kind, "--q", "8",
                                  "--window", "12", "--seed", "5", "--threads", "2"};
    if (kind == "cascade") {
      args.push_back("--plda");
      args.push_back("4,2");
    }
    run(args);
    run({"score", "--system", dir + "/" + kind + ".mdl", "--enroll", dir + "/sv.vec",
         "--trials", data + "/trials.txt", "--out", dir + "/" + kind + ".scores", "--threads",
         "2"});
  }
  run({"fuse", "--scores", dir + "/lda-efr.scores," + dir + "/cascade.scores", "--standardize",
       "--out", dir + "/fused.scores"});
  run({"eval", "--scores", dir + "/fused.scores", "--trials", data + "/trials.txt", "--out",
       dir + "/report.txt"});
  std::map<std::string, uint64_t> hashes;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      hashes[std::filesystem::relative(entry.path(), dir).string()] = Fnv1a(entry.path().string());
  // Console output names the run directory; compare it without that.
  std::string text = out.str();
  for (size_t pos; (pos = text.find(dir)) != std::string::npos;)
    text.replace(pos, dir.size(), "<dir>");
  *log = text;
  return hashes;
}

void Reproducibility(Outcome *o) {
  std::string log_a, log_b;
  auto a = RunCliPipeline(testing::ScratchDir("accept-repro-a"), &log_a);
  auto b = RunCliPipeline(testing::ScratchDir("accept-repro-b"), &log_b);
  o->detail << a.size() << " files hashed";
  o->Require(a.size() > 20, "pipeline produced too few files");
  o->Require(a == b, "file hashes differ");
  o->Require(log_a == log_b, "console output differs");
}

}  // namespace
}  // namespace mvsv

int main() {
  using namespace mvsv;
  struct Criterion {
    int id;
    const char *name;
    std::function<void(Outcome *)> run;
  };
  const Criterion criteria[] = {
      {1, "mllr-recovery", MllrRecovery},
      {2, "window-plan-oracle", Windowing},
      {3, "efr-invariants", EfrInvariants},
      {4, "plda-correctness", PldaCorrectness},
      {5, "ppca-nap", PpcaNap},
      {6, "metric-oracles", MetricOracles},
      {7, "full-window-equivalence", DegenerateComposition},
      {8, "desk-scale-trend", DeskScaleTrend},
      {9, "reproducibility", Reproducibility},
  };
  int failures = 0;
  for (const Criterion &c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(&o);
    } catch (const std::exception &e) {
      o.Require(false, std::string("exception: ") + e.what());
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %-24s %s (%.1f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                secs, o.detail.str().c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
