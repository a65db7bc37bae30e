// tests/io-test.cc

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

#include "mvsv/io.h"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mvsv/synthdata.h"
#include "test-util.h"

namespace mvsv {

namespace {

std::string Slurp(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

void Spit(const std::string &path, const std::string &data) {
  std::ofstream os(path, std::ios::binary);
  os << data;
}

Matrix Awkward(int rows, int cols) {
  RandomStream rng(77);
  Matrix m = rng.GaussianMatrix(rows, cols);
  m(0, 0) = 1.0 / 3.0;
  if (m.size() > 1) m(0, 1) = -1e-300;
  return m;
}

}  // namespace

TEST_CASE("matrix files round trip exactly") {
  std::string dir = testing::ScratchDir("io-matrix");
  Matrix m = Awkward(7, 3);
  WriteFrames(dir + "/a.frames", m);
  CHECK(ReadFrames(dir + "/a.frames") == m);
  CHECK(Slurp(dir + "/a.frames").rfind("FRAMES v1 rows=7 dim=3\n", 0) == 0);
  Matrix empty(0, 4);
  WriteFrames(dir + "/e.frames", empty);
  CHECK(ReadFrames(dir + "/e.frames").cols() == 4);
  CHECK_THROWS_KIND(ReadMatrixFile(dir + "/a.frames", "VEC"), ErrorKind::kFormat);
  CHECK_THROWS_KIND(ReadFrames(dir + "/missing.frames"), ErrorKind::kIo);
}

TEST_CASE("corrupt matrix files are rejected") {
  std::string dir = testing::ScratchDir("io-corrupt");
  WriteFrames(dir + "/a.frames", Awkward(4, 2));
  std::string good = Slurp(dir + "/a.frames");
  Spit(dir + "/trunc.frames", good.substr(0, good.size() - 3));
  CHECK_THROWS_KIND(ReadFrames(dir + "/trunc.frames"), ErrorKind::kFormat);
  Spit(dir + "/extra.frames", good + "x");
  CHECK_THROWS_KIND(ReadFrames(dir + "/extra.frames"), ErrorKind::kFormat);
  Spit(dir + "/hdr.frames", "FRAMES v2 rows=1 dim=1\n");
  CHECK_THROWS_KIND(ReadFrames(dir + "/hdr.frames"), ErrorKind::kFormat);
  Spit(dir + "/neg.frames", "FRAMES v1 rows=-1 dim=1\n");
  CHECK_THROWS_KIND(ReadFrames(dir + "/neg.frames"), ErrorKind::kFormat);
}

TEST_CASE("vector sets keep ids") {
  std::string dir = testing::ScratchDir("io-vec");
  VectorSet s;
  s.rows = Awkward(3, 5);
  s.sessions = {"s1", "s2", "s3"};
  s.speakers = {"a", "a", "b"};
  WriteVectorSet(dir + "/x.vec", s);
  CHECK(std::filesystem::exists(dir + "/x.vec.ids"));
  VectorSet r = ReadVectorSet(dir + "/x.vec");
  CHECK(r.rows == s.rows);
  CHECK(r.sessions == s.sessions);
  CHECK(r.speakers == s.speakers);
  Spit(dir + "/x.vec.ids", "s1 a\ns2 a\n");
  CHECK_THROWS_KIND(ReadVectorSet(dir + "/x.vec"), ErrorKind::kFormat);
}

TEST_CASE("model containers") {
  std::string dir = testing::ScratchDir("io-model");
  ModelWriter w("thing");
  w.Add("m", Awkward(2, 3));
  w.AddVector("v", Vector::LinSpaced(4, 0.0, 1.0));
  w.AddScalar("s", 2.5);
  w.Write(dir + "/t.mdl");
  ModelReader r(dir + "/t.mdl");
  CHECK(r.type() == "thing");
  CHECK(r.Get("m") == Awkward(2, 3));
  CHECK(r.GetVector("v") == Vector::LinSpaced(4, 0.0, 1.0));
  CHECK(r.GetScalar("s") == 2.5);
  CHECK_FALSE(r.Has("nothing"));
  CHECK_THROWS_KIND(r.Get("nothing"), ErrorKind::kFormat);
  CHECK_THROWS_KIND(r.ExpectType("plda"), ErrorKind::kFormat);
  CHECK_THROWS_KIND(ReadGmm(dir + "/t.mdl"), ErrorKind::kFormat);
  std::string good = Slurp(dir + "/t.mdl");
  Spit(dir + "/cut.mdl", good.substr(0, good.size() - 1));
  CHECK_THROWS_KIND(ModelReader(dir + "/cut.mdl"), ErrorKind::kFormat);
}

TEST_CASE("GMM and PLDA round trip") {
  std::string dir = testing::ScratchDir("io-gmm");
  GmmCorpusSpec gs;
  gs.speakers = 1;
  gs.sessions_per_speaker = 1;
  gs.frames_per_session = 1;
  DiagonalGmm g = GenerateGmmCorpus(gs).ubm;
  WriteGmm(dir + "/u.mdl", g);
  DiagonalGmm g2 = ReadGmm(dir + "/u.mdl");
  CHECK(g2.weights() == g.weights());
  CHECK(g2.means() == g.means());
  CHECK(g2.variances() == g.variances());

  PldaCorpusSpec ps;
  ps.speakers = 2;
  PldaModel p = GeneratePldaCorpus(ps).truth;
  WritePlda(dir + "/p.mdl", p);
  PldaModel p2 = ReadPlda(dir + "/p.mdl");
  CHECK(p2.mu == p.mu);
  CHECK(p2.phi == p.phi);
  CHECK(p2.gamma == p.gamma);
  CHECK(p2.lambda == p.lambda);
}

TEST_CASE("systems round trip with identical scores") {
  std::string dir = testing::ScratchDir("io-system");
  PldaCorpusSpec ps;
  ps.seed = 12;
  ps.speakers = 40;
  ps.sessions_per_speaker = 4;
  ps.dim = 16;
  ps.speaker_dim = 3;
  ps.channel_dim = 2;
  VectorSet all = GeneratePldaCorpus(ps).vectors;
  std::vector<Trial> trials = MakeTrials(all.sessions, all.speakers);
  std::vector<BackendSpec> specs(5);
  specs[0].kind = BackendKind::kLdaEfr;
  specs[0].projection_dim = 6;
  specs[1].kind = BackendKind::kPcaEfr;
  specs[1].projection_dim = 6;
  specs[2].kind = BackendKind::kPpcaNapEfr;
  specs[2].projection_dim = 2;
  specs[3].kind = BackendKind::kPlda;
  specs[3].plda_speaker_dim = 3;
  specs[3].plda_channel_dim = 2;
  specs[4] = specs[3];
  specs[4].kind = BackendKind::kCascade;
  specs[4].projection_dim = 6;
  for (BackendSpec spec : specs) {
    spec.seed = 0xFFFFFFFF12345678ULL;
    for (std::optional<int> window : {std::optional<int>(), std::optional<int>(8)}) {
      SystemModel sys = TrainSystem(spec, all, window);
      std::string path = dir + "/" + BackendKindName(spec.kind) + ".mdl";
      WriteSystem(path, sys);
      SystemModel back = ReadSystem(path);
      CHECK(back.spec.kind == spec.kind);
      CHECK(back.spec.seed == spec.seed);
      CHECK(back.spec.projection_dim == spec.projection_dim);
      CHECK(back.NumSubsystems() == sys.NumSubsystems());
      CHECK(back.plan.has_value() == window.has_value());
      ScoreSet a = ScoreTrials(sys, all, all, trials);
      ScoreSet b = ScoreTrials(back, all, all, trials);
      for (size_t k = 0; k < a.entries.size(); k++) CHECK(a.entries[k].score == b.entries[k].score);
    }
  }
}

TEST_CASE("trials and scores") {
  std::string dir = testing::ScratchDir("io-trials");
  std::vector<Trial> trials{{"a", "b", TrialLabel::kTarget},
                            {"a", "c", TrialLabel::kNonTarget},
                            {"b", "c", TrialLabel::kUnknown}};
  WriteTrials(dir + "/t.txt", trials);
  std::vector<Trial> back = ReadTrials(dir + "/t.txt");
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; i++) {
    CHECK(back[i].enroll_id == trials[i].enroll_id);
    CHECK(back[i].test_id == trials[i].test_id);
    CHECK(back[i].label == trials[i].label);
  }
  ScoreSet s;
  s.entries = {{trials[0], 1.0 / 3.0}, {trials[1], -2e-17}, {trials[2], 12345.678}};
  WriteScores(dir + "/s.txt", s);
  ScoreSet r = ReadScores(dir + "/s.txt", &trials);
  for (int i = 0; i < 3; i++) {
    CHECK(r.entries[i].score == s.entries[i].score);
    CHECK(r.entries[i].trial.label == trials[i].label);
  }
  CHECK(ReadScores(dir + "/s.txt").entries[0].trial.label == TrialLabel::kUnknown);
  std::vector<Trial> fewer(trials.begin(), trials.begin() + 2);
  CHECK_THROWS_KIND(ReadScores(dir + "/s.txt", &fewer), ErrorKind::kTrialMismatch);
  Spit(dir + "/bad.txt", "a b maybe\n");
  CHECK_THROWS_KIND(ReadTrials(dir + "/bad.txt"), ErrorKind::kFormat);
  Spit(dir + "/bad-score.txt", "a b nan-ish\n");
  CHECK_THROWS_KIND(ReadScores(dir + "/bad-score.txt"), ErrorKind::kFormat);
}

TEST_CASE("class maps and manifests") {
  std::string dir = testing::ScratchDir("io-manifest");
  Spit(dir + "/c.txt", "0 1 1\n0 2\n");
  RegressionClassMap map = ReadClassMap(dir + "/c.txt");
  CHECK(map.NumClasses() == 3);
  CHECK(map.NumComponents() == 5);
  CHECK(map.ClassOf(4) == 2);
  Spit(dir + "/gap.txt", "0 2\n");
  CHECK_THROWS_KIND(ReadClassMap(dir + "/gap.txt"), ErrorKind::kInvalidSpec);

  std::vector<ManifestEntry> entries{{"s1", "a", "f/s1.frames"}, {"s2", "b", "/abs/s2.frames"}};
  WriteManifest(dir + "/m.txt", entries);
  std::string text = Slurp(dir + "/m.txt");
  Spit(dir + "/m.txt", "# comment\n\n" + text);
  std::vector<ManifestEntry> back = ReadManifest(dir + "/m.txt");
  REQUIRE(back.size() == 2);
  CHECK(back[0].session_id == "s1");
  CHECK(back[0].speaker_id == "a");
  CHECK(std::filesystem::path(back[0].frames_path) ==
        std::filesystem::path(dir) / "f/s1.frames");
  CHECK(back[1].frames_path == "/abs/s2.frames");
  Spit(dir + "/short.txt", "s1 a\n");
  CHECK_THROWS_KIND(ReadManifest(dir + "/short.txt"), ErrorKind::kFormat);
}

}  // namespace mvsv
