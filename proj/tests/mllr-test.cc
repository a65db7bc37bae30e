// tests/mllr-test.cc

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

#include "mvsv/mllr.h"

#include <cmath>

#include "doctest.h"
#include "mvsv/random.h"
#include "mvsv/synthdata.h"
#include "test-util.h"

namespace mvsv {

namespace {

DiagonalGmm TestUbm(uint64_t seed, int m, int d) {
  GmmCorpusSpec spec;
  spec.seed = seed;
  spec.speakers = 1;
  spec.sessions_per_speaker = 1;
  spec.frames_per_session = 1;
  spec.components = m;
  spec.dim = d;
  return GenerateGmmCorpus(spec).ubm;
}

Matrix Perturbed(RandomStream *rng, int d, double alpha) {
  return Matrix::Identity(d, d) + alpha / d * rng->GaussianMatrix(d, d);
}

}  // namespace

TEST_CASE("identity transform stacks row-major") {
  MllrTransform t;
  t.matrices.push_back(Matrix::Identity(2, 2));
  SuperVector sv = BuildSuperVector(t, "spk", "ses");
  REQUIRE(sv.values.size() == 4);
  CHECK(sv.values(0) == 1.0);
  CHECK(sv.values(1) == 0.0);
  CHECK(sv.values(2) == 0.0);
  CHECK(sv.values(3) == 1.0);
  CHECK(sv.speaker_id == "spk");
  CHECK(sv.session_id == "ses");
}

TEST_CASE("super-vector dimension is K D^2") {
  MllrTransform t;
  t.matrices.assign(1, Matrix::Zero(42, 42));
  CHECK(BuildSuperVector(t, "a", "b").values.size() == 1764);
  t.matrices.assign(2, Matrix::Zero(42, 42));
  CHECK(BuildSuperVector(t, "a", "b").values.size() == 3528);
}

TEST_CASE("stacking order is class-major then row-major") {
  MllrTransform t;
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  t.matrices = {a, b};
  Vector v = BuildSuperVector(t, "", "").values;
  for (int k = 0; k < 8; k++) CHECK(v(k) == k + 1.0);
}

TEST_CASE("unstacking round-trips exactly") {
  RandomStream rng(3);
  MllrTransform t;
  for (int c = 0; c < 3; c++) t.matrices.push_back(rng.GaussianMatrix(5, 5));
  MllrTransform back = UnstackSuperVector(BuildSuperVector(t, "", "").values, 3, 5);
  REQUIRE(back.NumClasses() == 3);
  for (int c = 0; c < 3; c++) CHECK(back.matrices[c] == t.matrices[c]);
  CHECK_THROWS_KIND(UnstackSuperVector(Vector::Zero(74), 3, 5), ErrorKind::kDimensionMismatch);
}

TEST_CASE("class maps are validated") {
  CHECK_THROWS_KIND(RegressionClassMap({0, 2, 2}, 3), ErrorKind::kInvalidSpec);
  CHECK_THROWS_KIND(RegressionClassMap({0, 3}, 2), ErrorKind::kInvalidSpec);
  RegressionClassMap g = RegressionClassMap::Global(4);
  CHECK(g.NumClasses() == 1);
  CHECK(g.ClassOf(3) == 0);
}

TEST_CASE("frames from the UBM itself give a near-identity transform") {
  DiagonalGmm ubm = TestUbm(5, 32, 10);
  RandomStream rng(77);
  Matrix frames = SampleFrames(ubm, Matrix::Identity(10, 10), Vector::Zero(10), 50000, &rng);
  MllrTransform t = EstimateMllr(ubm, frames, RegressionClassMap::Global(32));
  REQUIRE(t.NumClasses() == 1);
  CHECK(testing::RelFrobError(t.matrices[0], Matrix::Identity(10, 10)) < 0.05);
}

TEST_CASE("a known transform of the means is recovered") {
  DiagonalGmm ubm = TestUbm(6, 32, 10);
  RandomStream rng(101);
  Matrix a0 = Perturbed(&rng, 10, 0.1);
  Matrix frames = SampleFrames(ubm, a0, Vector::Zero(10), 50000, &rng);
  Matrix a = EstimateMllr(ubm, frames, RegressionClassMap::Global(32)).matrices[0];
  CHECK(testing::RelFrobError(a, a0) < 0.05);
  // The estimate must capture the perturbation itself, not only sit near I.
  CHECK((a - a0).norm() < 0.5 * (a0 - Matrix::Identity(10, 10)).norm());
}

TEST_CASE("a strong perturbation is recovered as well") {
  DiagonalGmm ubm = TestUbm(8, 32, 6);
  RandomStream rng(5);
  Matrix a0 = Perturbed(&rng, 6, 2.0);
  Matrix frames = SampleFrames(ubm, a0, Vector::Zero(6), 40000, &rng);
  MllrOptions opts;
  opts.iterations = 1;
  RegressionClassMap map = RegressionClassMap::Global(32);
  double err_one = testing::RelFrobError(EstimateMllr(ubm, frames, map, opts).matrices[0], a0);
  // Refreshed alignments remove the bias of aligning against the UBM.
  opts.iterations = 8;
  double err_many = testing::RelFrobError(EstimateMllr(ubm, frames, map, opts).matrices[0], a0);
  CHECK(err_many < 0.05);
  CHECK(err_many < err_one);
}

TEST_CASE("recovery error does not grow with more frames") {
  DiagonalGmm ubm = TestUbm(9, 16, 5);
  RandomStream rng(2);
  Matrix a0 = Perturbed(&rng, 5, 0.5);
  Matrix big = SampleFrames(ubm, a0, Vector::Zero(5), 100000, &rng);
  Matrix small = big.topRows(10000);
  RegressionClassMap map = RegressionClassMap::Global(16);
  double err_small = (EstimateMllr(ubm, small, map).matrices[0] - a0).norm();
  double err_big = (EstimateMllr(ubm, big, map).matrices[0] - a0).norm();
  CHECK(err_big <= err_small);
}

TEST_CASE("two classes sharing a transform both recover it") {
  DiagonalGmm ubm = TestUbm(10, 16, 4);
  std::vector<int> classes(16);
  for (int s = 0; s < 16; s++) classes[s] = s % 2;
  RandomStream rng(12);
  Matrix a0 = Perturbed(&rng, 4, 0.3);
  Matrix frames = SampleFrames(ubm, a0, Vector::Zero(4), 40000, &rng);
  MllrOptions opts;
  opts.iterations = 4;
  MllrTransform t = EstimateMllr(ubm, frames, RegressionClassMap(classes, 2), opts);
  REQUIRE(t.NumClasses() == 2);
  for (int c = 0; c < 2; c++) CHECK(testing::RelFrobError(t.matrices[c], a0) < 0.05);
}

TEST_CASE("an empty regression class is ZeroOccupancy") {
  Matrix means(2, 2);
  means << 1.0, 2.0, 100.0, 100.0;
  DiagonalGmm ubm(Vector::Constant(2, 0.5), means, Matrix::Ones(2, 2));
  RandomStream rng(1);
  Matrix frames = rng.GaussianMatrix(500, 2);
  try {
    EstimateMllr(ubm, frames, RegressionClassMap({0, 1}, 2));
    FAIL("expected ZeroOccupancy");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kZeroOccupancy);
    CHECK(std::string(e.what()).find("(1)") != std::string::npos);
  }
}

TEST_CASE("estimation is deterministic") {
  DiagonalGmm ubm = TestUbm(3, 8, 3);
  RandomStream rng(4);
  Matrix frames = SampleFrames(ubm, Matrix::Identity(3, 3), Vector::Zero(3), 5000, &rng);
  MllrTransform a = EstimateMllr(ubm, frames, RegressionClassMap::Global(8));
  MllrTransform b = EstimateMllr(ubm, frames, RegressionClassMap::Global(8));
  CHECK(a.matrices[0] == b.matrices[0]);
}

TEST_CASE("estimation error paths") {
  DiagonalGmm ubm = TestUbm(3, 8, 3);
  CHECK_THROWS_KIND(EstimateMllr(ubm, Matrix(0, 3), RegressionClassMap::Global(8)),
                    ErrorKind::kTooFewFrames);
  CHECK_THROWS_KIND(EstimateMllr(ubm, Matrix::Zero(10, 4), RegressionClassMap::Global(8)),
                    ErrorKind::kDimensionMismatch);
  RandomStream rng(4);
  Matrix frames = SampleFrames(ubm, Matrix::Identity(3, 3), Vector::Zero(3), 5000, &rng);
  CHECK_THROWS_KIND(EstimateMllr(ubm, frames, RegressionClassMap::Global(7)),
                    ErrorKind::kDimensionMismatch);
}

}  // namespace mvsv
