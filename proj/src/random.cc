// src/random.cc

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

#include "mvsv/random.h"

#include <cmath>
#include <numbers>

namespace mvsv {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

uint64_t Mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::Derive(uint64_t tag) const {
  return RandomStream(Mix64(key_ ^ Mix64(tag + kGolden)), true);
}

RandomStream RandomStream::Derive(std::initializer_list<uint64_t> tags) const {
  RandomStream s = *this;
  for (uint64_t t : tags) s = s.Derive(t);
  return s;
}

uint64_t RandomStream::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGolden);
}

double RandomStream::Uniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::Gaussian() {
  double u1 = Uniform(), u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int RandomStream::UniformInt(int n) {
  int k = static_cast<int>(Uniform() * n);
  return k < n ? k : n - 1;
}

Vector RandomStream::GaussianVector(int n) {
  Vector v(n);
  for (int i = 0; i < n; i++) v(i) = Gaussian();
  return v;
}

Matrix RandomStream::GaussianMatrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; r++)
    for (int c = 0; c < cols; c++) m(r, c) = Gaussian();
  return m;
}

Matrix RandomOrthonormal(RandomStream *rng, int rows, int cols) {
  Matrix q = rng->GaussianMatrix(rows, cols);
  // Modified Gram-Schmidt, two passes for stability.
  for (int pass = 0; pass < 2; pass++) {
    for (int j = 0; j < cols; j++) {
      for (int k = 0; k < j; k++) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      q.col(j).normalize();
    }
  }
  return q;
}

}  // namespace mvsv
