// mvsv/random.h

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

#ifndef MVSV_RANDOM_H_
#define MVSV_RANDOM_H_

#include <cstdint>
#include <initializer_list>

#include "mvsv/types.h"

namespace mvsv {

/// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

/**
   Counter-based pseudo-random stream.

   Draw i (0-based) of a stream with key k is Mix64(k + (i + 1) * G), where
   G = 0x9E3779B97F4A7C15 and Mix64 is the SplitMix64 finalizer.  A substream
   for tag t has key Mix64(k ^ Mix64(t + G)); derivation is purely functional,
   so a (seed, speaker, session) triple always names the same stream no matter
   how work is scheduled.

   Uniform() maps the top 53 bits of a draw to (0, 1) as (b + 0.5) / 2^53.
   Gaussian() is Box-Muller on two consecutive uniforms, cosine branch only.
   Matrix fills are row-major in draw order.
*/
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : key_(Mix64(seed)), counter_(0) {}

  RandomStream Derive(uint64_t tag) const;
  RandomStream Derive(std::initializer_list<uint64_t> tags) const;

  uint64_t NextU64();
  double Uniform();
  double Gaussian();
  /// Uniform integer in [0, n).
  int UniformInt(int n);

  Vector GaussianVector(int n);
  Matrix GaussianMatrix(int rows, int cols);

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  RandomStream(uint64_t key, bool) : key_(key), counter_(0) {}
  uint64_t key_;
  uint64_t counter_;
};

/// Random matrix with orthonormal columns (Gram-Schmidt on Gaussian draws).
Matrix RandomOrthonormal(RandomStream *rng, int rows, int cols);

}  // namespace mvsv

#endif  // MVSV_RANDOM_H_
