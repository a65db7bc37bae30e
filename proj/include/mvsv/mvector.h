// mvsv/mvector.h

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

#ifndef MVSV_MVECTOR_H_
#define MVSV_MVECTOR_H_

#include <string>
#include <vector>

#include "mvsv/mllr.h"
#include "mvsv/types.h"

namespace mvsv {

/// Placement of the overlapped windows over a super-vector of length N.
struct WindowPlan {
  int super_dim = 0;
  int window = 0;
  int hop = 0;
  std::vector<int> offsets;

  int NumWindows() const { return static_cast<int>(offsets.size()); }
};

/**
   Offsets 0, W/2, 2(W/2), ... while offset + W <= N.  When the last of those
   windows stops short of N an extra window at N - W is appended, so every
   element is covered.  W must be even and 0 < W <= N.
*/
WindowPlan PlanWindows(int super_dim, int window);

struct MVectorSet {
  WindowPlan plan;
  std::vector<Vector> subvectors;
  std::string speaker_id;
  std::string session_id;
};

MVectorSet Segment(const SuperVector &sv, int window);

/// Slice of v for window index i of the plan.
Vector SliceWindow(const WindowPlan &plan, const Vector &v, int i);

/// [m_i | m_j] for all i < j in lexicographic order.
std::vector<Vector> CrossMVectors(const MVectorSet &set);

}  // namespace mvsv

#endif  // MVSV_MVECTOR_H_
