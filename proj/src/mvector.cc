// src/mvector.cc

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

#include "mvsv/mvector.h"

#include <sstream>

#include "mvsv/error.h"

namespace mvsv {

WindowPlan PlanWindows(int super_dim, int window) {
  if (window <= 0) {
    std::ostringstream os;
    os << "window must be positive, got " << window;
    throw Error(ErrorKind::kInvalidSpec, os.str());
  }
  if (window > super_dim) {
    std::ostringstream os;
    os << "window " << window << " does not fit super-vector of dim " << super_dim;
    throw Error(ErrorKind::kWindowTooLarge, os.str());
  }
  if (window % 2 != 0) {
    std::ostringstream os;
    os << "window " << window << " is odd";
    throw Error(ErrorKind::kOddWindow, os.str());
  }
  WindowPlan plan;
  plan.super_dim = super_dim;
  plan.window = window;
  plan.hop = window / 2;
  for (int off = 0; off + window <= super_dim; off += plan.hop)
    plan.offsets.push_back(off);
  if (plan.offsets.back() + window < super_dim)
    plan.offsets.push_back(super_dim - window);
  return plan;
}

Vector SliceWindow(const WindowPlan &plan, const Vector &v, int i) {
  CheckDim(v.size(), plan.super_dim, "super-vector");
  return v.segment(plan.offsets.at(i), plan.window);
}

MVectorSet Segment(const SuperVector &sv, int window) {
  MVectorSet set;
  set.plan = PlanWindows(static_cast<int>(sv.values.size()), window);
  for (int i = 0; i < set.plan.NumWindows(); i++)
    set.subvectors.push_back(SliceWindow(set.plan, sv.values, i));
  set.speaker_id = sv.speaker_id;
  set.session_id = sv.session_id;
  return set;
}

std::vector<Vector> CrossMVectors(const MVectorSet &set) {
  const int n = static_cast<int>(set.subvectors.size());
  if (n < 2)
    throw Error(ErrorKind::kTooFewSubvectors, "cross m-vectors need >= 2 subvectors");
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; i++) {
    for (int j = i + 1; j < n; j++) {
      Vector pair(set.subvectors[i].size() + set.subvectors[j].size());
      pair << set.subvectors[i], set.subvectors[j];
      out.push_back(std::move(pair));
    }
  }
  return out;
}

}  // namespace mvsv
