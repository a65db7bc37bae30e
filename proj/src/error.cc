// src/error.cc

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

#include "mvsv/error.h"

#include <sstream>

namespace mvsv {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTooFewFrames: return "TooFewFrames";
    case ErrorKind::kDegenerateDimension: return "DegenerateDimension";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kZeroOccupancy: return "ZeroOccupancy";
    case ErrorKind::kSingularNormalEquations: return "SingularNormalEquations";
    case ErrorKind::kWindowTooLarge: return "WindowTooLarge";
    case ErrorKind::kOddWindow: return "OddWindow";
    case ErrorKind::kTooFewSubvectors: return "TooFewSubvectors";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kTooFewClasses: return "TooFewClasses";
    case ErrorKind::kNoWithinSpeakerVariation: return "NoWithinSpeakerVariation";
    case ErrorKind::kSingularCovariance: return "SingularCovariance";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kTooFewSpeakers: return "TooFewSpeakers";
    case ErrorKind::kDimensionError: return "DimensionError";
    case ErrorKind::kUnknownId: return "UnknownId";
    case ErrorKind::kTrialMismatch: return "TrialMismatch";
    case ErrorKind::kSessionMismatch: return "SessionMismatch";
    case ErrorKind::kEmptyClass: return "EmptyClass";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kUsage: return "Usage";
    case ErrorKind::kFormat: return "Format";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

void CheckDim(long got, long expected, const char *what) {
  if (got != expected) {
    std::ostringstream os;
    os << what << ": dimension " << got << " != expected " << expected;
    throw Error(ErrorKind::kDimensionMismatch, os.str());
  }
}

}  // namespace mvsv
