// mvsv/error.h

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

#ifndef MVSV_ERROR_H_
#define MVSV_ERROR_H_

#include <stdexcept>
#include <string>

namespace mvsv {

enum class ErrorKind {
  kTooFewFrames,
  kDegenerateDimension,
  kDimensionMismatch,
  kZeroOccupancy,
  kSingularNormalEquations,
  kWindowTooLarge,
  kOddWindow,
  kTooFewSubvectors,
  kRankDeficient,
  kTooFewClasses,
  kNoWithinSpeakerVariation,
  kSingularCovariance,
  kZeroVector,
  kTooFewSpeakers,
  kDimensionError,
  kUnknownId,
  kTrialMismatch,
  kSessionMismatch,
  kEmptyClass,
  kInvalidSpec,
  kUsage,
  kFormat,
  kIo,
};

/// Name used in machine-readable error lines, e.g. "ZeroOccupancy".
const char *ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Throws kDimensionMismatch unless got == expected.
void CheckDim(long got, long expected, const char *what);

}  // namespace mvsv

#endif  // MVSV_ERROR_H_
