// tests/test-util.h

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

#ifndef MVSV_TESTS_TEST_UTIL_H_
#define MVSV_TESTS_TEST_UTIL_H_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include "mvsv/error.h"
#include "mvsv/types.h"

namespace mvsv {
namespace testing {

/// Largest principal angle, in degrees, between the column spans of a and b.
inline double MaxPrincipalAngleDeg(const Matrix &a, const Matrix &b) {
  Matrix qa = Eigen::HouseholderQR<Matrix>(a).householderQ() *
              Matrix::Identity(a.rows(), a.cols());
  Matrix qb = Eigen::HouseholderQR<Matrix>(b).householderQ() *
              Matrix::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<Matrix> svd(qa.transpose() * qb);
  double smallest = svd.singularValues().minCoeff();
  return std::acos(std::min(1.0, smallest)) * 180.0 / M_PI;
}

inline double RelFrobError(const Matrix &estimate, const Matrix &truth) {
  return (estimate - truth).norm() / truth.norm();
}

/// Fresh empty directory under the build tree's temp area.
inline std::string ScratchDir(const std::string &name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("mvsv-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace testing
}  // namespace mvsv

/// CHECK that `expr` throws mvsv::Error of the given kind.
#define CHECK_THROWS_KIND(expr, expected_kind)                              \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      (void)(expr);                                                         \
    } catch (const ::mvsv::Error &e_) {                                     \
      thrown_ = true;                                                       \
      CHECK_MESSAGE(e_.kind() == (expected_kind), ::mvsv::ErrorKindName(e_.kind())); \
    }                                                                       \
    CHECK_MESSAGE(thrown_, "no mvsv::Error thrown by " #expr);              \
  } while (0)

#endif  // MVSV_TESTS_TEST_UTIL_H_
