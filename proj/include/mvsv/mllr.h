// mvsv/mllr.h

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

#ifndef MVSV_MLLR_H_
#define MVSV_MLLR_H_

#include <string>
#include <vector>

#include "mvsv/gmm.h"
#include "mvsv/types.h"

namespace mvsv {

/// Assignment of mixture components to regression classes.
class RegressionClassMap {
 public:
  RegressionClassMap() = default;
  /// Throws kInvalidSpec unless every class in [0, K) has a component.
  RegressionClassMap(std::vector<int> class_of_component, int num_classes);

  /// All components in class 0.
  static RegressionClassMap Global(int num_components);

  int NumClasses() const { return num_classes_; }
  int NumComponents() const { return static_cast<int>(class_of_component_.size()); }
  int ClassOf(int component) const { return class_of_component_[component]; }
  const std::vector<int> &class_of_component() const { return class_of_component_; }

 private:
  std::vector<int> class_of_component_;
  int num_classes_ = 0;
};

/// One D x D matrix per regression class.  There is no bias term.
struct MllrTransform {
  std::vector<Matrix> matrices;

  int NumClasses() const { return static_cast<int>(matrices.size()); }
  int Dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
};

struct MllrOptions {
  int iterations = 1;
  /// Minimum class occupancy; a negative value means 10 * D.
  double min_class_occupancy = -1.0;
  double ridge = 1e-8;
  double max_condition = 1e12;
};

/**
   Row-wise ML estimate of A_c for each class c.  For row i of A_c:
     G_i = sum_{s in c} gamma_s / var_{s,i} mu_s mu_s^T
     k_i = sum_{s in c} F_{s,i} / var_{s,i} mu_s
     a_i = G_i^{-1} k_i
   where gamma_s and F_s are the zero- and first-order statistics.  The first
   iteration aligns frames against the unadapted UBM; later iterations
   realign against the adapted means A_c mu_s.
*/
MllrTransform EstimateMllr(const DiagonalGmm &gmm, const Matrix &frames,
                           const RegressionClassMap &map,
                           const MllrOptions &opts = MllrOptions());

struct SuperVector {
  Vector values;
  std::string speaker_id;
  std::string session_id;
};

/// Row-major flattening of each A_c, classes in ascending index.
SuperVector BuildSuperVector(const MllrTransform &transform,
                             const std::string &speaker_id,
                             const std::string &session_id);

MllrTransform UnstackSuperVector(const Vector &values, int num_classes, int dim);

}  // namespace mvsv

#endif  // MVSV_MLLR_H_
