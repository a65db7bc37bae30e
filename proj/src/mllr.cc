// src/mllr.cc

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
#include <sstream>

#include "mvsv/error.h"

namespace mvsv {

RegressionClassMap::RegressionClassMap(std::vector<int> class_of_component,
                                       int num_classes)
    : class_of_component_(std::move(class_of_component)),
      num_classes_(num_classes) {
  if (num_classes_ < 1)
    throw Error(ErrorKind::kInvalidSpec, "regression class count must be >= 1");
  std::vector<int> count(num_classes_, 0);
  for (int c : class_of_component_) {
    if (c < 0 || c >= num_classes_)
      throw Error(ErrorKind::kInvalidSpec, "regression class index out of range");
    count[c]++;
  }
  for (int c = 0; c < num_classes_; c++) {
    if (count[c] == 0) {
      std::ostringstream os;
      os << "regression class " << c << " has no components";
      throw Error(ErrorKind::kInvalidSpec, os.str());
    }
  }
}

RegressionClassMap RegressionClassMap::Global(int num_components) {
  return RegressionClassMap(std::vector<int>(num_components, 0), 1);
}

namespace {

// Solves G a = k, adding ridge * tr(G)/D to the diagonal when G is
// ill-conditioned.
Vector SolveNormalEquations(const Matrix &g, const Vector &k,
                            const MllrOptions &opts, int cls, int row) {
  const long d = g.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(d - 1);
  Matrix sys = g;
  if (!(lo > 0.0) || hi / lo > opts.max_condition)
    sys.diagonal().array() += opts.ridge * g.trace() / d;
  Eigen::LLT<Matrix> llt(sys);
  Vector a;
  if (llt.info() == Eigen::Success) a = llt.solve(k);
  if (llt.info() != Eigen::Success || !a.allFinite()) {
    std::ostringstream os;
    os << "normal equations of class " << cls << " row " << row
       << " are singular after ridge";
    throw Error(ErrorKind::kSingularNormalEquations, os.str());
  }
  return a;
}

}  // namespace

MllrTransform EstimateMllr(const DiagonalGmm &gmm, const Matrix &frames,
                           const RegressionClassMap &map,
                           const MllrOptions &opts) {
  if (frames.rows() == 0)
    throw Error(ErrorKind::kTooFewFrames, "MLLR needs at least one frame");
  CheckDim(frames.cols(), gmm.Dim(), "frame");
  CheckDim(map.NumComponents(), gmm.NumComponents(), "regression class map");
  if (opts.iterations < 1)
    throw Error(ErrorKind::kInvalidSpec, "MLLR iterations must be >= 1");

  const int d = gmm.Dim(), m = gmm.NumComponents(), k = map.NumClasses();
  const double min_occ =
      opts.min_class_occupancy < 0.0 ? 10.0 * d : opts.min_class_occupancy;
  const Matrix &mu = gmm.means();
  const Matrix inv_var = gmm.variances().cwiseInverse();

  MllrTransform xform;
  xform.matrices.assign(k, Matrix::Identity(d, d));
  DiagonalGmm aligner = gmm;
  for (int iter = 0; iter < opts.iterations; iter++) {
    GmmStats stats = AccumulateStats(aligner, frames);
    for (int c = 0; c < k; c++) {
      double occ = 0.0;
      for (int s = 0; s < m; s++)
        if (map.ClassOf(s) == c) occ += stats.occupancy(s);
      if (occ < min_occ) {
        std::ostringstream os;
        os << "ZeroOccupancy(" << c << "): class occupancy " << occ
           << " below " << min_occ;
        throw Error(ErrorKind::kZeroOccupancy, os.str());
      }
      Matrix &a = xform.matrices[c];
      for (int i = 0; i < d; i++) {
        Matrix g = Matrix::Zero(d, d);
        Vector rhs = Vector::Zero(d);
        for (int s = 0; s < m; s++) {
          if (map.ClassOf(s) != c) continue;
          g.noalias() += (stats.occupancy(s) * inv_var(s, i)) *
                         (mu.row(s).transpose() * mu.row(s));
          rhs += (stats.first_order(s, i) * inv_var(s, i)) * mu.row(s).transpose();
        }
        a.row(i) = SolveNormalEquations(g, rhs, opts, c, i).transpose();
      }
    }
    if (iter + 1 < opts.iterations) {
      Matrix adapted(m, d);
      for (int s = 0; s < m; s++)
        adapted.row(s) = (xform.matrices[map.ClassOf(s)] * mu.row(s).transpose())
                             .transpose();
      aligner = gmm.WithMeans(adapted);
    }
  }
  return xform;
}

SuperVector BuildSuperVector(const MllrTransform &transform,
                             const std::string &speaker_id,
                             const std::string &session_id) {
  const int d = transform.Dim(), k = transform.NumClasses();
  SuperVector sv;
  sv.values.resize(static_cast<long>(k) * d * d);
  long pos = 0;
  for (const Matrix &a : transform.matrices)
    for (int r = 0; r < d; r++)
      for (int c = 0; c < d; c++) sv.values(pos++) = a(r, c);
  sv.speaker_id = speaker_id;
  sv.session_id = session_id;
  return sv;
}

MllrTransform UnstackSuperVector(const Vector &values, int num_classes, int dim) {
  CheckDim(values.size(), static_cast<long>(num_classes) * dim * dim, "super-vector");
  MllrTransform t;
  long pos = 0;
  for (int c = 0; c < num_classes; c++) {
    Matrix a(dim, dim);
    for (int r = 0; r < dim; r++)
      for (int j = 0; j < dim; j++) a(r, j) = values(pos++);
    t.matrices.push_back(std::move(a));
  }
  return t;
}

}  // namespace mvsv
