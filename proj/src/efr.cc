// src/efr.cc

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

#include "mvsv/efr.h"

#include <cmath>
#include <sstream>

#include "mvsv/error.h"
#include "mvsv/projections.h"

namespace mvsv {

namespace {

Vector ApplyStage(const LengthNormStage &stage, const Vector &v) {
  Vector centered = v - stage.mean;
  if (!(centered.norm() >= 1e-300))
    throw Error(ErrorKind::kZeroVector, "vector coincides with the stage mean");
  Vector w = stage.whitener * centered;
  double len = w.norm();
  if (!(len > 0.0))
    throw Error(ErrorKind::kZeroVector, "whitened vector has zero length");
  return w / len;
}

}  // namespace

Vector LengthNormalizer::Apply(const Vector &v) const {
  CheckDim(v.size(), Dim(), "length-norm input");
  Vector out = v;
  for (const LengthNormStage &stage : stages_) out = ApplyStage(stage, out);
  return out;
}

Matrix LengthNormalizer::ApplyRows(const Matrix &rows) const {
  Matrix out(rows.rows(), rows.cols());
  for (long i = 0; i < rows.rows(); i++)
    out.row(i) = Apply(rows.row(i).transpose()).transpose();
  return out;
}

Matrix InverseSqrtSym(const Matrix &cov) {
  Vector values;
  Matrix vectors;
  SortedEigen(cov, &values, &vectors);
  const double floor = 1e-10 * values(0);
  if (!(values(0) > 0.0))
    throw Error(ErrorKind::kSingularCovariance, "covariance is zero");
  Vector scale(values.size());
  for (long i = 0; i < values.size(); i++)
    scale(i) = 1.0 / std::sqrt(std::max(values(i), floor));
  Matrix w = vectors * scale.asDiagonal() * vectors.transpose();
  return 0.5 * (w + w.transpose());
}

Matrix Covariance(const Matrix &rows, Vector *mean) {
  Vector m = rows.colwise().mean().transpose();
  Matrix centered = rows.rowwise() - m.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(rows.rows());
  if (mean) *mean = m;
  return cov;
}

LengthNormalizer FitLengthNormalizer(const Matrix &rows, int iterations,
                                     Matrix *normalized) {
  if (rows.rows() < 2)
    throw Error(ErrorKind::kSingularCovariance, "length norm needs >= 2 vectors");
  std::vector<LengthNormStage> stages;
  Matrix current = rows;
  for (int k = 0; k < iterations; k++) {
    LengthNormStage stage;
    Matrix cov = Covariance(current, &stage.mean);
    stage.whitener = InverseSqrtSym(cov);
    for (long i = 0; i < current.rows(); i++)
      current.row(i) = ApplyStage(stage, current.row(i).transpose()).transpose();
    stages.push_back(std::move(stage));
  }
  if (normalized) *normalized = current;
  return LengthNormalizer(std::move(stages));
}

EfrModel FitEfr(const Matrix &rows, std::span<const int> labels, int iterations) {
  CheckDim(static_cast<long>(labels.size()), rows.rows(), "EFR labels");
  EfrModel model;
  Matrix normalized;
  model.normalizer = FitLengthNormalizer(rows, iterations, &normalized);

  Matrix centered = CenterPerSpeaker(normalized, labels);
  const long dim = rows.cols();
  Matrix omega = (centered.transpose() * centered) /
                 static_cast<double>(centered.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(omega, Eigen::EigenvaluesOnly);
  double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(dim - 1);
  if (!(hi > 0.0) || !(lo > 1e-10 * hi)) {
    double base = omega.trace() / dim;
    omega.diagonal().array() += 1e-6 * (base > 0.0 ? base : 1.0);
    model.omega_regularized = true;
  }
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::kSingularCovariance,
                "within-class covariance is singular after ridge");
  Matrix inv = llt.solve(Matrix::Identity(dim, dim));
  model.omega_inv = 0.5 * (inv + inv.transpose());
  return model;
}

double MahalanobisScore(const EfrModel &model, const Vector &a, const Vector &b) {
  CheckDim(a.size(), model.omega_inv.rows(), "EFR score input");
  CheckDim(b.size(), model.omega_inv.rows(), "EFR score input");
  Vector d = a - b;
  return -d.dot(model.omega_inv * d);
}

PldaPreprocessed PldaPreprocess(const Matrix &rows, int iterations) {
  PldaPreprocessed out;
  out.normalizer = FitLengthNormalizer(rows, iterations, &out.normalized);
  return out;
}

}  // namespace mvsv
