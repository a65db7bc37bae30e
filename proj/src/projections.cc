// src/projections.cc

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

#include "mvsv/projections.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mvsv/error.h"

namespace mvsv {

std::map<int, std::vector<long>> GroupByLabel(std::span<const int> labels) {
  std::map<int, std::vector<long>> groups;
  for (size_t i = 0; i < labels.size(); i++)
    groups[labels[i]].push_back(static_cast<long>(i));
  return groups;
}

void SortedEigen(const Matrix &sym, Vector *values, Matrix *vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::kSingularCovariance, "eigendecomposition failed");
  const long n = sym.rows();
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vector &ev = eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&ev](long a, long b) { return ev(a) > ev(b); });
  values->resize(n);
  vectors->resize(n, n);
  for (long i = 0; i < n; i++) {
    (*values)(i) = ev(order[i]);
    vectors->col(i) = eig.eigenvectors().col(order[i]);
  }
}

void NormalizeColumnSigns(Matrix *m) {
  for (long j = 0; j < m->cols(); j++) {
    Eigen::Index idx = 0;
    m->col(j).cwiseAbs().maxCoeff(&idx);
    if ((*m)(idx, j) < 0.0) m->col(j) *= -1.0;
  }
}

Vector MeanVarNorm::Apply(const Vector &v) const {
  CheckDim(v.size(), mean.size(), "mean/var input");
  return ((v - mean).array() / std.array()).matrix();
}

Matrix MeanVarNorm::ApplyRows(const Matrix &rows) const {
  CheckDim(rows.cols(), mean.size(), "mean/var input");
  return ((rows.rowwise() - mean.transpose()).array().rowwise() /
          std.transpose().array()).matrix();
}

MeanVarNorm FitMeanVar(const Matrix &rows) {
  if (rows.rows() < 2)
    throw Error(ErrorKind::kTooFewFrames, "mean/var normalization needs >= 2 vectors");
  MeanVarNorm norm;
  norm.mean = rows.colwise().mean().transpose();
  Matrix centered = rows.rowwise() - norm.mean.transpose();
  norm.std = (centered.array().square().colwise().sum() /
              static_cast<double>(rows.rows() - 1)).sqrt().transpose();
  for (long i = 0; i < norm.std.size(); i++) {
    if (!(norm.std(i) >= 1e-12)) {
      norm.std(i) = 1.0;
      norm.clamped_dims.push_back(static_cast<int>(i));
    }
  }
  return norm;
}

Vector PcaModel::Project(const Vector &v) const {
  CheckDim(v.size(), mean.size(), "PCA input");
  return basis.transpose() * (v - mean);
}

Matrix PcaModel::ProjectRows(const Matrix &rows) const {
  CheckDim(rows.cols(), mean.size(), "PCA input");
  return (rows.rowwise() - mean.transpose()) * basis;
}

PcaModel FitPca(const Matrix &rows, int q) {
  const long n = rows.rows(), dim = rows.cols();
  if (q < 1 || q > dim || q > n - 1) {
    std::ostringstream os;
    os << "PCA dim " << q << " exceeds min(N=" << dim << ", count-1=" << n - 1 << ")";
    throw Error(ErrorKind::kRankDeficient, os.str());
  }
  PcaModel model;
  model.mean = rows.colwise().mean().transpose();
  Matrix centered = rows.rowwise() - model.mean.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Matrix vecs;
  SortedEigen(cov, &model.eigenvalues, &vecs);
  double tol = std::max(dim, n) * std::numeric_limits<double>::epsilon() *
               std::max(model.eigenvalues(0), 0.0);
  if (!(model.eigenvalues(q - 1) > tol)) {
    std::ostringstream os;
    os << "PCA dim " << q << " exceeds covariance rank";
    throw Error(ErrorKind::kRankDeficient, os.str());
  }
  model.basis = vecs.leftCols(q);
  NormalizeColumnSigns(&model.basis);
  return model;
}

Vector LdaModel::Project(const Vector &v) const {
  CheckDim(v.size(), mean.size(), "LDA input");
  return basis.transpose() * (v - mean);
}

Matrix LdaModel::ProjectRows(const Matrix &rows) const {
  CheckDim(rows.cols(), mean.size(), "LDA input");
  return (rows.rowwise() - mean.transpose()) * basis;
}

LdaModel FitLda(const Matrix &rows, std::span<const int> labels, int q,
                double ridge) {
  CheckDim(static_cast<long>(labels.size()), rows.rows(), "LDA labels");
  const long n = rows.rows(), dim = rows.cols();
  auto groups = GroupByLabel(labels);
  if (groups.size() < 2)
    throw Error(ErrorKind::kTooFewClasses, "LDA needs >= 2 classes");
  if (q < 1 || q > dim) {
    std::ostringstream os;
    os << "LDA dim " << q << " out of range for input dim " << dim;
    throw Error(ErrorKind::kRankDeficient, os.str());
  }
  LdaModel model;
  model.mean = rows.colwise().mean().transpose();
  Matrix sw = Matrix::Zero(dim, dim), sb = Matrix::Zero(dim, dim);
  for (const auto &[label, idx] : groups) {
    Matrix members(idx.size(), dim);
    for (size_t i = 0; i < idx.size(); i++) members.row(i) = rows.row(idx[i]);
    Vector class_mean = members.colwise().mean().transpose();
    Matrix centered = members.rowwise() - class_mean.transpose();
    sw.noalias() += centered.transpose() * centered;
    Vector diff = class_mean - model.mean;
    sb.noalias() += static_cast<double>(idx.size()) * diff * diff.transpose();
  }
  sw /= static_cast<double>(n);
  sb /= static_cast<double>(n);
  // Zero within-class scatter (identical vectors per class) falls back to a
  // ridge scaled by the between-class scatter.
  double scale = sw.trace() / dim;
  if (!(scale > 0.0)) scale = sb.trace() > 0.0 ? sb.trace() / dim : 1.0;
  Matrix b = sw;
  b.diagonal().array() += ridge * scale;

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(sb, b);
  if (ges.info() != Eigen::Success)
    throw Error(ErrorKind::kRankDeficient,
                "within-class scatter is singular; increase the LDA ridge");
  const Vector &ev = ges.eigenvalues();
  std::vector<long> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&ev](long a, long c) { return ev(a) > ev(c); });
  model.basis.resize(dim, q);
  model.eigenvalues.resize(q);
  for (int j = 0; j < q; j++) {
    model.basis.col(j) = ges.eigenvectors().col(order[j]);
    model.eigenvalues(j) = ev(order[j]);
  }
  NormalizeColumnSigns(&model.basis);
  return model;
}

PpcaNapModel::PpcaNapModel(Matrix u) : u_(std::move(u)) {
  const long q = u_.cols();
  Matrix p = Matrix::Identity(q, q) + u_.transpose() * u_;
  estimator_ = p.llt().solve(u_.transpose());
}

Vector PpcaNapModel::PointEstimate(const Vector &o) const {
  CheckDim(o.size(), u_.rows(), "PPCA-NAP input");
  return estimator_ * o;
}

Vector PpcaNapModel::Project(const Vector &v) const {
  return v - u_ * PointEstimate(v);
}

Matrix PpcaNapModel::ProjectRows(const Matrix &rows) const {
  CheckDim(rows.cols(), u_.rows(), "PPCA-NAP input");
  return rows - (rows * estimator_.transpose()) * u_.transpose();
}

double PpcaLogLikelihood(const Matrix &u, const Matrix &rows) {
  const long q = u.cols(), n = rows.rows(), dim = rows.cols();
  Matrix p = Matrix::Identity(q, q) + u.transpose() * u;
  Eigen::LLT<Matrix> llt(p);
  double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  Matrix proj = rows * u;  // n x q, rows of U^T o
  double quad = rows.squaredNorm() -
                (proj.transpose().array() * llt.solve(proj.transpose()).array()).sum();
  return -0.5 * (n * dim * std::log(2.0 * std::numbers::pi) + n * logdet + quad);
}

Matrix CenterPerSpeaker(const Matrix &rows, std::span<const int> labels) {
  CheckDim(static_cast<long>(labels.size()), rows.rows(), "speaker labels");
  auto groups = GroupByLabel(labels);
  long used = 0;
  for (const auto &g : groups)
    if (g.second.size() >= 2) used += static_cast<long>(g.second.size());
  if (used == 0)
    throw Error(ErrorKind::kNoWithinSpeakerVariation,
                "every speaker has a single session");
  Matrix out(used, rows.cols());
  long pos = 0;
  for (const auto &[label, idx] : groups) {
    if (idx.size() < 2) continue;
    Vector mean = Vector::Zero(rows.cols());
    for (long i : idx) mean += rows.row(i).transpose();
    mean /= static_cast<double>(idx.size());
    for (long i : idx) out.row(pos++) = rows.row(i) - mean.transpose();
  }
  return out;
}

PpcaNapModel FitPpcaNap(const Matrix &rows, std::span<const int> labels, int q,
                        int iters, std::vector<double> *loglike_trace) {
  const long dim = rows.cols();
  if (q < 1 || q >= dim) {
    std::ostringstream os;
    os << "PPCA-NAP rank " << q << " must be in [1, " << dim << ")";
    throw Error(ErrorKind::kRankDeficient, os.str());
  }
  Matrix centered = CenterPerSpeaker(rows, labels);
  const double n = static_cast<double>(centered.rows());

  Vector evals;
  Matrix evecs;
  SortedEigen((centered.transpose() * centered) / n, &evals, &evecs);
  Matrix u = evecs.leftCols(q);
  for (int j = 0; j < q; j++) u.col(j) *= std::sqrt(std::max(evals(j), 1e-6));
  NormalizeColumnSigns(&u);

  if (loglike_trace) {
    loglike_trace->clear();
    loglike_trace->push_back(PpcaLogLikelihood(u, centered));
  }
  const Matrix obs = centered.transpose();  // N x n
  for (int it = 0; it < iters; it++) {
    Matrix p = Matrix::Identity(q, q) + u.transpose() * u;
    Eigen::LLT<Matrix> llt(p);
    Matrix p_inv = llt.solve(Matrix::Identity(q, q));
    Matrix ey = llt.solve(u.transpose() * obs);                  // q x n
    Matrix eyy = n * p_inv + ey * ey.transpose();                // sum E[y y^T]
    Matrix oy = obs * ey.transpose();                            // sum o E[y]^T
    u = eyy.llt().solve(oy.transpose()).transpose();
    if (loglike_trace) loglike_trace->push_back(PpcaLogLikelihood(u, centered));
  }
  return PpcaNapModel(u);
}

}  // namespace mvsv
