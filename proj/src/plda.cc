// src/plda.cc

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

#include "mvsv/plda.h"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "mvsv/efr.h"
#include "mvsv/error.h"
#include "mvsv/projections.h"
#include "mvsv/random.h"

namespace mvsv {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

struct SpdFactor {
  Matrix inverse;
  double logdet = 0.0;
};

SpdFactor FactorSpd(const Matrix &m, const char *what) {
  SpdFactor f;
  const long n = m.rows();
  if (n == 0) {
    f.inverse.resize(0, 0);
    return f;
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << what << " is not positive definite";
    throw Error(ErrorKind::kSingularCovariance, os.str());
  }
  f.logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  Matrix inv = llt.solve(Matrix::Identity(n, n));
  f.inverse = 0.5 * (inv + inv.transpose());
  return f;
}

void CheckTrainingData(const Matrix &rows, std::span<const int> labels,
                       const std::map<int, std::vector<long>> &groups) {
  CheckDim(static_cast<long>(labels.size()), rows.rows(), "PLDA labels");
  if (groups.size() < 2)
    throw Error(ErrorKind::kTooFewSpeakers, "PLDA needs >= 2 speakers");
  bool multi = false;
  for (const auto &g : groups) multi = multi || g.second.size() >= 2;
  if (!multi)
    throw Error(ErrorKind::kTooFewSpeakers,
                "PLDA needs a speaker with >= 2 sessions");
}

// Quantities of the per-speaker posterior that depend only on the model and
// the session count n.
struct PosteriorTerms {
  Matrix s_inv;       // Cov[y]
  Matrix cov_yz;      // Cov[y, z_i]
  Matrix cov_zz;      // Cov[z_i]
  double logdet = 0;  // log |posterior precision|
};

class PldaPosterior {
 public:
  explicit PldaPosterior(const PldaModel &m) : model_(m) {
    inv_lambda_ = m.lambda.cwiseInverse();
    phi_scaled_ = inv_lambda_.asDiagonal() * m.phi;      // Lambda^{-1} Phi
    gamma_scaled_ = inv_lambda_.asDiagonal() * m.gamma;  // Lambda^{-1} Gamma
    const long qc = m.gamma.cols();
    ftf_ = m.phi.transpose() * phi_scaled_;
    b_ = m.phi.transpose() * gamma_scaled_;
    Matrix c = Matrix::Identity(qc, qc) + m.gamma.transpose() * gamma_scaled_;
    SpdFactor cf = FactorSpd(c, "PLDA channel precision");
    c_inv_ = cf.inverse;
    c_logdet_ = cf.logdet;
    b_cinv_ = b_ * c_inv_;
  }

  const PosteriorTerms &Terms(int n) {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    const long qs = model_.phi.cols();
    PosteriorTerms t;
    Matrix s = Matrix::Identity(qs, qs) + n * ftf_ - n * b_cinv_ * b_.transpose();
    SpdFactor sf = FactorSpd(0.5 * (s + s.transpose()), "PLDA speaker precision");
    t.s_inv = sf.inverse;
    t.cov_yz = -t.s_inv * b_cinv_;
    t.cov_zz = c_inv_ + b_cinv_.transpose() * t.s_inv * b_cinv_;
    t.logdet = n * c_logdet_ + sf.logdet;
    return cache_.emplace(n, std::move(t)).first->second;
  }

  // x holds the speaker's mean-removed sessions as columns (N x n).
  void Infer(const Matrix &x, Vector *ey, Matrix *ez, double *b_dot_h) {
    const int n = static_cast<int>(x.cols());
    const PosteriorTerms &t = Terms(n);
    Vector by = phi_scaled_.transpose() * x.rowwise().sum();
    Matrix bz = gamma_scaled_.transpose() * x;  // q_c x n
    *ey = t.s_inv * (by - b_cinv_ * bz.rowwise().sum());
    *ez = c_inv_ * (bz - (b_.transpose() * *ey).replicate(1, n));
    *b_dot_h = by.dot(*ey) + (bz.array() * ez->array()).sum();
  }

  const Vector &inv_lambda() const { return inv_lambda_; }
  double LogDetLambda() const { return model_.lambda.array().log().sum(); }

 private:
  const PldaModel &model_;
  Vector inv_lambda_;
  Matrix phi_scaled_, gamma_scaled_;
  Matrix ftf_, b_, c_inv_, b_cinv_;
  double c_logdet_ = 0.0;
  std::map<int, PosteriorTerms> cache_;
};

Matrix SpeakerColumns(const Matrix &rows, const std::vector<long> &idx,
                      const Vector &mu) {
  Matrix x(rows.cols(), idx.size());
  for (size_t j = 0; j < idx.size(); j++) x.col(j) = rows.row(idx[j]).transpose() - mu;
  return x;
}

}  // namespace

Matrix PldaModel::TotalCovariance() const {
  Matrix t = phi * phi.transpose() + gamma * gamma.transpose();
  t.diagonal() += lambda;
  return t;
}

Matrix PldaModel::AcrossCovariance() const { return phi * phi.transpose(); }

void PldaModel::Check() const {
  const long n = mu.size();
  if (n == 0 || phi.rows() != n || gamma.rows() != n || lambda.size() != n)
    throw Error(ErrorKind::kDimensionError, "inconsistent PLDA model shapes");
  if (!(lambda.array() > 0.0).all())
    throw Error(ErrorKind::kDimensionError, "PLDA residual variances must be positive");
}

PldaScorer::PldaScorer(const PldaModel &model) : mu_(model.mu) {
  model.Check();
  Matrix t = model.TotalCovariance();
  Matrix c = model.AcrossCovariance();
  SpdFactor tf = FactorSpd(t, "PLDA total covariance");
  SpdFactor plus = FactorSpd(t + c, "PLDA joint covariance");
  SpdFactor minus = FactorSpd(t - c, "PLDA joint covariance");
  Matrix ja = 0.5 * (plus.inverse + minus.inverse);
  Matrix jb = 0.5 * (plus.inverse - minus.inverse);
  q_ = tf.inverse - ja;
  p_ = -jb;
  offset_ = tf.logdet - 0.5 * (plus.logdet + minus.logdet);
}

double PldaScorer::Score(const Vector &w1, const Vector &w2) const {
  CheckDim(w1.size(), mu_.size(), "PLDA score input");
  CheckDim(w2.size(), mu_.size(), "PLDA score input");
  Vector d1 = w1 - mu_, d2 = w2 - mu_;
  double self = d1.dot(q_ * d1) + d2.dot(q_ * d2);
  double cross = 0.5 * (d1.dot(p_ * d2) + d2.dot(p_ * d1));
  return 0.5 * self + cross + offset_;
}

PldaModel InitPlda(const Matrix &rows, int speaker_dim, int channel_dim,
                   uint64_t seed) {
  const int n = static_cast<int>(rows.cols());
  if (speaker_dim < 0 || channel_dim < 0 || speaker_dim > n || channel_dim > n) {
    std::ostringstream os;
    os << "PLDA factor dims (" << speaker_dim << "," << channel_dim
       << ") do not fit input dim " << n;
    throw Error(ErrorKind::kDimensionError, os.str());
  }
  PldaModel m;
  Matrix cov = Covariance(rows, &m.mu);
  m.lambda = cov.diagonal().cwiseMax(1e-10);
  double scale = std::sqrt(m.lambda.mean());
  RandomStream rng(seed);
  if (speaker_dim + channel_dim <= n) {
    Matrix basis = RandomOrthonormal(&rng, n, speaker_dim + channel_dim) * scale;
    m.phi = basis.leftCols(speaker_dim);
    m.gamma = basis.rightCols(channel_dim);
  } else {
    // Subspaces cannot be mutually orthogonal; draw each one separately.
    RandomStream phi_rng = rng.Derive(1), gamma_rng = rng.Derive(2);
    m.phi = RandomOrthonormal(&phi_rng, n, speaker_dim) * scale;
    m.gamma = RandomOrthonormal(&gamma_rng, n, channel_dim) * scale;
  }
  return m;
}

PldaModel PldaEmIteration(const PldaModel &model, const Matrix &rows,
                          std::span<const int> labels) {
  model.Check();
  CheckDim(rows.cols(), model.Dim(), "PLDA input");
  auto groups = GroupByLabel(labels);
  CheckTrainingData(rows, labels, groups);
  const long n = model.Dim(), qs = model.SpeakerDim(), qc = model.ChannelDim();
  const long q = qs + qc;

  PldaPosterior post(model);
  Matrix r_hh = Matrix::Zero(q, q);
  Matrix r_xh = Matrix::Zero(n, q);
  Vector sq = Vector::Zero(n);
  long total = 0;
  for (const auto &[label, idx] : groups) {
    Matrix x = SpeakerColumns(rows, idx, model.mu);
    const int ns = static_cast<int>(idx.size());
    Vector ey;
    Matrix ez;
    double unused;
    post.Infer(x, &ey, &ez, &unused);
    const PosteriorTerms &t = post.Terms(ns);

    // Sum over sessions of E[h h^T] with h = [y; z_i].
    r_hh.topLeftCorner(qs, qs) += ns * (t.s_inv + ey * ey.transpose());
    Matrix yz = ns * t.cov_yz + ey * ez.rowwise().sum().transpose();
    r_hh.topRightCorner(qs, qc) += yz;
    r_hh.bottomLeftCorner(qc, qs) += yz.transpose();
    r_hh.bottomRightCorner(qc, qc) += ns * t.cov_zz + ez * ez.transpose();

    r_xh.leftCols(qs) += x.rowwise().sum() * ey.transpose();
    r_xh.rightCols(qc) += x * ez.transpose();
    sq += x.rowwise().squaredNorm();
    total += ns;
  }

  PldaModel next;
  next.mu = model.mu;
  Matrix w(n, q);
  if (q > 0) {
    r_hh = 0.5 * (r_hh + r_hh.transpose());
    w = r_hh.llt().solve(r_xh.transpose()).transpose();
  }
  next.phi = w.leftCols(qs);
  next.gamma = w.rightCols(qc);
  Vector explained = (w.array() * r_xh.array()).rowwise().sum().matrix();
  next.lambda = ((sq - explained) / static_cast<double>(total)).cwiseMax(1e-10);
  return next;
}

double PldaLogLikelihood(const PldaModel &model, const Matrix &rows,
                         std::span<const int> labels) {
  model.Check();
  CheckDim(rows.cols(), model.Dim(), "PLDA input");
  CheckDim(static_cast<long>(labels.size()), rows.rows(), "PLDA labels");
  auto groups = GroupByLabel(labels);
  PldaPosterior post(model);
  const double dim = model.Dim(), logdet_lambda = post.LogDetLambda();
  double total = 0.0;
  for (const auto &[label, idx] : groups) {
    Matrix x = SpeakerColumns(rows, idx, model.mu);
    const double ns = static_cast<double>(idx.size());
    Vector ey;
    Matrix ez;
    double b_dot_h = 0.0;
    post.Infer(x, &ey, &ez, &b_dot_h);
    double quad = (x.array().square().colwise() * post.inv_lambda().array()).sum() -
                  b_dot_h;
    double logdet = ns * logdet_lambda + post.Terms(static_cast<int>(idx.size())).logdet;
    total += -0.5 * (ns * dim * kLog2Pi + logdet + quad);
  }
  return total;
}

PldaModel FitPlda(const Matrix &rows, std::span<const int> labels,
                  int speaker_dim, int channel_dim, const PldaTrainOptions &opts,
                  std::vector<double> *loglike_trace) {
  CheckTrainingData(rows, labels, GroupByLabel(labels));
  PldaModel model = InitPlda(rows, speaker_dim, channel_dim, opts.seed);
  if (loglike_trace) {
    loglike_trace->clear();
    loglike_trace->push_back(PldaLogLikelihood(model, rows, labels));
  }
  for (int it = 0; it < opts.iters; it++) {
    model = PldaEmIteration(model, rows, labels);
    if (loglike_trace) loglike_trace->push_back(PldaLogLikelihood(model, rows, labels));
  }
  return model;
}

}  // namespace mvsv
