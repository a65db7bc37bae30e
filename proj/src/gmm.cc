// src/gmm.cc

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

#include "mvsv/gmm.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mvsv/error.h"
#include "mvsv/random.h"

namespace mvsv {

namespace {
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
}

DiagonalGmm::DiagonalGmm(Vector weights, Matrix means, Matrix variances)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      variances_(std::move(variances)) {
  CheckDim(means_.rows(), weights_.size(), "gmm means rows");
  CheckDim(variances_.rows(), means_.rows(), "gmm variances rows");
  CheckDim(variances_.cols(), means_.cols(), "gmm variances cols");
  if (weights_.size() == 0 || means_.cols() == 0)
    throw Error(ErrorKind::kDimensionError, "empty gmm");
  if ((weights_.array() < 0.0).any() || std::abs(weights_.sum() - 1.0) > 1e-10)
    throw Error(ErrorKind::kInvalidSpec, "gmm weights must be >= 0 and sum to 1");
  if (!(variances_.array() > 0.0).all() || !means_.allFinite())
    throw Error(ErrorKind::kInvalidSpec, "gmm variances must be positive");
  ComputeDerivedVars();
}

void DiagonalGmm::ComputeDerivedVars() {
  inv_vars_ = variances_.cwiseInverse();
  const int m = NumComponents(), d = Dim();
  log_consts_.resize(m);
  for (int s = 0; s < m; s++) {
    log_consts_(s) = std::log(weights_(s)) -
        0.5 * (d * kLog2Pi + variances_.row(s).array().log().sum());
  }
}

DiagonalGmm DiagonalGmm::WithMeans(Matrix means) const {
  CheckDim(means.rows(), means_.rows(), "adapted means rows");
  CheckDim(means.cols(), means_.cols(), "adapted means cols");
  DiagonalGmm out = *this;
  out.means_ = std::move(means);
  return out;
}

Matrix DiagonalGmm::ComponentLogLikes(const Matrix &frames) const {
  CheckDim(frames.cols(), Dim(), "frame");
  const int m = NumComponents(), d = Dim();
  const long t = frames.rows();
  Matrix ll(t, m);
  Eigen::ArrayXd acc(t);
  for (int s = 0; s < m; s++) {
    acc.setZero();
    for (int i = 0; i < d; i++)
      acc += (frames.col(i).array() - means_(s, i)).square() * inv_vars_(s, i);
    ll.col(s) = (log_consts_(s) - 0.5 * acc).matrix();
  }
  return ll;
}

Matrix DiagonalGmm::Responsibilities(const Matrix &frames,
                                     Vector *frame_loglikes) const {
  Matrix post = ComponentLogLikes(frames);
  if (frame_loglikes) frame_loglikes->resize(post.rows());
  for (long t = 0; t < post.rows(); t++) {
    double mx = post.row(t).maxCoeff();
    post.row(t) = (post.row(t).array() - mx).exp().matrix();
    double sum = post.row(t).sum();
    post.row(t) /= sum;
    if (frame_loglikes) (*frame_loglikes)(t) = mx + std::log(sum);
  }
  return post;
}

Vector DiagonalGmm::Responsibilities(const Vector &frame) const {
  Matrix one = frame.transpose();
  return Responsibilities(one).row(0).transpose();
}

double DiagonalGmm::LogLikelihood(const Matrix &frames) const {
  Vector ll;
  Responsibilities(frames, &ll);
  return ll.sum();
}

GmmStats AccumulateStats(const DiagonalGmm &gmm, const Matrix &frames) {
  CheckDim(frames.cols(), gmm.Dim(), "frame");
  GmmStats stats;
  stats.frame_count = frames.rows();
  if (frames.rows() == 0) {
    stats.occupancy = Vector::Zero(gmm.NumComponents());
    stats.first_order = Matrix::Zero(gmm.NumComponents(), gmm.Dim());
    return stats;
  }
  Matrix post = gmm.Responsibilities(frames);
  stats.occupancy = post.colwise().sum().transpose();
  stats.first_order = post.transpose() * frames;
  return stats;
}

namespace {

Matrix KMeansPlusPlusSeeds(const Matrix &frames, const Vector &global_var,
                           int num_components, RandomStream *rng) {
  const long t = frames.rows();
  const Eigen::ArrayXd scale = global_var.cwiseInverse().array();
  Matrix seeds(num_components, frames.cols());
  seeds.row(0) = frames.row(rng->UniformInt(static_cast<int>(t)));
  Eigen::ArrayXd dist(t);
  for (long i = 0; i < t; i++)
    dist(i) = ((frames.row(i) - seeds.row(0)).array().square().transpose() *
               scale).sum();
  for (int k = 1; k < num_components; k++) {
    double total = dist.sum();
    if (!(total > 0.0)) {
      std::ostringstream os;
      os << "fewer than " << num_components << " distinct frames";
      throw Error(ErrorKind::kTooFewFrames, os.str());
    }
    double target = rng->Uniform() * total, run = 0.0;
    long pick = t - 1;
    for (long i = 0; i < t; i++) {
      run += dist(i);
      if (run >= target && dist(i) > 0.0) { pick = i; break; }
    }
    while (dist(pick) == 0.0) pick--;  // only reachable through rounding at the tail
    seeds.row(k) = frames.row(pick);
    for (long i = 0; i < t; i++) {
      double d = ((frames.row(i) - seeds.row(k)).array().square().transpose() *
                  scale).sum();
      if (d < dist(i)) dist(i) = d;
    }
  }
  return seeds;
}

}  // namespace

DiagonalGmm TrainUbm(const Matrix &frames, int num_components,
                     const GmmTrainOptions &opts,
                     std::vector<double> *loglike_trace) {
  const long t = frames.rows();
  const int d = static_cast<int>(frames.cols());
  if (num_components < 1) throw Error(ErrorKind::kInvalidSpec, "M must be >= 1");
  if (d < 1) throw Error(ErrorKind::kDimensionError, "feature dimension must be >= 1");
  if (t < num_components) {
    std::ostringstream os;
    os << t << " frames for " << num_components << " components";
    throw Error(ErrorKind::kTooFewFrames, os.str());
  }
  Vector global_mean = frames.colwise().mean().transpose();
  Vector global_var =
      (frames.rowwise() - global_mean.transpose()).array().square().colwise().mean()
          .transpose();
  for (int i = 0; i < d; i++) {
    if (!(global_var(i) > 0.0)) {
      std::ostringstream os;
      os << "feature dimension " << i << " is constant";
      throw Error(ErrorKind::kDegenerateDimension, os.str());
    }
  }
  const Vector floor = opts.var_floor_fraction * global_var;

  RandomStream rng(opts.seed);
  Matrix means = num_components == 1
      ? Matrix(global_mean.transpose())
      : KMeansPlusPlusSeeds(frames, global_var, num_components, &rng);
  Matrix vars = global_var.transpose().replicate(num_components, 1);
  Vector weights = Vector::Constant(num_components, 1.0 / num_components);
  DiagonalGmm gmm(weights, means, vars);

  if (loglike_trace) loglike_trace->clear();
  for (int iter = 0; iter <= opts.max_em_iters; iter++) {
    Vector frame_ll;
    Matrix post = gmm.Responsibilities(frames, &frame_ll);
    if (loglike_trace) loglike_trace->push_back(frame_ll.sum());
    if (iter == opts.max_em_iters) break;

    Vector occ = post.colwise().sum().transpose();
    Matrix new_means = gmm.means(), new_vars = gmm.variances();
    for (int s = 0; s < num_components; s++) {
      if (occ(s) < 1e-10) continue;  // keep parameters of an empty component
      new_means.row(s) = (post.col(s).transpose() * frames) / occ(s);
      for (int i = 0; i < d; i++) {
        double v = (post.col(s).array() *
                    (frames.col(i).array() - new_means(s, i)).square()).sum() /
            occ(s);
        new_vars(s, i) = std::max(v, floor(i));
      }
    }
    Vector new_weights = occ / occ.sum();
    gmm = DiagonalGmm(new_weights, new_means, new_vars);
  }
  return gmm;
}

}  // namespace mvsv
