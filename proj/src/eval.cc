// src/eval.cc

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

#include "mvsv/eval.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mvsv/error.h"

namespace mvsv {

const char *TrialLabelName(TrialLabel label) {
  switch (label) {
    case TrialLabel::kTarget: return "target";
    case TrialLabel::kNonTarget: return "nontarget";
    case TrialLabel::kUnknown: return "unknown";
  }
  return "unknown";
}

TrialLabel ParseTrialLabel(const std::string &text) {
  if (text == "target") return TrialLabel::kTarget;
  if (text == "nontarget") return TrialLabel::kNonTarget;
  if (text == "unknown") return TrialLabel::kUnknown;
  throw Error(ErrorKind::kFormat, "bad trial label '" + text + "'");
}

int ScoreSet::NumTargets() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto &e) {
    return e.trial.label == TrialLabel::kTarget;
  }));
}

int ScoreSet::NumNonTargets() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto &e) {
    return e.trial.label == TrialLabel::kNonTarget;
  }));
}

void ScoreSet::Split(std::vector<double> *targets,
                     std::vector<double> *nontargets) const {
  targets->clear();
  nontargets->clear();
  for (const ScoredTrial &e : entries) {
    if (e.trial.label == TrialLabel::kTarget) targets->push_back(e.score);
    else if (e.trial.label == TrialLabel::kNonTarget) nontargets->push_back(e.score);
  }
}

std::vector<DetPoint> DetPoints(std::span<const double> targets,
                                std::span<const double> nontargets) {
  if (targets.empty() || nontargets.empty())
    throw Error(ErrorKind::kEmptyClass, "need at least one target and one nontarget");
  std::vector<double> tar(targets.begin(), targets.end());
  std::vector<double> non(nontargets.begin(), nontargets.end());
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thresholds;
  thresholds.reserve(tar.size() + non.size());
  std::merge(tar.begin(), tar.end(), non.begin(), non.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double nt = static_cast<double>(tar.size()), nn = static_cast<double>(non.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<DetPoint> points;
  points.reserve(thresholds.size() + 2);
  points.push_back({-inf, 1.0, 0.0});
  size_t below_tar = 0, below_non = 0;  // counts of scores < threshold
  for (double t : thresholds) {
    while (below_tar < tar.size() && tar[below_tar] < t) below_tar++;
    while (below_non < non.size() && non[below_non] < t) below_non++;
    points.push_back({t, (nn - below_non) / nn, below_tar / nt});
  }
  points.push_back({inf, 0.0, 1.0});
  return points;
}

EerResult ComputeEer(std::span<const double> targets,
                     std::span<const double> nontargets) {
  std::vector<DetPoint> pts = DetPoints(targets, nontargets);
  size_t j = 0;
  while (pts[j].p_fa - pts[j].p_miss > 0.0) j++;  // the +inf point ends the scan
  EerResult r;
  r.threshold = pts[j].threshold;
  double dj = pts[j].p_fa - pts[j].p_miss;
  if (dj == 0.0) {
    r.eer = pts[j].p_fa;
    return r;
  }
  const DetPoint &a = pts[j - 1], &b = pts[j];
  double da = a.p_fa - a.p_miss;
  double t = da / (da - dj);
  r.eer = a.p_fa + t * (b.p_fa - a.p_fa);
  return r;
}

EerResult ComputeEer(const ScoreSet &scores) {
  std::vector<double> tar, non;
  scores.Split(&tar, &non);
  return ComputeEer(tar, non);
}

DcfParams DcfParams::Preset(const std::string &name) {
  if (name == "sre08") return Sre08();
  if (name == "sre10") return Sre10();
  throw Error(ErrorKind::kUsage, "unknown DCF preset '" + name + "'");
}

void DcfParams::Check() const {
  if (!(c_miss > 0.0) || !(c_fa > 0.0) || !(p_target > 0.0 && p_target < 1.0))
    throw Error(ErrorKind::kUsage, "DCF costs must be > 0 and p_target in (0,1)");
}

double ComputeMinDcf(std::span<const double> targets,
                     std::span<const double> nontargets, const DcfParams &params) {
  params.Check();
  std::vector<DetPoint> pts = DetPoints(targets, nontargets);
  const double w_miss = params.c_miss * params.p_target;
  const double w_fa = params.c_fa * (1.0 - params.p_target);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint &p : pts)
    best = std::min(best, w_miss * p.p_miss + w_fa * p.p_fa);
  return best / std::min(w_miss, w_fa);
}

double ComputeMinDcf(const ScoreSet &scores, const DcfParams &params) {
  std::vector<double> tar, non;
  scores.Split(&tar, &non);
  return ComputeMinDcf(tar, non, params);
}

MetricsReport Evaluate(const ScoreSet &scores, const DcfParams &params) {
  MetricsReport r;
  std::vector<double> tar, non;
  scores.Split(&tar, &non);
  r.num_targets = static_cast<int>(tar.size());
  r.num_nontargets = static_cast<int>(non.size());
  EerResult eer = ComputeEer(tar, non);
  r.eer = eer.eer;
  r.eer_threshold = eer.threshold;
  r.min_dcf = ComputeMinDcf(tar, non, params);
  r.dcf = params;
  return r;
}

std::string FormatReport(const MetricsReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "targets: %d  nontargets: %d\n"
                "EER: %.4f %%  (%.4f)\n"
                "MinDCF: %.4f  (c_miss=%g c_fa=%g p_target=%g)\n"
                "num_targets=%d\nnum_nontargets=%d\neer=%.17g\neer_threshold=%.17g\n"
                "min_dcf=%.17g\nc_miss=%.17g\nc_fa=%.17g\np_target=%.17g\n",
                r.num_targets, r.num_nontargets, 100.0 * r.eer, r.eer, r.min_dcf,
                r.dcf.c_miss, r.dcf.c_fa, r.dcf.p_target, r.num_targets,
                r.num_nontargets, r.eer, r.eer_threshold, r.min_dcf, r.dcf.c_miss,
                r.dcf.c_fa, r.dcf.p_target);
  return buf;
}

}  // namespace mvsv
