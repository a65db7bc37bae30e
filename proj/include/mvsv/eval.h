// mvsv/eval.h

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

#ifndef MVSV_EVAL_H_
#define MVSV_EVAL_H_

#include <span>
#include <string>
#include <vector>

namespace mvsv {

enum class TrialLabel { kTarget, kNonTarget, kUnknown };

const char *TrialLabelName(TrialLabel label);
/// Parses "target" / "nontarget" / "unknown"; throws kFormat otherwise.
TrialLabel ParseTrialLabel(const std::string &text);

struct Trial {
  std::string enroll_id;
  std::string test_id;
  TrialLabel label = TrialLabel::kUnknown;
};

struct ScoredTrial {
  Trial trial;
  double score = 0.0;
};

struct ScoreSet {
  std::vector<ScoredTrial> entries;
  /// Optional per-subsystem scores, subsystem_scores[i][k] for entry i.
  std::vector<std::vector<double>> subsystem_scores;

  int NumTargets() const;
  int NumNonTargets() const;
  void Split(std::vector<double> *targets, std::vector<double> *nontargets) const;
};

/// Operating point for the rule "accept iff score >= threshold".
struct DetPoint {
  double threshold;
  double p_fa;
  double p_miss;
};

/// One point per distinct score plus -inf and +inf, thresholds ascending.
/// Throws kEmptyClass if either class is empty.
std::vector<DetPoint> DetPoints(std::span<const double> targets,
                                std::span<const double> nontargets);

struct EerResult {
  double eer = 0.0;
  /// First DET threshold at which P_miss >= P_fa.
  double threshold = 0.0;
};

/// EER from linear interpolation between the two DET points that bracket
/// the P_miss = P_fa crossing.
EerResult ComputeEer(std::span<const double> targets,
                     std::span<const double> nontargets);
EerResult ComputeEer(const ScoreSet &scores);

struct DcfParams {
  double c_miss = 10.0;
  double c_fa = 1.0;
  double p_target = 0.01;

  static DcfParams Sre08() { return {10.0, 1.0, 0.01}; }
  static DcfParams Sre10() { return {1.0, 1.0, 0.001}; }
  /// "sre08" or "sre10"; throws kUsage otherwise.
  static DcfParams Preset(const std::string &name);
  void Check() const;
};

/// min over thresholds of (c_miss p P_miss + c_fa (1 - p) P_fa) normalized by
/// min(c_miss p, c_fa (1 - p)).
double ComputeMinDcf(std::span<const double> targets,
                     std::span<const double> nontargets, const DcfParams &params);
double ComputeMinDcf(const ScoreSet &scores, const DcfParams &params);

struct MetricsReport {
  int num_targets = 0;
  int num_nontargets = 0;
  double eer = 0.0;
  double eer_threshold = 0.0;
  double min_dcf = 0.0;
  DcfParams dcf;
};

MetricsReport Evaluate(const ScoreSet &scores, const DcfParams &params);
/// Human-readable lines followed by key=value lines.
std::string FormatReport(const MetricsReport &report);

}  // namespace mvsv

#endif  // MVSV_EVAL_H_
