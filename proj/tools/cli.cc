// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mvsv/error.h"
#include "mvsv/eval.h"
#include "mvsv/gmm.h"
#include "mvsv/io.h"
#include "mvsv/mllr.h"
#include "mvsv/mvector.h"
#include "mvsv/pipeline.h"
#include "mvsv/synthdata.h"

namespace mvsv {

namespace fs = std::filesystem;

namespace {

void RequireInput(const std::string &path) {
  if (path.empty()) throw Error(ErrorKind::kUsage, "empty input path");
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::kIo, "no such file: " + path);
}

void RequireVecInput(const std::string &path) {
  RequireInput(path);
  RequireInput(path + ".ids");
}

void RequireOutput(const std::string &path) {
  if (path.empty()) throw Error(ErrorKind::kUsage, "empty output path");
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw Error(ErrorKind::kIo, "output directory does not exist: " + parent.string());
}

std::string Escape(const std::string &text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

/// Parses "full" or an even window size.
std::optional<int> ParseWindow(const std::string &text) {
  if (text == "full" || text == "FULL") return std::nullopt;
  try {
    size_t used = 0;
    int w = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return w;
  } catch (const std::logic_error &) {
    throw Error(ErrorKind::kUsage, "bad window '" + text + "' (expected an integer or 'full')");
  }
}

std::pair<int, int> ParsePair(const std::string &text) {
  int a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &a, &b, &tail) != 2)
    throw Error(ErrorKind::kUsage, "expected 'qs,qc', got '" + text + "'");
  return {a, b};
}

/// Expands "a:b:step" into a, a+step, ..., <= b; plain integers pass through.
std::vector<int> ExpandRange(const std::string &text) {
  int a = 0, b = 0, step = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d:%d:%d%c", &a, &b, &step, &tail) == 3) {
    if (step <= 0 || b < a) throw Error(ErrorKind::kUsage, "bad range '" + text + "'");
    std::vector<int> out;
    for (int v = a; v <= b; v += step) out.push_back(v);
    return out;
  }
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return {v};
  } catch (const std::logic_error &) {
    throw Error(ErrorKind::kUsage, "bad integer or range '" + text + "'");
  }
}

DcfParams ResolveDcf(const std::string &preset, std::optional<double> c_miss,
                     std::optional<double> c_fa, std::optional<double> p_target) {
  DcfParams p = DcfParams::Preset(preset);
  if (c_miss) p.c_miss = *c_miss;
  if (c_fa) p.c_fa = *c_fa;
  if (p_target) p.p_target = *p_target;
  p.Check();
  return p;
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path);
  os << text;
}

// Per-subcommand option holders.

struct SynthGenArgs {
  std::string type = "gmm";
  std::string out_dir;
  uint64_t seed = 1;
  int speakers = 4;
  int sessions = 2;
  int frames = 2000;
  int dim = 10;
  int components = 32;
  double speaker_strength = 0.1;
  double channel_strength = 0.0;
  double mean_spread = 2.0;
  int speaker_dim = 4;
  int channel_dim = 2;
  double speaker_scale = 1.0;
  double channel_scale = 1.0;
  double noise_scale = 0.5;
};

void RunSynthGen(const SynthGenArgs &a, std::ostream &out) {
  if (a.type != "gmm" && a.type != "plda")
    throw Error(ErrorKind::kUsage, "--type must be gmm or plda");
  if (a.out_dir.empty()) throw Error(ErrorKind::kUsage, "--out-dir is required");
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec || !fs::is_directory(a.out_dir))
    throw Error(ErrorKind::kIo, "cannot create directory " + a.out_dir);
  const fs::path dir(a.out_dir);
  if (a.type == "gmm") {
    GmmCorpusSpec spec;
    spec.seed = a.seed;
    spec.speakers = a.speakers;
    spec.sessions_per_speaker = a.sessions;
    spec.frames_per_session = a.frames;
    spec.dim = a.dim;
    spec.components = a.components;
    spec.speaker_strength = a.speaker_strength;
    spec.channel_strength = a.channel_strength;
    spec.mean_spread = a.mean_spread;
    GmmCorpus corpus = GenerateGmmCorpus(spec);
    fs::create_directories(dir / "frames", ec);
    if (ec) throw Error(ErrorKind::kIo, "cannot create " + (dir / "frames").string());
    std::vector<ManifestEntry> manifest;
    std::vector<std::string> sessions, speakers;
    for (const Session &s : corpus.sessions) {
      const std::string rel = "frames/" + s.session_id + ".frames";
      WriteFrames((dir / rel).string(), s.frames);
      manifest.push_back({s.session_id, s.speaker_id, rel});
      sessions.push_back(s.session_id);
      speakers.push_back(s.speaker_id);
    }
    WriteManifest((dir / "manifest.txt").string(), manifest);
    WriteGmm((dir / "truth_ubm.mdl").string(), corpus.ubm);
    ModelWriter truth("speaker-transforms");
    for (size_t r = 0; r < corpus.speaker_transforms.size(); r++)
      truth.Add(SpeakerId(static_cast<int>(r)), corpus.speaker_transforms[r]);
    truth.Write((dir / "truth_transforms.mdl").string());
    if (a.speakers >= 2) WriteTrials((dir / "trials.txt").string(), MakeTrials(sessions, speakers));
    out << "wrote " << manifest.size() << " sessions to " << a.out_dir << "\n";
  } else {
    PldaCorpusSpec spec;
    spec.seed = a.seed;
    spec.speakers = a.speakers;
    spec.sessions_per_speaker = a.sessions;
    spec.dim = a.dim;
    spec.speaker_dim = a.speaker_dim;
    spec.channel_dim = a.channel_dim;
    spec.speaker_scale = a.speaker_scale;
    spec.channel_scale = a.channel_scale;
    spec.noise_scale = a.noise_scale;
    PldaCorpus corpus = GeneratePldaCorpus(spec);
    WriteVectorSet((dir / "vectors.vec").string(), corpus.vectors);
    WritePlda((dir / "truth_plda.mdl").string(), corpus.truth);
    if (a.speakers >= 2)
      WriteTrials((dir / "trials.txt").string(),
                  MakeTrials(corpus.vectors.sessions, corpus.vectors.speakers));
    out << "wrote " << corpus.vectors.Size() << " vectors to " << a.out_dir << "\n";
  }
}

struct UbmTrainArgs {
  std::string manifest;
  std::string out;
  int components = 32;
  int iters = 20;
  double var_floor = 1e-3;
  uint64_t seed = 0;
};

void RunUbmTrain(const UbmTrainArgs &a, std::ostream &out) {
  RequireInput(a.manifest);
  RequireOutput(a.out);
  std::vector<ManifestEntry> entries = ReadManifest(a.manifest);
  if (entries.empty()) throw Error(ErrorKind::kFormat, a.manifest + ": empty manifest");
  for (const auto &e : entries) RequireInput(e.frames_path);
  std::vector<Matrix> parts;
  long total = 0;
  for (const auto &e : entries) {
    parts.push_back(ReadFrames(e.frames_path));
    if (parts.back().cols() != parts.front().cols())
      throw Error(ErrorKind::kDimensionMismatch, e.frames_path + ": frame dimension differs");
    total += parts.back().rows();
  }
  Matrix frames(total, parts.front().cols());
  long row = 0;
  for (const Matrix &p : parts) {
    frames.middleRows(row, p.rows()) = p;
    row += p.rows();
  }
  GmmTrainOptions opts;
  opts.max_em_iters = a.iters;
  opts.var_floor_fraction = a.var_floor;
  opts.seed = a.seed;
  std::vector<double> trace;
  DiagonalGmm ubm = TrainUbm(frames, a.components, opts, &trace);
  WriteGmm(a.out, ubm);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "frames=%ld components=%d final_avg_loglike=%.6f\n", total,
                a.components, trace.back() / static_cast<double>(total));
  out << buf;
}

struct MllrExtractArgs {
  std::string manifest;
  std::string ubm;
  std::string classes;
  std::string out;
  int iters = 1;
  double min_occupancy = -1.0;
  int threads = 1;
};

void RunMllrExtract(const MllrExtractArgs &a, std::ostream &out) {
  RequireInput(a.manifest);
  RequireInput(a.ubm);
  if (!a.classes.empty()) RequireInput(a.classes);
  RequireOutput(a.out);
  std::vector<ManifestEntry> entries = ReadManifest(a.manifest);
  if (entries.empty()) throw Error(ErrorKind::kFormat, a.manifest + ": empty manifest");
  for (const auto &e : entries) RequireInput(e.frames_path);
  DiagonalGmm ubm = ReadGmm(a.ubm);
  RegressionClassMap map = a.classes.empty() ? RegressionClassMap::Global(ubm.NumComponents())
                                             : ReadClassMap(a.classes);
  if (map.NumComponents() != ubm.NumComponents())
    throw Error(ErrorKind::kDimensionMismatch,
                "class map covers " + std::to_string(map.NumComponents()) +
                    " components, UBM has " + std::to_string(ubm.NumComponents()));
  MllrOptions opts;
  opts.iterations = a.iters;
  opts.min_class_occupancy = a.min_occupancy;
  const int n = static_cast<int>(entries.size());
  std::vector<Vector> supervectors(n);
  ParallelFor(n, a.threads, [&](int i) {
    Matrix frames = ReadFrames(entries[i].frames_path);
    MllrTransform t = EstimateMllr(ubm, frames, map, opts);
    supervectors[i] = BuildSuperVector(t, entries[i].speaker_id, entries[i].session_id).values;
  });
  VectorSet set;
  set.rows.resize(n, supervectors[0].size());
  for (int i = 0; i < n; i++) {
    set.rows.row(i) = supervectors[i].transpose();
    set.sessions.push_back(entries[i].session_id);
    set.speakers.push_back(entries[i].speaker_id);
  }
  WriteVectorSet(a.out, set);
  out << "sessions=" << n << " supervector_dim=" << set.Dim() << "\n";
}

struct SegmentArgs {
  std::string in;
  std::string out_prefix;
  int window = 0;
  bool cross = false;
};

void RunSegment(const SegmentArgs &a, std::ostream &out) {
  RequireVecInput(a.in);
  RequireOutput(a.out_prefix + ".0.vec");
  VectorSet set = ReadVectorSet(a.in);
  WindowPlan plan = PlanWindows(set.Dim(), a.window);
  std::vector<VectorSet> parts(plan.NumWindows());
  for (int i = 0; i < plan.NumWindows(); i++) {
    parts[i].rows = set.rows.middleCols(plan.offsets[i], plan.window);
    parts[i].sessions = set.sessions;
    parts[i].speakers = set.speakers;
    WriteVectorSet(a.out_prefix + "." + std::to_string(i) + ".vec", parts[i]);
  }
  int written = plan.NumWindows();
  if (a.cross) {
    for (int i = 0; i < plan.NumWindows(); i++) {
      for (int j = i + 1; j < plan.NumWindows(); j++) {
        VectorSet fused = EarlyFuse({parts[i], parts[j]});
        WriteVectorSet(a.out_prefix + ".cross." + std::to_string(i) + "_" +
                           std::to_string(j) + ".vec",
                       fused);
        written++;
      }
    }
  }
  out << "windows=" << plan.NumWindows() << " offsets=";
  for (int i = 0; i < plan.NumWindows(); i++) out << (i ? "," : "") << plan.offsets[i];
  out << " files=" << written << "\n";
}

struct BackendArgs {
  std::string kind = "lda-efr";
  int q = 0;
  std::string plda;
  std::string window = "full";
  int efr_iters = 2;
  int plda_iters = 20;
  int ppca_iters = 30;
  double lda_ridge = 1e-6;
  uint64_t seed = 0;
};

BackendSpec MakeSpec(const BackendArgs &a) {
  BackendSpec spec;
  spec.kind = ParseBackendKind(a.kind);
  spec.projection_dim = a.q;
  if (!a.plda.empty()) {
    auto [qs, qc] = ParsePair(a.plda);
    spec.plda_speaker_dim = qs;
    spec.plda_channel_dim = qc;
  }
  spec.efr_iters = a.efr_iters;
  spec.plda_iters = a.plda_iters;
  spec.ppca_iters = a.ppca_iters;
  spec.lda_ridge = a.lda_ridge;
  spec.seed = a.seed;
  return spec;
}

void AddBackendOptions(CLI::App *sub, BackendArgs *a) {
  sub->add_option("--kind", a->kind, "lda-efr, pca-efr, ppcanap-efr, plda or cascade")
      ->capture_default_str();
  sub->add_option("--q,--lda-q", a->q, "LDA/PCA output dim or PPCA-NAP rank");
  sub->add_option("--plda", a->plda, "PLDA speaker and channel ranks as qs,qc");
  sub->add_option("--window", a->window, "m-vector window size, or 'full'")
      ->capture_default_str();
  sub->add_option("--efr-iters", a->efr_iters)->capture_default_str();
  sub->add_option("--plda-iters", a->plda_iters)->capture_default_str();
  sub->add_option("--ppca-iters", a->ppca_iters)->capture_default_str();
  sub->add_option("--lda-ridge", a->lda_ridge)->capture_default_str();
  sub->add_option("--seed", a->seed)->capture_default_str();
}

struct BackendTrainArgs {
  std::string train;
  std::string out;
  BackendArgs backend;
  int threads = 1;
};

void RunBackendTrain(const BackendTrainArgs &a, std::ostream &out) {
  RequireVecInput(a.train);
  RequireOutput(a.out);
  BackendSpec spec = MakeSpec(a.backend);
  std::optional<int> window = ParseWindow(a.backend.window);
  VectorSet train = ReadVectorSet(a.train);
  spec.Check(window ? *window : train.Dim());
  SystemModel sys = TrainSystem(spec, train, window, a.threads);
  WriteSystem(a.out, sys);
  out << "kind=" << BackendKindName(spec.kind) << " subsystems=" << sys.NumSubsystems()
      << " input_dim=" << sys.input_dim << "\n";
}

struct ScoreArgs {
  std::string system;
  std::string enroll;
  std::string test;
  std::string trials;
  std::string out;
  bool average_enrollment = false;
  int threads = 1;
};

void RunScore(const ScoreArgs &a, std::ostream &out) {
  RequireInput(a.system);
  RequireVecInput(a.enroll);
  const std::string test_path = a.test.empty() ? a.enroll : a.test;
  RequireVecInput(test_path);
  RequireInput(a.trials);
  RequireOutput(a.out);
  SystemModel sys = ReadSystem(a.system);
  VectorSet enroll = ReadVectorSet(a.enroll);
  VectorSet test = ReadVectorSet(test_path);
  std::vector<Trial> trials = ReadTrials(a.trials);
  ScoreOptions opts;
  opts.average_enrollment = a.average_enrollment;
  opts.threads = a.threads;
  ScoreSet scores = ScoreTrials(sys, enroll, test, trials, opts);
  WriteScores(a.out, scores);
  out << "trials=" << scores.entries.size() << " subsystems=" << sys.NumSubsystems() << "\n";
}

struct FuseArgs {
  std::vector<std::string> scores;
  std::vector<double> weights;
  bool standardize = false;
  std::string out;
};

void RunFuse(const FuseArgs &a, std::ostream &out) {
  for (const auto &p : a.scores) RequireInput(p);
  RequireOutput(a.out);
  std::vector<ScoreSet> sets;
  for (const auto &p : a.scores) sets.push_back(ReadScores(p, nullptr));
  ScoreSet fused = LateFuse(sets, a.weights, a.standardize);
  WriteScores(a.out, fused);
  out << "fused=" << sets.size() << " trials=" << fused.entries.size() << "\n";
}

struct EvalArgs {
  std::string scores;
  std::string trials;
  std::string preset = "sre08";
  std::optional<double> c_miss, c_fa, p_target;
  std::string out;
};

void RunEval(const EvalArgs &a, std::ostream &out) {
  RequireInput(a.scores);
  RequireInput(a.trials);
  if (!a.out.empty()) RequireOutput(a.out);
  DcfParams dcf = ResolveDcf(a.preset, a.c_miss, a.c_fa, a.p_target);
  std::vector<Trial> trials = ReadTrials(a.trials);
  ScoreSet scores = ReadScores(a.scores, &trials);
  std::string report = FormatReport(Evaluate(scores, dcf));
  out << report;
  if (!a.out.empty()) WriteText(a.out, report);
}

struct SweepArgs {
  std::string train;
  std::string enroll;
  std::string test;
  std::string trials;
  std::vector<std::string> kinds{"lda-efr"};
  std::vector<std::string> windows{"full"};
  std::vector<std::string> qs;
  std::vector<std::string> plda;
  BackendArgs backend;
  std::string preset = "sre08";
  std::optional<double> c_miss, c_fa, p_target;
  std::string out;
  int threads = 1;
};

void RunSweep(const SweepArgs &a, std::ostream &out) {
  RequireVecInput(a.train);
  RequireVecInput(a.enroll);
  const std::string test_path = a.test.empty() ? a.enroll : a.test;
  RequireVecInput(test_path);
  RequireInput(a.trials);
  if (!a.out.empty()) RequireOutput(a.out);
  DcfParams dcf = ResolveDcf(a.preset, a.c_miss, a.c_fa, a.p_target);
  std::vector<BackendKind> kinds;
  for (const auto &k : a.kinds) kinds.push_back(ParseBackendKind(k));
  std::vector<std::optional<int>> windows;
  for (const auto &w : a.windows) windows.push_back(ParseWindow(w));
  std::vector<int> q_values;
  for (const auto &q : a.qs)
    for (int v : ExpandRange(q)) q_values.push_back(v);
  std::vector<std::pair<int, int>> plda_dims;
  for (const auto &p : a.plda) plda_dims.push_back(ParsePair(p));
  VectorSet train = ReadVectorSet(a.train);
  VectorSet enroll = ReadVectorSet(a.enroll);
  VectorSet test = ReadVectorSet(test_path);
  std::vector<Trial> trials = ReadTrials(a.trials);

  std::ostringstream table;
  table << "window\tkind\tq\tqs\tqc\teer\tmin_dcf\n";
  for (const auto &window : windows) {
    for (BackendKind kind : kinds) {
      const bool uses_q = kind != BackendKind::kPlda;
      const bool uses_plda = kind == BackendKind::kPlda || kind == BackendKind::kCascade;
      std::vector<int> q_list = uses_q ? q_values : std::vector<int>{0};
      std::vector<std::pair<int, int>> p_list =
          uses_plda ? plda_dims : std::vector<std::pair<int, int>>{{0, 0}};
      if (q_list.empty())
        throw Error(ErrorKind::kUsage, std::string("--q is required for ") + BackendKindName(kind));
      if (p_list.empty())
        throw Error(ErrorKind::kUsage,
                    std::string("--plda is required for ") + BackendKindName(kind));
      for (int q : q_list) {
        for (auto [qs, qc] : p_list) {
          BackendSpec spec = MakeSpec(a.backend);
          spec.kind = kind;
          spec.projection_dim = q;
          spec.plda_speaker_dim = qs;
          spec.plda_channel_dim = qc;
          char buf[64] = "n/a\tn/a";
          bool fits = true;
          try {
            spec.Check(window ? *window : train.Dim());
          } catch (const Error &e) {
            if (e.kind() != ErrorKind::kInvalidSpec) throw;
            fits = false;
          }
          if (fits) {
            SystemResult r =
                EvaluateSystem(spec, window, train, enroll, test, trials, dcf, a.threads);
            std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", r.eer, r.min_dcf);
          }
          table << (window ? std::to_string(*window) : std::string("full")) << '\t'
                << BackendKindName(kind) << '\t' << q << '\t' << qs << '\t' << qc << '\t'
                << buf << '\n';
        }
      }
    }
  }
  out << table.str();
  if (!a.out.empty()) WriteText(a.out, table.str());
}

void AddDcfOptions(CLI::App *sub, std::string *preset, std::optional<double> *c_miss,
                   std::optional<double> *c_fa, std::optional<double> *p_target) {
  sub->add_option("--preset", *preset, "MinDCF cost preset: sre08 or sre10")
      ->capture_default_str();
  sub->add_option("--c-miss", *c_miss, "override the miss cost");
  sub->add_option("--c-fa", *c_fa, "override the false-alarm cost");
  sub->add_option("--p-target", *p_target, "override the target prior");
}

CLI::App *AddSubcommand(CLI::App &app, const std::string &name, const std::string &help,
                        std::string *config) {
  CLI::App *sub = app.add_subcommand(name, help);
  sub->add_option("--config", *config, "key=value configuration file (flags override it)");
  return sub;
}

std::string Trim(const std::string &text) {
  const char *space = " \t\r";
  size_t b = text.find_first_not_of(space);
  if (b == std::string::npos) return "";
  size_t e = text.find_last_not_of(space);
  return text.substr(b, e - b + 1);
}

bool GivenOnCommandLine(const CLI::Option *opt, const std::vector<std::string> &args) {
  for (const std::string &name : opt->get_lnames()) {
    const std::string flag = "--" + name;
    for (const std::string &a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

/**
   Expands "--config <path>" for the subcommand named by args[0]: each
   "key = value" line of the file becomes "--key value" unless the option was
   given on the command line.  Blank lines and lines starting with '#' or ';'
   are skipped; unknown keys are rejected.
*/
std::vector<std::string> ExpandConfig(const CLI::App &app, std::vector<std::string> args) {
  if (args.empty()) return args;
  std::string path;
  for (size_t i = 1; i < args.size(); i++) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const CLI::App *sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound &) {
    return args;
  }
  RequireInput(path);
  std::ifstream is(path);
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    line = Trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kUsage, where + ": expected key=value");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    const CLI::Option *opt = key == "config" || key == "help"
                                 ? nullptr
                                 : sub->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw Error(ErrorKind::kUsage, where + ": unknown key '" + key + "' for " + args[0]);
    if (GivenOnCommandLine(opt, args)) continue;
    if (opt->get_expected_min() == 0) {
      extra.push_back("--" + key + "=" + value);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; i++) args.emplace_back(argv[i]);
  return RunCli(args, out, err);
}

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"m-vector speaker verification toolkit", "mvsv"};
  app.require_subcommand(1, 1);
  std::string config;

  SynthGenArgs synth;
  CLI::App *synth_cmd = AddSubcommand(app, "synth-gen", "generate a seeded synthetic corpus",
                                      &config);
  synth_cmd->add_option("--type", synth.type, "gmm (frames) or plda (vectors)")
      ->capture_default_str();
  synth_cmd->add_option("--out-dir", synth.out_dir)->required();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--speakers", synth.speakers)->capture_default_str();
  synth_cmd->add_option("--sessions", synth.sessions, "sessions per speaker")
      ->capture_default_str();
  synth_cmd->add_option("--frames", synth.frames, "frames per session")->capture_default_str();
  synth_cmd->add_option("--dim", synth.dim)->capture_default_str();
  synth_cmd->add_option("--components", synth.components)->capture_default_str();
  synth_cmd->add_option("--speaker-strength", synth.speaker_strength)->capture_default_str();
  synth_cmd->add_option("--channel-strength", synth.channel_strength)->capture_default_str();
  synth_cmd->add_option("--mean-spread", synth.mean_spread)->capture_default_str();
  synth_cmd->add_option("--speaker-dim", synth.speaker_dim)->capture_default_str();
  synth_cmd->add_option("--channel-dim", synth.channel_dim)->capture_default_str();
  synth_cmd->add_option("--speaker-scale", synth.speaker_scale)->capture_default_str();
  synth_cmd->add_option("--channel-scale", synth.channel_scale)->capture_default_str();
  synth_cmd->add_option("--noise-scale", synth.noise_scale)->capture_default_str();

  UbmTrainArgs ubm;
  CLI::App *ubm_cmd = AddSubcommand(app, "ubm-train", "train a diagonal-covariance UBM", &config);
  ubm_cmd->add_option("--manifest", ubm.manifest, "session manifest")->required();
  ubm_cmd->add_option("--out", ubm.out)->required();
  ubm_cmd->add_option("--components", ubm.components)->capture_default_str();
  ubm_cmd->add_option("--iters", ubm.iters)->capture_default_str();
  ubm_cmd->add_option("--var-floor", ubm.var_floor, "variance floor as a fraction of the "
                                                    "global variance")
      ->capture_default_str();
  ubm_cmd->add_option("--seed", ubm.seed)->capture_default_str();

  MllrExtractArgs mllr;
  CLI::App *mllr_cmd = AddSubcommand(app, "mllr-extract", "estimate MLLR super-vectors", &config);
  mllr_cmd->add_option("--manifest", mllr.manifest)->required();
  mllr_cmd->add_option("--ubm", mllr.ubm)->required();
  mllr_cmd->add_option("--classes", mllr.classes, "regression class map (default: global)");
  mllr_cmd->add_option("--out", mllr.out)->required();
  mllr_cmd->add_option("--iters", mllr.iters)->capture_default_str();
  mllr_cmd->add_option("--min-occupancy", mllr.min_occupancy,
                       "minimum class occupancy (negative: 10 * dim)")
      ->capture_default_str();
  mllr_cmd->add_option("--threads", mllr.threads)->capture_default_str();

  SegmentArgs seg;
  CLI::App *seg_cmd = AddSubcommand(app, "segment", "cut super-vectors into m-vectors", &config);
  seg_cmd->add_option("--in", seg.in)->required();
  seg_cmd->add_option("--window", seg.window)->required();
  seg_cmd->add_option("--out-prefix", seg.out_prefix)->required();
  seg_cmd->add_flag("--cross", seg.cross, "also write cross m-vectors");

  BackendTrainArgs bt;
  CLI::App *bt_cmd = AddSubcommand(app, "backend-train", "train a back-end system", &config);
  bt_cmd->add_option("--train", bt.train)->required();
  bt_cmd->add_option("--out", bt.out)->required();
  AddBackendOptions(bt_cmd, &bt.backend);
  bt_cmd->add_option("--threads", bt.threads)->capture_default_str();

  ScoreArgs sc;
  CLI::App *sc_cmd = AddSubcommand(app, "score", "score a trial list", &config);
  sc_cmd->add_option("--system", sc.system)->required();
  sc_cmd->add_option("--enroll", sc.enroll)->required();
  sc_cmd->add_option("--test", sc.test, "test vectors (default: the enrollment set)");
  sc_cmd->add_option("--trials", sc.trials)->required();
  sc_cmd->add_option("--out", sc.out)->required();
  sc_cmd->add_flag("--average-enrollment", sc.average_enrollment,
                   "average all vectors named by an enrollment id");
  sc_cmd->add_option("--threads", sc.threads)->capture_default_str();

  FuseArgs fu;
  CLI::App *fu_cmd = AddSubcommand(app, "fuse", "linear late fusion of score files", &config);
  fu_cmd->add_option("--scores", fu.scores, "score files")->required()->delimiter(',');
  fu_cmd->add_option("--weights", fu.weights, "nonnegative weights (default: equal)")
      ->delimiter(',');
  fu_cmd->add_flag("--standardize", fu.standardize,
                   "zero-mean unit-variance scores before fusion");
  fu_cmd->add_option("--out", fu.out)->required();

  EvalArgs ev;
  CLI::App *ev_cmd = AddSubcommand(app, "eval", "EER and MinDCF of a score file", &config);
  ev_cmd->add_option("--scores", ev.scores)->required();
  ev_cmd->add_option("--trials", ev.trials)->required();
  AddDcfOptions(ev_cmd, &ev.preset, &ev.c_miss, &ev.c_fa, &ev.p_target);
  ev_cmd->add_option("--out", ev.out, "also write the report here");

  SweepArgs sw;
  CLI::App *sw_cmd = AddSubcommand(app, "sweep", "EER and MinDCF over a parameter grid", &config);
  sw_cmd->add_option("--train", sw.train)->required();
  sw_cmd->add_option("--enroll", sw.enroll)->required();
  sw_cmd->add_option("--test", sw.test);
  sw_cmd->add_option("--trials", sw.trials)->required();
  sw_cmd->add_option("--kinds", sw.kinds, "back-end kinds")->delimiter(',')
      ->capture_default_str();
  sw_cmd->add_option("--windows", sw.windows, "window sizes or 'full'")->delimiter(',')
      ->capture_default_str();
  sw_cmd->add_option("--q", sw.qs, "projection dims; a:b:step ranges allowed")
      ->delimiter(',');
  sw_cmd->add_option("--plda", sw.plda, "PLDA rank pairs qs,qc (repeatable)");
  sw_cmd->add_option("--efr-iters", sw.backend.efr_iters)->capture_default_str();
  sw_cmd->add_option("--plda-iters", sw.backend.plda_iters)->capture_default_str();
  sw_cmd->add_option("--ppca-iters", sw.backend.ppca_iters)->capture_default_str();
  sw_cmd->add_option("--lda-ridge", sw.backend.lda_ridge)->capture_default_str();
  sw_cmd->add_option("--seed", sw.backend.seed)->capture_default_str();
  AddDcfOptions(sw_cmd, &sw.preset, &sw.c_miss, &sw.c_fa, &sw.p_target);
  sw_cmd->add_option("--out", sw.out, "also write the table here");
  sw_cmd->add_option("--threads", sw.threads)->capture_default_str();

  try {
    std::vector<std::string> expanded = ExpandConfig(app, args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const Error &e) {
    err << "error: kind=" << ErrorKindName(e.kind()) << " message=\"" << Escape(e.what())
        << "\"\n";
    return 2;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: kind=Usage message=\"" << Escape(e.what()) << "\"\n";
    return 2;
  }

  try {
    if (*synth_cmd) RunSynthGen(synth, out);
    else if (*ubm_cmd) RunUbmTrain(ubm, out);
    else if (*mllr_cmd) RunMllrExtract(mllr, out);
    else if (*seg_cmd) RunSegment(seg, out);
    else if (*bt_cmd) RunBackendTrain(bt, out);
    else if (*sc_cmd) RunScore(sc, out);
    else if (*fu_cmd) RunFuse(fu, out);
    else if (*ev_cmd) RunEval(ev, out);
    else if (*sw_cmd) RunSweep(sw, out);
  } catch (const Error &e) {
    err << "error: kind=" << ErrorKindName(e.kind()) << " message=\"" << Escape(e.what())
        << "\"\n";
    return 1;
  } catch (const std::exception &e) {
    err << "error: kind=Internal message=\"" << Escape(e.what()) << "\"\n";
    return 1;
  }
  return 0;
}

}  // namespace mvsv
