// src/io.cc

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

#include "mvsv/io.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mvsv/error.h"

namespace mvsv {

namespace {

uint64_t ByteSwap64(uint64_t x) {
  uint64_t out = 0;
  for (int i = 0; i < 8; i++) out = (out << 8) | ((x >> (8 * i)) & 0xff);
  return out;
}

void WriteDoubles(std::ostream &os, const Matrix &m) {
  std::vector<uint64_t> buf(static_cast<size_t>(m.rows() * m.cols()));
  size_t k = 0;
  for (long r = 0; r < m.rows(); r++) {
    for (long c = 0; c < m.cols(); c++) {
      uint64_t bits = std::bit_cast<uint64_t>(m(r, c));
      if constexpr (std::endian::native == std::endian::big) bits = ByteSwap64(bits);
      buf[k++] = bits;
    }
  }
  os.write(reinterpret_cast<const char *>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(uint64_t)));
}

Matrix ReadDoubles(std::istream &is, long rows, long cols, const std::string &path) {
  std::vector<uint64_t> buf(static_cast<size_t>(rows * cols));
  is.read(reinterpret_cast<char *>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(uint64_t)));
  if (is.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(uint64_t)))
    throw Error(ErrorKind::kFormat, path + ": truncated payload");
  Matrix m(rows, cols);
  size_t k = 0;
  for (long r = 0; r < rows; r++) {
    for (long c = 0; c < cols; c++) {
      uint64_t bits = buf[k++];
      if constexpr (std::endian::native == std::endian::big) bits = ByteSwap64(bits);
      m(r, c) = std::bit_cast<double>(bits);
    }
  }
  return m;
}

std::ofstream OpenOut(const std::string &path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path);
  return os;
}

std::ifstream OpenIn(const std::string &path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw Error(ErrorKind::kIo, "cannot read " + path);
  return is;
}

// Parses "key=<integer>".
long ParseField(const std::string &token, const std::string &key,
                const std::string &path) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    throw Error(ErrorKind::kFormat, path + ": expected " + prefix + "<n>");
  try {
    size_t used = 0;
    long v = std::stol(token.substr(prefix.size()), &used);
    if (used != token.size() - prefix.size() || v < 0) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error &) {
    throw Error(ErrorKind::kFormat, path + ": bad field " + token);
  }
}

std::string ParseStringField(const std::string &token, const std::string &key,
                             const std::string &path) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0 || token.size() == prefix.size())
    throw Error(ErrorKind::kFormat, path + ": expected " + prefix + "<value>");
  return token.substr(prefix.size());
}

std::vector<std::string> SplitLine(const std::string &line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string t;
  while (ss >> t) tokens.push_back(t);
  return tokens;
}

}  // namespace

void WriteMatrixFile(const std::string &path, const std::string &magic,
                     const Matrix &m) {
  std::ofstream os = OpenOut(path, true);
  os << magic << " v1 rows=" << m.rows() << " dim=" << m.cols() << "\n";
  WriteDoubles(os, m);
  if (!os) throw Error(ErrorKind::kIo, "write failed: " + path);
}

Matrix ReadMatrixFile(const std::string &path, const std::string &magic) {
  std::ifstream is = OpenIn(path, true);
  std::string header;
  std::getline(is, header);
  auto tok = SplitLine(header);
  if (tok.size() != 4 || tok[0] != magic || tok[1] != "v1")
    throw Error(ErrorKind::kFormat, path + ": expected '" + magic + " v1' header");
  long rows = ParseField(tok[2], "rows", path);
  long cols = ParseField(tok[3], "dim", path);
  Matrix m = ReadDoubles(is, rows, cols, path);
  if (is.peek() != std::char_traits<char>::eof())
    throw Error(ErrorKind::kFormat, path + ": trailing bytes after payload");
  return m;
}

void WriteVectorSet(const std::string &path, const VectorSet &set) {
  set.Check();
  WriteMatrixFile(path, "VEC", set.rows);
  std::ofstream os = OpenOut(path + ".ids", false);
  for (long i = 0; i < set.Size(); i++)
    os << set.sessions[i] << ' ' << set.speakers[i] << '\n';
}

VectorSet ReadVectorSet(const std::string &path) {
  VectorSet set;
  set.rows = ReadMatrixFile(path, "VEC");
  std::ifstream is = OpenIn(path + ".ids", false);
  std::string line;
  while (std::getline(is, line)) {
    auto tok = SplitLine(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw Error(ErrorKind::kFormat, path + ".ids: bad line '" + line + "'");
    set.sessions.push_back(tok[0]);
    set.speakers.push_back(tok[1]);
  }
  set.Check();
  return set;
}

void ModelWriter::Add(const std::string &name, const Matrix &m) {
  sections_.emplace_back(name, m);
}

void ModelWriter::AddVector(const std::string &name, const Vector &v) {
  sections_.emplace_back(name, Matrix(v));
}

void ModelWriter::AddScalar(const std::string &name, double x) {
  sections_.emplace_back(name, Matrix::Constant(1, 1, x));
}

void ModelWriter::Write(const std::string &path) const {
  std::ofstream os = OpenOut(path, true);
  os << "MODEL v1 type=" << type_ << " sections=" << sections_.size() << "\n";
  for (const auto &[name, m] : sections_) {
    os << "SECTION name=" << name << " rows=" << m.rows() << " cols=" << m.cols() << "\n";
    WriteDoubles(os, m);
  }
  if (!os) throw Error(ErrorKind::kIo, "write failed: " + path);
}

ModelReader::ModelReader(const std::string &path) : path_(path) {
  std::ifstream is = OpenIn(path, true);
  std::string line;
  std::getline(is, line);
  auto tok = SplitLine(line);
  if (tok.size() != 4 || tok[0] != "MODEL" || tok[1] != "v1")
    throw Error(ErrorKind::kFormat, path + ": expected 'MODEL v1' header");
  type_ = ParseStringField(tok[2], "type", path);
  long n = ParseField(tok[3], "sections", path);
  for (long i = 0; i < n; i++) {
    if (!std::getline(is, line)) throw Error(ErrorKind::kFormat, path + ": missing section");
    tok = SplitLine(line);
    if (tok.size() != 4 || tok[0] != "SECTION")
      throw Error(ErrorKind::kFormat, path + ": bad section header");
    std::string name = ParseStringField(tok[1], "name", path);
    long rows = ParseField(tok[2], "rows", path);
    long cols = ParseField(tok[3], "cols", path);
    sections_[name] = ReadDoubles(is, rows, cols, path);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw Error(ErrorKind::kFormat, path + ": trailing bytes after last section");
}

void ModelReader::ExpectType(const std::string &type) const {
  if (type_ != type)
    throw Error(ErrorKind::kFormat, path_ + ": model type '" + type_ + "', expected '" +
                                        type + "'");
}

const Matrix &ModelReader::Get(const std::string &name) const {
  auto it = sections_.find(name);
  if (it == sections_.end())
    throw Error(ErrorKind::kFormat, path_ + ": missing section " + name);
  return it->second;
}

Vector ModelReader::GetVector(const std::string &name) const {
  const Matrix &m = Get(name);
  if (m.cols() != 1 && m.rows() != 0)
    throw Error(ErrorKind::kFormat, path_ + ": section " + name + " is not a vector");
  return m.col(0);
}

double ModelReader::GetScalar(const std::string &name) const {
  const Matrix &m = Get(name);
  if (m.rows() != 1 || m.cols() != 1)
    throw Error(ErrorKind::kFormat, path_ + ": section " + name + " is not a scalar");
  return m(0, 0);
}

void WriteGmm(const std::string &path, const DiagonalGmm &gmm) {
  ModelWriter w("diag-gmm");
  w.AddVector("weights", gmm.weights());
  w.Add("means", gmm.means());
  w.Add("variances", gmm.variances());
  w.Write(path);
}

DiagonalGmm ReadGmm(const std::string &path) {
  ModelReader r(path);
  r.ExpectType("diag-gmm");
  return DiagonalGmm(r.GetVector("weights"), r.Get("means"), r.Get("variances"));
}

namespace {

void AddPlda(ModelWriter *w, const std::string &p, const PldaModel &m) {
  w->AddVector(p + "mu", m.mu);
  w->Add(p + "phi", m.phi);
  w->Add(p + "gamma", m.gamma);
  w->AddVector(p + "lambda", m.lambda);
}

PldaModel GetPlda(const ModelReader &r, const std::string &p) {
  PldaModel m;
  m.mu = r.GetVector(p + "mu");
  m.phi = r.Get(p + "phi");
  m.gamma = r.Get(p + "gamma");
  m.lambda = r.GetVector(p + "lambda");
  m.Check();
  return m;
}

void AddStages(ModelWriter *w, const std::string &p, const LengthNormalizer &n) {
  w->AddScalar(p + "stages", static_cast<double>(n.stages().size()));
  for (size_t k = 0; k < n.stages().size(); k++) {
    std::string q = p + "stage" + std::to_string(k) + ".";
    w->AddVector(q + "mean", n.stages()[k].mean);
    w->Add(q + "whitener", n.stages()[k].whitener);
  }
}

LengthNormalizer GetStages(const ModelReader &r, const std::string &p) {
  int count = static_cast<int>(r.GetScalar(p + "stages"));
  std::vector<LengthNormStage> stages(count);
  for (int k = 0; k < count; k++) {
    std::string q = p + "stage" + std::to_string(k) + ".";
    stages[k].mean = r.GetVector(q + "mean");
    stages[k].whitener = r.Get(q + "whitener");
  }
  return LengthNormalizer(std::move(stages));
}

Vector IntsToVector(const std::vector<int> &v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); i++) out(i) = v[i];
  return out;
}

}  // namespace

void WritePlda(const std::string &path, const PldaModel &model) {
  ModelWriter w("plda");
  AddPlda(&w, "", model);
  w.Write(path);
}

PldaModel ReadPlda(const std::string &path) {
  ModelReader r(path);
  r.ExpectType("plda");
  return GetPlda(r, "");
}

void WriteSystem(const std::string &path, const SystemModel &sys) {
  ModelWriter w("system");
  const BackendSpec &s = sys.spec;
  Vector spec(10);
  spec << static_cast<double>(s.kind), s.projection_dim, s.plda_speaker_dim,
      s.plda_channel_dim, s.efr_iters, s.plda_iters, s.ppca_iters, s.lda_ridge,
      static_cast<double>(s.seed >> 32), static_cast<double>(s.seed & 0xffffffffULL);
  w.AddVector("spec", spec);
  w.AddScalar("input_dim", sys.input_dim);
  w.AddScalar("window", sys.plan ? sys.plan->window : 0);
  w.AddScalar("subsystems", sys.NumSubsystems());
  for (int i = 0; i < sys.NumSubsystems(); i++) {
    const Backend &b = sys.subsystems[i];
    const std::string p = "sub" + std::to_string(i) + ".";
    if (b.kind != BackendKind::kPlda) {
      w.AddVector(p + "norm.mean", b.norm.mean);
      w.AddVector(p + "norm.std", b.norm.std);
      w.AddVector(p + "norm.clamped", IntsToVector(b.norm.clamped_dims));
    }
    switch (b.kind) {
      case BackendKind::kLdaEfr:
      case BackendKind::kCascade:
        w.AddVector(p + "lda.mean", b.lda.mean);
        w.Add(p + "lda.basis", b.lda.basis);
        w.AddVector(p + "lda.eigenvalues", b.lda.eigenvalues);
        break;
      case BackendKind::kPcaEfr:
        w.AddVector(p + "pca.mean", b.pca.mean);
        w.Add(p + "pca.basis", b.pca.basis);
        w.AddVector(p + "pca.eigenvalues", b.pca.eigenvalues);
        break;
      case BackendKind::kPpcaNapEfr:
        w.Add(p + "nap.u", b.nap.u());
        break;
      case BackendKind::kPlda:
        break;
    }
    if (b.kind == BackendKind::kPlda || b.kind == BackendKind::kCascade) {
      AddStages(&w, p + "plda_norm.", b.plda_norm);
      AddPlda(&w, p + "plda.", b.plda);
    } else {
      AddStages(&w, p + "efr.", b.efr.normalizer);
      w.Add(p + "efr.omega_inv", b.efr.omega_inv);
      w.AddScalar(p + "efr.regularized", b.efr.omega_regularized ? 1.0 : 0.0);
    }
  }
  w.Write(path);
}

SystemModel ReadSystem(const std::string &path) {
  ModelReader r(path);
  r.ExpectType("system");
  SystemModel sys;
  Vector spec = r.GetVector("spec");
  if (spec.size() != 10) throw Error(ErrorKind::kFormat, path + ": bad spec section");
  BackendSpec &s = sys.spec;
  int kind = static_cast<int>(spec(0));
  if (kind < 0 || kind > static_cast<int>(BackendKind::kCascade))
    throw Error(ErrorKind::kFormat, path + ": bad back-end kind");
  s.kind = static_cast<BackendKind>(kind);
  s.projection_dim = static_cast<int>(spec(1));
  s.plda_speaker_dim = static_cast<int>(spec(2));
  s.plda_channel_dim = static_cast<int>(spec(3));
  s.efr_iters = static_cast<int>(spec(4));
  s.plda_iters = static_cast<int>(spec(5));
  s.ppca_iters = static_cast<int>(spec(6));
  s.lda_ridge = spec(7);
  s.seed = (static_cast<uint64_t>(spec(8)) << 32) | static_cast<uint64_t>(spec(9));
  sys.input_dim = static_cast<int>(r.GetScalar("input_dim"));
  int window = static_cast<int>(r.GetScalar("window"));
  if (window > 0) sys.plan = PlanWindows(sys.input_dim, window);
  int n = static_cast<int>(r.GetScalar("subsystems"));
  if (n != (sys.plan ? sys.plan->NumWindows() : 1))
    throw Error(ErrorKind::kFormat, path + ": subsystem count does not match window plan");
  for (int i = 0; i < n; i++) {
    Backend b;
    b.kind = s.kind;
    const std::string p = "sub" + std::to_string(i) + ".";
    if (b.kind != BackendKind::kPlda) {
      b.norm.mean = r.GetVector(p + "norm.mean");
      b.norm.std = r.GetVector(p + "norm.std");
      Vector clamped = r.GetVector(p + "norm.clamped");
      for (long k = 0; k < clamped.size(); k++)
        b.norm.clamped_dims.push_back(static_cast<int>(clamped(k)));
    }
    switch (b.kind) {
      case BackendKind::kLdaEfr:
      case BackendKind::kCascade:
        b.lda.mean = r.GetVector(p + "lda.mean");
        b.lda.basis = r.Get(p + "lda.basis");
        b.lda.eigenvalues = r.GetVector(p + "lda.eigenvalues");
        break;
      case BackendKind::kPcaEfr:
        b.pca.mean = r.GetVector(p + "pca.mean");
        b.pca.basis = r.Get(p + "pca.basis");
        b.pca.eigenvalues = r.GetVector(p + "pca.eigenvalues");
        break;
      case BackendKind::kPpcaNapEfr:
        b.nap = PpcaNapModel(r.Get(p + "nap.u"));
        break;
      case BackendKind::kPlda:
        break;
    }
    if (b.kind == BackendKind::kPlda || b.kind == BackendKind::kCascade) {
      b.plda_norm = GetStages(r, p + "plda_norm.");
      b.plda = GetPlda(r, p + "plda.");
      b.scorer = PldaScorer(b.plda);
    } else {
      b.efr.normalizer = GetStages(r, p + "efr.");
      b.efr.omega_inv = r.Get(p + "efr.omega_inv");
      b.efr.omega_regularized = r.GetScalar(p + "efr.regularized") != 0.0;
    }
    sys.subsystems.push_back(std::move(b));
  }
  return sys;
}

std::vector<Trial> ReadTrials(const std::string &path) {
  std::ifstream is = OpenIn(path, false);
  std::vector<Trial> trials;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    auto tok = SplitLine(line);
    if (tok.empty()) continue;
    if (tok.size() != 3)
      throw Error(ErrorKind::kFormat,
                  path + ":" + std::to_string(lineno) + ": expected 'enroll test label'");
    trials.push_back({tok[0], tok[1], ParseTrialLabel(tok[2])});
  }
  return trials;
}

void WriteTrials(const std::string &path, const std::vector<Trial> &trials) {
  std::ofstream os = OpenOut(path, false);
  for (const Trial &t : trials)
    os << t.enroll_id << ' ' << t.test_id << ' ' << TrialLabelName(t.label) << '\n';
}

void WriteScores(const std::string &path, const ScoreSet &scores) {
  std::ofstream os = OpenOut(path, false);
  char buf[64];
  for (const ScoredTrial &e : scores.entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.score);
    os << e.trial.enroll_id << ' ' << e.trial.test_id << ' ' << buf << '\n';
  }
}

ScoreSet ReadScores(const std::string &path, const std::vector<Trial> *trials) {
  std::map<std::pair<std::string, std::string>, TrialLabel> labels;
  if (trials)
    for (const Trial &t : *trials) labels[{t.enroll_id, t.test_id}] = t.label;
  std::ifstream is = OpenIn(path, false);
  ScoreSet set;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    auto tok = SplitLine(line);
    if (tok.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (tok.size() != 3) throw Error(ErrorKind::kFormat, where + ": expected 'enroll test score'");
    ScoredTrial e;
    e.trial.enroll_id = tok[0];
    e.trial.test_id = tok[1];
    try {
      size_t used = 0;
      e.score = std::stod(tok[2], &used);
      if (used != tok[2].size()) throw std::invalid_argument(tok[2]);
    } catch (const std::logic_error &) {
      throw Error(ErrorKind::kFormat, where + ": bad score '" + tok[2] + "'");
    }
    if (trials) {
      auto it = labels.find({tok[0], tok[1]});
      if (it == labels.end())
        throw Error(ErrorKind::kTrialMismatch, where + ": trial not in trial list");
      e.trial.label = it->second;
    }
    set.entries.push_back(std::move(e));
  }
  return set;
}

RegressionClassMap ReadClassMap(const std::string &path) {
  std::ifstream is = OpenIn(path, false);
  std::vector<int> classes;
  std::string tok;
  while (is >> tok) {
    try {
      size_t used = 0;
      int c = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      classes.push_back(c);
    } catch (const std::logic_error &) {
      throw Error(ErrorKind::kFormat, path + ": bad class index '" + tok + "'");
    }
  }
  if (classes.empty()) throw Error(ErrorKind::kFormat, path + ": empty class map");
  int k = *std::max_element(classes.begin(), classes.end()) + 1;
  return RegressionClassMap(std::move(classes), k);
}

std::vector<ManifestEntry> ReadManifest(const std::string &path) {
  std::ifstream is = OpenIn(path, false);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(is, line)) {
    auto tok = SplitLine(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 3)
      throw Error(ErrorKind::kFormat, path + ": expected 'session speaker frames_path'");
    std::filesystem::path fp(tok[2]);
    if (fp.is_relative()) fp = base / fp;
    entries.push_back({tok[0], tok[1], fp.string()});
  }
  return entries;
}

void WriteManifest(const std::string &path, const std::vector<ManifestEntry> &entries) {
  std::ofstream os = OpenOut(path, false);
  for (const ManifestEntry &e : entries)
    os << e.session_id << ' ' << e.speaker_id << ' ' << e.frames_path << '\n';
}

}  // namespace mvsv
