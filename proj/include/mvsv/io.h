// mvsv/io.h

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

#ifndef MVSV_IO_H_
#define MVSV_IO_H_

#include <map>
#include <string>
#include <vector>

#include "mvsv/eval.h"
#include "mvsv/gmm.h"
#include "mvsv/mllr.h"
#include "mvsv/pipeline.h"
#include "mvsv/plda.h"
#include "mvsv/types.h"

namespace mvsv {

// Matrix files: a text header line "<MAGIC> v1 rows=<R> dim=<C>" followed by
// R*C IEEE-754 doubles, little-endian, row-major.  MAGIC is FRAMES or VEC.

void WriteMatrixFile(const std::string &path, const std::string &magic,
                     const Matrix &m);
Matrix ReadMatrixFile(const std::string &path, const std::string &magic);

inline void WriteFrames(const std::string &path, const Matrix &frames) {
  WriteMatrixFile(path, "FRAMES", frames);
}
inline Matrix ReadFrames(const std::string &path) {
  return ReadMatrixFile(path, "FRAMES");
}

/// VEC payload at `path`, ids at `path`.ids as "session_id speaker_id" lines.
void WriteVectorSet(const std::string &path, const VectorSet &set);
VectorSet ReadVectorSet(const std::string &path);

/**
   MODEL container:
     MODEL v1 type=<tag> sections=<n>
     SECTION name=<name> rows=<r> cols=<c>
     <r*c doubles, little-endian, row-major>
     ...
   Integers are stored as doubles.
*/
class ModelWriter {
 public:
  explicit ModelWriter(std::string type) : type_(std::move(type)) {}
  void Add(const std::string &name, const Matrix &m);
  void AddVector(const std::string &name, const Vector &v);
  void AddScalar(const std::string &name, double x);
  void Write(const std::string &path) const;

 private:
  std::string type_;
  std::vector<std::pair<std::string, Matrix>> sections_;
};

class ModelReader {
 public:
  explicit ModelReader(const std::string &path);
  const std::string &type() const { return type_; }
  /// Throws kFormat unless the container holds `type`.
  void ExpectType(const std::string &type) const;
  bool Has(const std::string &name) const { return sections_.count(name) > 0; }
  const Matrix &Get(const std::string &name) const;
  Vector GetVector(const std::string &name) const;
  double GetScalar(const std::string &name) const;

 private:
  std::string path_;
  std::string type_;
  std::map<std::string, Matrix> sections_;
};

void WriteGmm(const std::string &path, const DiagonalGmm &gmm);
DiagonalGmm ReadGmm(const std::string &path);

void WritePlda(const std::string &path, const PldaModel &model);
PldaModel ReadPlda(const std::string &path);

void WriteSystem(const std::string &path, const SystemModel &system);
SystemModel ReadSystem(const std::string &path);

/// "enroll_id test_id target|nontarget|unknown" per line.
std::vector<Trial> ReadTrials(const std::string &path);
void WriteTrials(const std::string &path, const std::vector<Trial> &trials);

/// "enroll_id test_id score" per line, scores with 17 significant digits.
void WriteScores(const std::string &path, const ScoreSet &scores);
/// Labels come from `trials` when given (matched on the id pair), otherwise
/// every entry is kUnknown.
ScoreSet ReadScores(const std::string &path, const std::vector<Trial> *trials = nullptr);

/// Whitespace-separated component class indices; K = max index + 1.
RegressionClassMap ReadClassMap(const std::string &path);

struct ManifestEntry {
  std::string session_id;
  std::string speaker_id;
  std::string frames_path;
};
/// "session_id speaker_id frames_path" per line; relative paths are resolved
/// against the manifest's directory.
std::vector<ManifestEntry> ReadManifest(const std::string &path);
void WriteManifest(const std::string &path, const std::vector<ManifestEntry> &entries);

}  // namespace mvsv

#endif  // MVSV_IO_H_
