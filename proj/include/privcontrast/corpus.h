//
// Copyright 2026 The PrivContrast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Embedding corpora: the data model for (original, sanitized) rendering
// pairs and for connectedness quadruples, plus JSONL ingestion.
//
// Vectors are held in double precision. On ingestion every embedding is
// L2-normalized (unless disabled) and each pair's difference vector
// t = original - sanitized is computed from the normalized values.

#ifndef PRIVCONTRAST_CORPUS_H_
#define PRIVCONTRAST_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privcontrast {

// A fixed-dimension real vector with finite components.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  // Throws Error if `components` is empty or has a non-finite entry.
  explicit EmbeddingVector(std::vector<double> components);

  std::size_t dim() const { return components_.size(); }
  std::span<const double> components() const { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }
  double norm() const;

  friend bool operator==(const EmbeddingVector&,
                         const EmbeddingVector&) = default;

 private:
  std::vector<double> components_;
};

// Returns `v` scaled to unit L2 norm. Vectors whose norm is already within
// 1e-12 of one are returned unchanged, so normalization is idempotent.
// Throws Error on a zero-norm vector.
EmbeddingVector normalize(const EmbeddingVector& v);

// True when the L2 norm of `v` is within `tolerance` of one.
bool is_unit(const EmbeddingVector& v, double tolerance = 1e-6);

enum class Modality { kImage, kText, kOther };

std::string_view modality_name(Modality m);
// Throws Error on anything other than "image", "text" or "other".
Modality parse_modality(std::string_view name);

struct RenderingRef {
  std::string id;
  Modality modality = Modality::kOther;
  std::string mechanism;
  std::string concept_tag;
};

struct CorpusPair {
  RenderingRef ref;
  EmbeddingVector original;
  EmbeddingVector sanitized;
  // original - sanitized, not normalized.
  std::vector<double> difference;
  // Set when the sanitizer left the embedding unchanged (|t| == 0).
  bool noop = false;

  // The sanitized embedding; audits query the difference index with it.
  const EmbeddingVector& u() const { return sanitized; }
  std::span<const double> t() const { return difference; }
};

// Builds a pair, computing the difference vector and no-op flag.
CorpusPair make_pair(RenderingRef ref, EmbeddingVector original,
                     EmbeddingVector sanitized);

// A validated, immutable set of pairs sharing one dimension and one
// sanitization mechanism.
class Corpus {
 public:
  // Throws Error when `pairs` is empty, dimensions differ, ids repeat or
  // mechanisms differ.
  explicit Corpus(std::vector<CorpusPair> pairs);

  const std::vector<CorpusPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  std::size_t dim() const { return dim_; }
  const std::string& mechanism() const { return mechanism_; }
  std::vector<std::string> noop_ids() const;
  // Non-fatal ingestion diagnostics (no-op sanitizations).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<CorpusPair> pairs_;
  std::size_t dim_ = 0;
  std::string mechanism_;
  std::vector<std::string> warnings_;
};

struct ConnectQuad {
  std::string id_x;
  std::string id_y;
  EmbeddingVector x;
  EmbeddingVector x_sanitized;
  EmbeddingVector y;
  EmbeddingVector y_sanitized;
};

struct IngestOptions {
  bool normalize = true;
  // Used as the prefix of error messages, usually the file path.
  std::string source = "<input>";
};

// Parses pairs JSONL. Blank lines are skipped; errors carry the 1-based
// line number.
Corpus read_pairs(std::istream& in, const IngestOptions& options = {});
Corpus ingest_pairs(const std::filesystem::path& path, bool normalize = true);

std::vector<ConnectQuad> read_quads(std::istream& in,
                                    const IngestOptions& options = {});
std::vector<ConnectQuad> ingest_quads(const std::filesystem::path& path);

// Writes `corpus` back out as pairs JSONL with round-trip precision.
void write_pairs(const Corpus& corpus, std::ostream& out);
void write_quads(std::span<const ConnectQuad> quads, std::ostream& out);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_CORPUS_H_
