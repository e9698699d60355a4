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

#include "privcontrast/corpus.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "privcontrast/error.h"

namespace privcontrast {
namespace {

using nlohmann::json;

std::string at_line(const IngestOptions& options, std::size_t line) {
  return options.source + ":" + std::to_string(line) + ": ";
}

const json& require(const json& obj, const char* field,
                    const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw Error(where + "missing field \"" + field + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* field,
                           const std::string& where) {
  const json& value = require(obj, field, where);
  if (!value.is_string()) {
    throw Error(where + "field \"" + field + "\" must be a string");
  }
  return value.get<std::string>();
}

EmbeddingVector require_vector(const json& obj, const char* field,
                               const std::string& where, std::size_t line,
                               bool normalize_it) {
  const json& value = require(obj, field, where);
  if (!value.is_array() || value.empty()) {
    throw Error(where + "field \"" + field +
                "\" must be a nonempty array of numbers");
  }
  std::vector<double> components;
  components.reserve(value.size());
  for (const json& x : value) {
    if (!x.is_number()) {
      throw Error(where + "field \"" + field + "\" has a non-numeric entry");
    }
    components.push_back(x.get<double>());
  }
  EmbeddingVector v;
  try {
    v = EmbeddingVector(std::move(components));
  } catch (const Error& e) {
    throw Error(where + "field \"" + field + "\": " + e.what());
  }
  if (!normalize_it) return v;
  if (v.norm() == 0.0) {
    throw Error(where + "zero-norm embedding at line " + std::to_string(line) +
                " (field \"" + field + "\")");
  }
  return normalize(v);
}

// Calls fn(object, line_number) for each nonblank line.
template <typename Fn>
void for_each_object(std::istream& in, const IngestOptions& options, Fn fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(at_line(options, line) + "malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(at_line(options, line) + "expected a JSON object");
    }
    fn(obj, line);
  }
}

void check_dim(std::size_t& dim, std::size_t got, const std::string& where) {
  if (dim == 0) {
    dim = got;
  } else if (got != dim) {
    throw Error(where + "dimension mismatch: expected " +
                std::to_string(dim) + ", got " + std::to_string(got));
  }
}

json vector_json(std::span<const double> v) {
  return json(std::vector<double>(v.begin(), v.end()));
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error("embedding has zero dimension");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!std::isfinite(components_[i])) {
      throw Error("embedding component " + std::to_string(i) +
                  " is not finite");
    }
  }
}

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (double x : components_) sum += x * x;
  return std::sqrt(sum);
}

EmbeddingVector normalize(const EmbeddingVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error("cannot normalize a zero-norm embedding");
  if (std::abs(n - 1.0) <= 1e-12) return v;
  std::vector<double> out(v.components().begin(), v.components().end());
  for (double& x : out) x /= n;
  return EmbeddingVector(std::move(out));
}

bool is_unit(const EmbeddingVector& v, double tolerance) {
  return std::abs(v.norm() - 1.0) <= tolerance;
}

std::string_view modality_name(Modality m) {
  switch (m) {
    case Modality::kImage:
      return "image";
    case Modality::kText:
      return "text";
    case Modality::kOther:
      return "other";
  }
  return "other";
}

Modality parse_modality(std::string_view name) {
  if (name == "image") return Modality::kImage;
  if (name == "text") return Modality::kText;
  if (name == "other") return Modality::kOther;
  throw Error("unknown modality \"" + std::string(name) +
              "\" (expected image, text or other)");
}

CorpusPair make_pair(RenderingRef ref, EmbeddingVector original,
                     EmbeddingVector sanitized) {
  if (original.dim() != sanitized.dim()) {
    throw Error("pair \"" + ref.id + "\": dimension mismatch between " +
                "original and sanitized");
  }
  CorpusPair pair{std::move(ref), std::move(original), std::move(sanitized),
                  {}, false};
  pair.difference.resize(pair.original.dim());
  bool all_zero = true;
  for (std::size_t i = 0; i < pair.difference.size(); ++i) {
    pair.difference[i] = pair.original[i] - pair.sanitized[i];
    all_zero = all_zero && pair.difference[i] == 0.0;
  }
  pair.noop = all_zero;
  return pair;
}

Corpus::Corpus(std::vector<CorpusPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error("corpus is empty");
  dim_ = pairs_.front().original.dim();
  mechanism_ = pairs_.front().ref.mechanism;
  std::unordered_set<std::string> seen;
  for (const CorpusPair& p : pairs_) {
    if (p.ref.id.empty()) throw Error("pair with empty id");
    if (!seen.insert(p.ref.id).second) {
      throw Error("duplicate id \"" + p.ref.id + "\"");
    }
    if (p.original.dim() != dim_ || p.sanitized.dim() != dim_ ||
        p.difference.size() != dim_) {
      throw Error("pair \"" + p.ref.id + "\": dimension mismatch: expected " +
                  std::to_string(dim_));
    }
    if (p.ref.mechanism != mechanism_) {
      throw Error("pair \"" + p.ref.id + "\": mechanism \"" +
                  p.ref.mechanism + "\" differs from \"" + mechanism_ + "\"");
    }
    if (p.noop) {
      warnings_.push_back("pair \"" + p.ref.id +
                          "\": sanitized embedding equals original (no-op)");
    }
  }
}

std::vector<std::string> Corpus::noop_ids() const {
  std::vector<std::string> ids;
  for (const CorpusPair& p : pairs_) {
    if (p.noop) ids.push_back(p.ref.id);
  }
  return ids;
}

Corpus read_pairs(std::istream& in, const IngestOptions& options) {
  std::vector<CorpusPair> pairs;
  std::unordered_set<std::string> seen;
  std::string mechanism;
  std::size_t dim = 0;
  for_each_object(in, options, [&](const json& obj, std::size_t line) {
    const std::string where = at_line(options, line);
    RenderingRef ref;
    ref.id = require_string(obj, "id", where);
    if (ref.id.empty()) throw Error(where + "field \"id\" is empty");
    try {
      ref.modality = parse_modality(require_string(obj, "modality", where));
    } catch (const Error& e) {
      if (std::string_view(e.what()).starts_with(where)) throw;
      throw Error(where + e.what());
    }
    ref.mechanism = require_string(obj, "mechanism", where);
    ref.concept_tag = require_string(obj, "concept_tag", where);
    EmbeddingVector original =
        require_vector(obj, "original", where, line, options.normalize);
    EmbeddingVector sanitized =
        require_vector(obj, "sanitized", where, line, options.normalize);
    check_dim(dim, original.dim(), where);
    check_dim(dim, sanitized.dim(), where);
    if (!seen.insert(ref.id).second) {
      throw Error(where + "duplicate id \"" + ref.id + "\"");
    }
    if (pairs.empty()) {
      mechanism = ref.mechanism;
    } else if (ref.mechanism != mechanism) {
      throw Error(where + "mechanism \"" + ref.mechanism +
                  "\" differs from \"" + mechanism + "\"");
    }
    pairs.push_back(
        make_pair(std::move(ref), std::move(original), std::move(sanitized)));
  });
  if (pairs.empty()) throw Error(options.source + ": no pairs found");
  return Corpus(std::move(pairs));
}

Corpus ingest_pairs(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_pairs(in, IngestOptions{normalize, path.string()});
}

std::vector<ConnectQuad> read_quads(std::istream& in,
                                    const IngestOptions& options) {
  std::vector<ConnectQuad> quads;
  std::size_t dim = 0;
  for_each_object(in, options, [&](const json& obj, std::size_t line) {
    const std::string where = at_line(options, line);
    ConnectQuad q;
    q.id_x = require_string(obj, "id_x", where);
    q.id_y = require_string(obj, "id_y", where);
    const bool norm = options.normalize;
    q.x = require_vector(obj, "x", where, line, norm);
    q.x_sanitized = require_vector(obj, "x_sanitized", where, line, norm);
    q.y = require_vector(obj, "y", where, line, norm);
    q.y_sanitized = require_vector(obj, "y_sanitized", where, line, norm);
    for (const EmbeddingVector* v : {&q.x, &q.x_sanitized, &q.y,
                                     &q.y_sanitized}) {
      check_dim(dim, v->dim(), where);
    }
    quads.push_back(std::move(q));
  });
  if (quads.empty()) throw Error(options.source + ": no quadruples found");
  return quads;
}

std::vector<ConnectQuad> ingest_quads(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_quads(in, IngestOptions{true, path.string()});
}

void write_pairs(const Corpus& corpus, std::ostream& out) {
  for (const CorpusPair& p : corpus.pairs()) {
    nlohmann::ordered_json line;
    line["id"] = p.ref.id;
    line["modality"] = modality_name(p.ref.modality);
    line["mechanism"] = p.ref.mechanism;
    line["concept_tag"] = p.ref.concept_tag;
    line["original"] = vector_json(p.original.components());
    line["sanitized"] = vector_json(p.sanitized.components());
    out << line.dump() << '\n';
  }
}

void write_quads(std::span<const ConnectQuad> quads, std::ostream& out) {
  for (const ConnectQuad& q : quads) {
    nlohmann::ordered_json line;
    line["id_x"] = q.id_x;
    line["id_y"] = q.id_y;
    line["x"] = vector_json(q.x.components());
    line["x_sanitized"] = vector_json(q.x_sanitized.components());
    line["y"] = vector_json(q.y.components());
    line["y_sanitized"] = vector_json(q.y_sanitized.components());
    out << line.dump() << '\n';
  }
}

}  // namespace privcontrast
