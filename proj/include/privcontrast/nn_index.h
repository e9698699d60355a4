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

#ifndef PRIVCONTRAST_NN_INDEX_H_
#define PRIVCONTRAST_NN_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace privcontrast {

class HnswGraph;

enum class IndexKind { kExact, kHnsw };

std::string_view index_kind_name(IndexKind kind);
IndexKind parse_index_kind(std::string_view name);

struct IndexParams {
  IndexKind kind = IndexKind::kExact;
  std::size_t M = 16;
  std::size_t ef_construction = 200;
  std::size_t ef_search = 128;
  // Tolerated shortfall of approximate search, added to the privacy
  // parameter when judging HNSW audits.
  double ann_slack = 0.0;
  std::uint64_t seed = 42;

  // Throws Error on zero M/ef values or negative slack.
  void validate() const;
};

struct Neighbor {
  std::string_view id;
  std::span<const double> vector;
  double score = 0.0;
  std::size_t position = 0;  // insertion order of the owning entry
};

// Immutable maximum-inner-product index over raw (unnormalized) difference
// vectors. Ordering is by descending dot product, ties broken by the
// lexicographically smallest owner id.
class DiffIndex {
 public:
  // Throws Error on empty input, mismatched dimensions or duplicate ids.
  static DiffIndex build(
      std::span<const std::pair<std::string, std::vector<double>>> entries,
      const IndexParams& params);

  DiffIndex(DiffIndex&&) noexcept;
  DiffIndex& operator=(DiffIndex&&) noexcept;
  ~DiffIndex();

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  const IndexParams& params() const { return params_; }
  std::string_view id(std::size_t position) const { return ids_[position]; }
  std::span<const double> vector(std::size_t position) const;

  // The stored vector with the largest inner product with `u`.
  Neighbor nearest_ip(std::span<const double> u) const;

  // Up to k stored vectors by descending inner product.
  std::vector<Neighbor> search(std::span<const double> u,
                               std::size_t k) const;

  // Every stored vector the index discovers with score >= threshold, by
  // descending score. Exact indexes return all of them; HNSW indexes return
  // those within the ef_search beam.
  std::vector<Neighbor> at_least(std::span<const double> u,
                                 double threshold) const;

  // True when queries run a full scan (exact kind, or a graph smaller than
  // ef_search).
  bool exhaustive() const;

 private:
  DiffIndex() = default;
  void check_query(std::span<const double> u) const;
  std::vector<Neighbor> scan(std::span<const double> u) const;
  Neighbor make_neighbor(std::uint32_t position, double score) const;

  IndexParams params_;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::vector<std::uint32_t> id_rank_;
  std::unique_ptr<HnswGraph> graph_;
};

}  // namespace privcontrast

#endif  // PRIVCONTRAST_NN_INDEX_H_
