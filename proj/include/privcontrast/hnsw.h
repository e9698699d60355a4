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

// Hierarchical navigable small world graph ordered by inner product.
//
// Nodes are inserted sequentially with levels drawn from a seeded
// generator, so a given (data, parameters, seed) always yields the same
// graph.
//
// Queries are ranked by the raw dot product. The graph itself is wired on
// lifted vectors [v, sqrt(R^2 - |v|^2)], R the largest stored norm, which
// all share norm R; linking by raw dot product alone starves small-norm
// vectors of in-links and leaves them unreachable. A query lifted with a
// zero coordinate scores exactly its raw dot product against any lifted
// node. Each link list mixes the best lifted neighbours with the best raw
// dot-product neighbours (the large-norm hubs most queries end at).

#ifndef PRIVCONTRAST_HNSW_H_
#define PRIVCONTRAST_HNSW_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace privcontrast {

struct ScoredNode {
  double score;
  std::uint32_t node;
};

class HnswGraph {
 public:
  struct Options {
    std::size_t max_neighbors = 16;  // M
    std::size_t ef_construction = 200;
    std::uint64_t seed = 42;
  };

  // `data` is row-major, `count` rows of `dim` values; it must outlive the
  // graph. `tie_rank[i]` orders nodes with equal scores (lower first).
  HnswGraph(std::span<const double> data, std::size_t dim,
            std::span<const std::uint32_t> tie_rank, const Options& options);

  // Beam search with width max(ef, k); returns up to k nodes by descending
  // score. Safe to call concurrently.
  std::vector<ScoredNode> search(std::span<const double> query,
                                 std::size_t k, std::size_t ef) const;

  std::size_t size() const { return levels_.size(); }
  int max_level() const { return max_level_; }
  // Neighbor list of `node` on `level`; exposed for structural tests.
  std::span<const std::uint32_t> neighbors(std::uint32_t node,
                                           int level) const;

 private:
  // Epoch-tagged visited set, reused across layers of one search.
  struct Visited {
    explicit Visited(std::size_t n) : tag(n, 0) {}
    void next() { ++epoch; }
    bool insert(std::uint32_t node) {
      if (tag[node] == epoch) return false;
      tag[node] = epoch;
      return true;
    }
    std::vector<std::uint32_t> tag;
    std::uint32_t epoch = 1;
  };

  // query . node + query_lift * lift_[node]; query_lift is 0 for searches
  // and the inserted node's own lift during construction.
  double score(std::span<const double> query, double query_lift,
               std::uint32_t node) const;
  bool better(const ScoredNode& a, const ScoredNode& b) const;
  std::vector<ScoredNode> search_layer(std::span<const double> query,
                                       double query_lift,
                                       const ScoredNode& entry, std::size_t ef,
                                       int level, Visited& visited) const;
  // Picks `limit` links from `ranked` (sorted by lifted score): the best
  // half by lifted score, the rest by raw dot product with `base`.
  std::vector<std::uint32_t> select(std::span<const double> base,
                                    const std::vector<ScoredNode>& ranked,
                                    std::size_t limit) const;
  ScoredNode greedy_descend(std::span<const double> query, double query_lift,
                            ScoredNode entry, int from_level,
                            int to_level) const;
  void insert(std::uint32_t node, int level, Visited& visited);
  void shrink(std::uint32_t node, int level);
  std::size_t capacity(int level) const;

  std::span<const double> data_;
  std::size_t dim_;
  std::span<const std::uint32_t> tie_rank_;
  Options options_;
  std::vector<double> lift_;
  std::vector<int> levels_;
  // links_[node][level] is the adjacency list of node at that level.
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;
  std::uint32_t entry_point_ = 0;
  int max_level_ = -1;
};

}  // namespace privcontrast

#endif  // PRIVCONTRAST_HNSW_H_
