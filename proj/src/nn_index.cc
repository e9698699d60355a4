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

#include "privcontrast/nn_index.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "privcontrast/error.h"
#include "privcontrast/hnsw.h"
#include "privcontrast/metric.h"

namespace privcontrast {

std::string_view index_kind_name(IndexKind kind) {
  return kind == IndexKind::kExact ? "exact" : "hnsw";
}

IndexKind parse_index_kind(std::string_view name) {
  if (name == "exact") return IndexKind::kExact;
  if (name == "hnsw") return IndexKind::kHnsw;
  throw Error("unknown index kind \"" + std::string(name) +
              "\" (expected exact or hnsw)");
}

void IndexParams::validate() const {
  if (M < 2) throw Error("index: M must be at least 2");
  if (ef_construction < 1) throw Error("index: ef_construction must be >= 1");
  if (ef_search < 1) throw Error("index: ef_search must be >= 1");
  if (!(ann_slack >= 0.0)) throw Error("index: ann_slack must be >= 0");
}

DiffIndex::DiffIndex(DiffIndex&&) noexcept = default;
DiffIndex& DiffIndex::operator=(DiffIndex&&) noexcept = default;
DiffIndex::~DiffIndex() = default;

DiffIndex DiffIndex::build(
    std::span<const std::pair<std::string, std::vector<double>>> entries,
    const IndexParams& params) {
  params.validate();
  if (entries.empty()) throw Error("index: no vectors to index");
  DiffIndex index;
  index.params_ = params;
  index.dim_ = entries.front().second.size();
  if (index.dim_ == 0) throw Error("index: zero-dimensional vectors");
  index.ids_.reserve(entries.size());
  index.data_.reserve(entries.size() * index.dim_);
  std::unordered_set<std::string_view> seen;
  for (const auto& [id, v] : entries) {
    if (v.size() != index.dim_) {
      throw Error("index: dimension mismatch for \"" + id + "\": expected " +
                  std::to_string(index.dim_) + ", got " +
                  std::to_string(v.size()));
    }
    if (!seen.insert(id).second) {
      throw Error("index: duplicate owner id \"" + id + "\"");
    }
    index.ids_.push_back(id);
    index.data_.insert(index.data_.end(), v.begin(), v.end());
  }

  // id_rank_[p] is the lexicographic rank of ids_[p].
  const std::size_t n = index.ids_.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return index.ids_[a] < index.ids_[b];
  });
  index.id_rank_.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) index.id_rank_[order[r]] = r;

  if (params.kind == IndexKind::kHnsw && !index.exhaustive()) {
    HnswGraph::Options options;
    options.max_neighbors = params.M;
    options.ef_construction = params.ef_construction;
    options.seed = params.seed;
    index.graph_ = std::make_unique<HnswGraph>(index.data_, index.dim_,
                                               index.id_rank_, options);
  }
  return index;
}

bool DiffIndex::exhaustive() const {
  return params_.kind == IndexKind::kExact || ids_.size() < params_.ef_search;
}

std::span<const double> DiffIndex::vector(std::size_t position) const {
  return std::span<const double>(data_).subspan(position * dim_, dim_);
}

void DiffIndex::check_query(std::span<const double> u) const {
  if (ids_.empty()) throw Error("index: query on an empty index");
  if (u.size() != dim_) {
    throw Error("index: query dimension " + std::to_string(u.size()) +
                " does not match index dimension " + std::to_string(dim_));
  }
}

Neighbor DiffIndex::make_neighbor(std::uint32_t position, double score) const {
  return Neighbor{ids_[position], vector(position), score, position};
}

std::vector<Neighbor> DiffIndex::scan(std::span<const double> u) const {
  std::vector<Neighbor> all;
  all.reserve(ids_.size());
  for (std::uint32_t p = 0; p < ids_.size(); ++p) {
    all.push_back(make_neighbor(
        p, dot_unchecked(u.data(), data_.data() + p * dim_, dim_)));
  }
  return all;
}

namespace {

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

Neighbor DiffIndex::nearest_ip(std::span<const double> u) const {
  check_query(u);
  if (exhaustive()) {
    std::uint32_t best = 0;
    double best_score = dot_unchecked(u.data(), data_.data(), dim_);
    for (std::uint32_t p = 1; p < ids_.size(); ++p) {
      const double s = dot_unchecked(u.data(), data_.data() + p * dim_, dim_);
      if (s > best_score || (s == best_score && id_rank_[p] < id_rank_[best])) {
        best = p;
        best_score = s;
      }
    }
    return make_neighbor(best, best_score);
  }
  return search(u, 1).front();
}

std::vector<Neighbor> DiffIndex::search(std::span<const double> u,
                                        std::size_t k) const {
  check_query(u);
  if (k == 0) return {};
  if (exhaustive()) {
    std::vector<Neighbor> all = scan(u);
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + keep, all.end(),
                      ranks_before);
    all.resize(keep);
    return all;
  }
  std::vector<Neighbor> out;
  for (const ScoredNode& hit : graph_->search(u, k, params_.ef_search)) {
    out.push_back(make_neighbor(hit.node, hit.score));
  }
  return out;
}

std::vector<Neighbor> DiffIndex::at_least(std::span<const double> u,
                                          double threshold) const {
  check_query(u);
  std::vector<Neighbor> out;
  if (exhaustive()) {
    for (Neighbor& nb : scan(u)) {
      if (nb.score >= threshold) out.push_back(nb);
    }
  } else {
    for (const ScoredNode& hit :
         graph_->search(u, params_.ef_search, params_.ef_search)) {
      if (hit.score >= threshold) {
        out.push_back(make_neighbor(hit.node, hit.score));
      }
    }
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

}  // namespace privcontrast
