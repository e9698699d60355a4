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

#include "privcontrast/hnsw.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "privcontrast/error.h"
#include "privcontrast/metric.h"

namespace privcontrast {
namespace {

// Uniform draw in (0, 1] built from the raw engine output, so level
// assignment does not depend on the standard library's distributions.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

HnswGraph::HnswGraph(std::span<const double> data, std::size_t dim,
                     std::span<const std::uint32_t> tie_rank,
                     const Options& options)
    : data_(data), dim_(dim), tie_rank_(tie_rank), options_(options) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw Error("hnsw: data size is not a multiple of the dimension");
  }
  if (options_.max_neighbors < 2) throw Error("hnsw: M must be at least 2");
  if (options_.ef_construction == 0) {
    throw Error("hnsw: ef_construction must be positive");
  }
  const std::size_t n = data_.size() / dim_;
  if (tie_rank_.size() != n) throw Error("hnsw: tie rank size mismatch");

  std::mt19937_64 rng(options_.seed);
  const double level_mult =
      1.0 / std::log(static_cast<double>(options_.max_neighbors));
  levels_.resize(n);
  for (int& level : levels_) {
    level = static_cast<int>(-std::log(unit_draw(rng)) * level_mult);
  }
  std::vector<double> sq_norms(n);
  double max_sq_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data_.data() + i * dim_;
    sq_norms[i] = dot_unchecked(row, row, dim_);
    max_sq_norm = std::max(max_sq_norm, sq_norms[i]);
  }
  lift_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    lift_[i] = std::sqrt(std::max(0.0, max_sq_norm - sq_norms[i]));
  }
  links_.resize(n);
  Visited visited(n);
  for (std::uint32_t node = 0; node < n; ++node) {
    links_[node].resize(levels_[node] + 1);
    insert(node, levels_[node], visited);
  }
}

double HnswGraph::score(std::span<const double> query, double query_lift,
                        std::uint32_t node) const {
  return dot_unchecked(query.data(), data_.data() + node * dim_, dim_) +
         query_lift * lift_[node];
}

bool HnswGraph::better(const ScoredNode& a, const ScoredNode& b) const {
  if (a.score != b.score) return a.score > b.score;
  return tie_rank_[a.node] < tie_rank_[b.node];
}

std::size_t HnswGraph::capacity(int level) const {
  return level == 0 ? 2 * options_.max_neighbors : options_.max_neighbors;
}

std::span<const std::uint32_t> HnswGraph::neighbors(std::uint32_t node,
                                                    int level) const {
  if (node >= links_.size() || level < 0 ||
      level >= static_cast<int>(links_[node].size())) {
    return {};
  }
  return links_[node][level];
}

ScoredNode HnswGraph::greedy_descend(std::span<const double> query,
                                     double query_lift, ScoredNode entry,
                                     int from_level, int to_level) const {
  ScoredNode current = entry;
  for (int level = from_level; level >= to_level; --level) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::uint32_t next : links_[current.node][level]) {
        ScoredNode candidate{score(query, query_lift, next), next};
        if (better(candidate, current)) {
          current = candidate;
          improved = true;
        }
      }
    }
  }
  return current;
}

std::vector<ScoredNode> HnswGraph::search_layer(std::span<const double> query,
                                                double query_lift,
                                                const ScoredNode& entry,
                                                std::size_t ef, int level,
                                                Visited& visited) const {
  // `frontier` pops the most promising candidate first; `found` keeps the
  // ef best seen so far with the worst on top.
  auto frontier_cmp = [this](const ScoredNode& a, const ScoredNode& b) {
    return better(b, a);
  };
  auto found_cmp = [this](const ScoredNode& a, const ScoredNode& b) {
    return better(a, b);
  };
  std::priority_queue<ScoredNode, std::vector<ScoredNode>,
                      decltype(frontier_cmp)>
      frontier(frontier_cmp);
  std::priority_queue<ScoredNode, std::vector<ScoredNode>, decltype(found_cmp)>
      found(found_cmp);

  visited.next();
  visited.insert(entry.node);
  frontier.push(entry);
  found.push(entry);
  while (!frontier.empty()) {
    const ScoredNode current = frontier.top();
    if (found.size() >= ef && better(found.top(), current)) break;
    frontier.pop();
    for (std::uint32_t next : links_[current.node][level]) {
      if (!visited.insert(next)) continue;
      const ScoredNode candidate{score(query, query_lift, next), next};
      if (found.size() < ef || better(candidate, found.top())) {
        frontier.push(candidate);
        found.push(candidate);
        if (found.size() > ef) found.pop();
      }
    }
  }
  std::vector<ScoredNode> out;
  out.reserve(found.size());
  while (!found.empty()) {
    out.push_back(found.top());
    found.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void HnswGraph::insert(std::uint32_t node, int level, Visited& visited) {
  if (max_level_ < 0) {
    entry_point_ = node;
    max_level_ = level;
    return;
  }
  const std::span<const double> query = data_.subspan(node * dim_, dim_);
  const double lift = lift_[node];
  // Candidates come from two walks: one by lifted score, which reaches
  // small-norm neighbours, and one by raw dot product, which reaches the
  // large-norm hubs that answer most inner-product queries.
  ScoredNode lifted{score(query, lift, entry_point_), entry_point_};
  ScoredNode raw{score(query, 0.0, entry_point_), entry_point_};
  if (max_level_ > level) {
    lifted = greedy_descend(query, lift, lifted, max_level_, level + 1);
    raw = greedy_descend(query, 0.0, raw, max_level_, level + 1);
  }
  for (int l = std::min(level, max_level_); l >= 0; --l) {
    std::vector<ScoredNode> by_lift = search_layer(
        query, lift, lifted, options_.ef_construction, l, visited);
    std::vector<ScoredNode> by_raw = search_layer(
        query, 0.0, raw, options_.ef_construction, l, visited);
    lifted = by_lift.front();
    raw = by_raw.front();
    for (const ScoredNode& s : by_raw) {
      by_lift.push_back({score(query, lift, s.node), s.node});
    }
    std::sort(by_lift.begin(), by_lift.end(),
              [this](const ScoredNode& a, const ScoredNode& b) {
                return better(a, b);
              });
    by_lift.erase(std::unique(by_lift.begin(), by_lift.end(),
                              [](const ScoredNode& a, const ScoredNode& b) {
                                return a.node == b.node;
                              }),
                  by_lift.end());
    auto& own = links_[node][l];
    for (const std::uint32_t other :
         select(query, by_lift, options_.max_neighbors)) {
      own.push_back(other);
      links_[other][l].push_back(node);
      if (links_[other][l].size() > capacity(l)) shrink(other, l);
    }
  }
  if (level > max_level_) {
    entry_point_ = node;
    max_level_ = level;
  }
}

void HnswGraph::shrink(std::uint32_t node, int level) {
  const std::span<const double> base = data_.subspan(node * dim_, dim_);
  auto& list = links_[node][level];
  std::vector<ScoredNode> scored;
  scored.reserve(list.size());
  for (std::uint32_t other : list) {
    scored.push_back({score(base, lift_[node], other), other});
  }
  std::sort(scored.begin(), scored.end(),
            [this](const ScoredNode& a, const ScoredNode& b) {
              return better(a, b);
            });
  list = select(base, scored, capacity(level));
}

std::vector<std::uint32_t> HnswGraph::select(
    std::span<const double> base, const std::vector<ScoredNode>& ranked,
    std::size_t limit) const {
  std::vector<std::uint32_t> out;
  if (ranked.size() <= limit) {
    for (const ScoredNode& s : ranked) out.push_back(s.node);
    return out;
  }
  const std::size_t by_lift = (limit + 1) / 2;
  std::vector<ScoredNode> rest;
  rest.reserve(ranked.size() - by_lift);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i < by_lift) {
      out.push_back(ranked[i].node);
    } else {
      rest.push_back({score(base, 0.0, ranked[i].node), ranked[i].node});
    }
  }
  std::sort(rest.begin(), rest.end(),
            [this](const ScoredNode& a, const ScoredNode& b) {
              return better(a, b);
            });
  for (std::size_t i = 0; out.size() < limit; ++i) out.push_back(rest[i].node);
  return out;
}

std::vector<ScoredNode> HnswGraph::search(std::span<const double> query,
                                          std::size_t k,
                                          std::size_t ef) const {
  if (max_level_ < 0 || k == 0) return {};
  if (query.size() != dim_) throw Error("hnsw: query dimension mismatch");
  ScoredNode entry{score(query, 0.0, entry_point_), entry_point_};
  if (max_level_ > 0) {
    entry = greedy_descend(query, 0.0, entry, max_level_, 1);
  }
  Visited visited(levels_.size());
  std::vector<ScoredNode> out =
      search_layer(query, 0.0, entry, std::max(ef, k), 0, visited);
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace privcontrast
