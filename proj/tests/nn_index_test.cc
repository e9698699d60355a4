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

#include <random>
#include <thread>

#include "doctest.h"
#include "privcontrast/error.h"
#include "privcontrast/hnsw.h"
#include "test_support.h"

namespace privcontrast {
namespace {

using Entries = std::vector<std::pair<std::string, std::vector<double>>>;

Entries random_entries(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.1, 1.5);
  Entries out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v = testing::random_unit(rng, dim);
    const double s = scale(rng);
    for (double& x : v) x *= s;
    out.emplace_back(testing::item_id(i), std::move(v));
  }
  return out;
}

// Exhaustive scan with a plain loop; ties go to the smallest id.
std::pair<std::string, double> scan_oracle(const Entries& entries,
                                           const std::vector<double>& u) {
  std::string best_id;
  double best = -INFINITY;
  for (const auto& [id, v] : entries) {
    const double s = testing::naive_dot(u, v);
    if (s > best || (s == best && id < best_id)) {
      best = s;
      best_id = id;
    }
  }
  return {best_id, best};
}

IndexParams hnsw_params() {
  IndexParams p;
  p.kind = IndexKind::kHnsw;
  return p;
}

TEST_CASE("exact index basics") {
  const Entries entries{{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}, {"c", {1, 1}}};
  const DiffIndex index = DiffIndex::build(entries, {});
  CHECK(index.size() == 3);
  CHECK(index.exhaustive());
  const Neighbor nb = index.nearest_ip(std::vector<double>{1.0, 0.0});
  CHECK(nb.score == 1.0);
  // a and c tie at 1.0; a wins lexicographically.
  CHECK(nb.id == "a");
  CHECK(testing::to_vec(nb.vector) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("two-vector nearest") {
  const Entries entries{{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}};
  const DiffIndex index = DiffIndex::build(entries, {});
  const Neighbor nb = index.nearest_ip(std::vector<double>{1.0, 0.0});
  CHECK(nb.id == "a");
  CHECK(nb.score == 1.0);
}

TEST_CASE("maximum inner product is magnitude sensitive") {
  const Entries entries{{"a", {0.2, 0.0}}, {"b", {2.0, 0.0}}};
  for (IndexKind kind : {IndexKind::kExact, IndexKind::kHnsw}) {
    IndexParams params;
    params.kind = kind;
    const DiffIndex index = DiffIndex::build(entries, params);
    const Neighbor nb = index.nearest_ip(std::vector<double>{1.0, 0.0});
    CHECK(nb.id == "b");
    CHECK(nb.score == 2.0);
    CHECK(testing::to_vec(nb.vector) == std::vector<double>{2.0, 0.0});
  }
}

TEST_CASE("ties resolve to the smallest id regardless of insertion order") {
  const Entries entries{{"zeta", {1.0, 0.0}}, {"alpha", {1.0, 0.0}},
                        {"mid", {1.0, 0.0}}};
  const DiffIndex index = DiffIndex::build(entries, {});
  CHECK(index.nearest_ip(std::vector<double>{1.0, 0.0}).id == "alpha");
  const auto top = index.search(std::vector<double>{1.0, 0.0}, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].id == "alpha");
  CHECK(top[1].id == "mid");
  CHECK(top[2].id == "zeta");
}

TEST_CASE("build errors") {
  CHECK_THROWS_AS(DiffIndex::build(Entries{}, {}), Error);
  const Entries ragged{{"a", {1.0}}, {"b", {1.0, 2.0}}};
  CHECK_THROWS_AS(DiffIndex::build(ragged, {}), Error);
  CHECK_THROWS_AS(DiffIndex::build(Entries{{"a", {1.0}}, {"a", {2.0}}}, {}),
                  Error);
  IndexParams bad;
  bad.ef_search = 0;
  CHECK_THROWS_AS(DiffIndex::build(Entries{{"a", {1.0}}}, bad), Error);
  bad = {};
  bad.ann_slack = -0.1;
  CHECK_THROWS_AS(DiffIndex::build(Entries{{"a", {1.0}}}, bad), Error);
  const DiffIndex index = DiffIndex::build(Entries{{"a", {1.0, 0.0}}}, {});
  CHECK_THROWS_AS(index.nearest_ip(std::vector<double>{1.0}), Error);
}

TEST_CASE("tiny HNSW index falls back to exhaustive search") {
  const Entries entries = random_entries(3, 8, 17);
  const DiffIndex index = DiffIndex::build(entries, hnsw_params());
  CHECK(index.size() == 3);
  CHECK(index.exhaustive());
  std::mt19937_64 rng(18);
  for (int q = 0; q < 50; ++q) {
    const auto u = testing::random_unit(rng, 8);
    const auto [id, score] = scan_oracle(entries, u);
    const Neighbor nb = index.nearest_ip(u);
    CHECK(nb.id == id);
    CHECK(nb.score == doctest::Approx(score).epsilon(1e-12));
  }
}

TEST_CASE("exact index equals exhaustive scan on random data") {
  const Entries entries = random_entries(1000, 64, 21);
  const DiffIndex index = DiffIndex::build(entries, {});
  std::mt19937_64 rng(22);
  for (int q = 0; q < 100; ++q) {
    const auto u = testing::random_unit(rng, 64);
    const auto [id, score] = scan_oracle(entries, u);
    const Neighbor nb = index.nearest_ip(u);
    CHECK(nb.id == id);
    CHECK(nb.score == doctest::Approx(score).epsilon(1e-12));
    // search(k) and at_least agree with the same scan.
    const auto top = index.search(u, 5);
    REQUIRE(top.size() == 5);
    CHECK(top[0].id == nb.id);
    for (std::size_t i = 1; i < top.size(); ++i) {
      CHECK(top[i - 1].score >= top[i].score);
    }
    const auto above = index.at_least(u, top[4].score);
    REQUIRE(above.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(above[i].id == top[i].id);
  }
}

TEST_CASE("HNSW score shortfall is rare at default ef_search") {
  const Entries entries = random_entries(5000, 128, 31);
  const DiffIndex exact = DiffIndex::build(entries, {});
  const DiffIndex approx = DiffIndex::build(entries, hnsw_params());
  CHECK_FALSE(approx.exhaustive());
  std::mt19937_64 rng(32);
  const int queries = 300;
  int misses = 0;
  for (int q = 0; q < queries; ++q) {
    const auto u = testing::random_unit(rng, 128);
    const double truth = exact.nearest_ip(u).score;
    const double found = approx.nearest_ip(u).score;
    CHECK(found <= truth);
    if (found < truth - 0.01) ++misses;
  }
  MESSAGE("hnsw misses: " << misses << " / " << queries);
  CHECK(misses <= queries * 5 / 100);
}

TEST_CASE("HNSW build and query are reproducible for a fixed seed") {
  const Entries entries = random_entries(2000, 32, 41);
  IndexParams params = hnsw_params();
  params.ef_search = 16;
  const DiffIndex a = DiffIndex::build(entries, params);
  const DiffIndex b = DiffIndex::build(entries, params);
  std::mt19937_64 rng(42);
  for (int q = 0; q < 100; ++q) {
    const auto u = testing::random_unit(rng, 32);
    const auto ra = a.search(u, 10);
    const auto rb = b.search(u, 10);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].id == rb[i].id);
      CHECK(ra[i].score == rb[i].score);
    }
  }
}

TEST_CASE("HNSW graph respects neighbor capacity") {
  const Entries entries = random_entries(600, 16, 51);
  std::vector<double> data;
  for (const auto& [id, v] : entries) {
    data.insert(data.end(), v.begin(), v.end());
  }
  std::vector<std::uint32_t> rank(entries.size());
  for (std::uint32_t i = 0; i < rank.size(); ++i) rank[i] = i;
  HnswGraph::Options options;
  options.max_neighbors = 8;
  options.ef_construction = 40;
  const HnswGraph graph(data, 16, rank, options);
  CHECK(graph.size() == 600);
  CHECK(graph.max_level() >= 1);
  for (std::uint32_t node = 0; node < graph.size(); ++node) {
    CHECK(graph.neighbors(node, 0).size() <= 16);
    CHECK(graph.neighbors(node, 1).size() <= 8);
    for (std::uint32_t other : graph.neighbors(node, 0)) CHECK(other != node);
  }
}

TEST_CASE("concurrent queries match sequential ones") {
  const Entries entries = random_entries(3000, 32, 61);
  const DiffIndex index = DiffIndex::build(entries, hnsw_params());
  std::mt19937_64 rng(62);
  std::vector<std::vector<double>> queries;
  for (int q = 0; q < 64; ++q) queries.push_back(testing::random_unit(rng, 32));
  std::vector<std::string> sequential;
  for (const auto& u : queries) {
    sequential.emplace_back(index.nearest_ip(u).id);
  }
  std::vector<std::string> concurrent(queries.size());
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t q = t; q < queries.size(); q += 4) {
        concurrent[q] = std::string(index.nearest_ip(queries[q]).id);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(concurrent == sequential);
}

}  // namespace
}  // namespace privcontrast
