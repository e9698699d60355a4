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

#include "privcontrast/privacy_engine.h"

#include <random>
#include <set>

#include "doctest.h"
#include "privcontrast/error.h"
#include "test_support.h"

namespace privcontrast {
namespace {

using testing::pair_of;

AuditParams at_delta(double delta) {
  AuditParams p;
  p.delta = delta;
  return p;
}

AuditParams raw_at_delta(double delta) {
  AuditParams p = at_delta(delta);
  p.require_unit_norm = false;
  return p;
}

Corpus identity_corpus() {
  std::vector<CorpusPair> pairs;
  pairs.push_back(pair_of("a", {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}));
  pairs.push_back(pair_of("b", {0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}));
  pairs.push_back(pair_of("c", {0.6, 0.8, 0.0}, {0.6, 0.8, 0.0}));
  return Corpus(std::move(pairs));
}

// u_1 = [1,0], t_1 = [0,0.1]; u_2 = [0,1], t_2 = [0.1,0]. Originals are
// u + t, so the corpus is audited as raw vectors.
Corpus two_pair_corpus() {
  std::vector<CorpusPair> pairs;
  pairs.push_back(pair_of("1", {1.0, 0.1}, {1.0, 0.0}));
  pairs.push_back(pair_of("2", {0.1, 1.0}, {0.0, 1.0}));
  return Corpus(std::move(pairs));
}

std::set<std::pair<std::string, std::string>> failure_set(
    const AuditReport& report) {
  std::set<std::pair<std::string, std::string>> out;
  for (const FailurePair& f : report.failures) out.emplace(f.x_id, f.y_id);
  return out;
}

TEST_CASE("identity sanitization fails only at delta zero") {
  const Corpus corpus = identity_corpus();
  const AuditReport at_zero = audit(corpus, at_delta(0.0));
  CHECK_FALSE(at_zero.passed);
  CHECK(at_zero.failure_count == 9);
  CHECK(at_zero.resolution == 0.0);
  CHECK(at_zero.noop_ids == std::vector<std::string>{"a", "b", "c"});
  for (double d : {1e-12, 0.01, 0.5}) {
    const AuditReport r = audit(corpus, at_delta(d));
    CHECK(r.passed);
    CHECK(r.failures.empty());
  }
  CHECK(resolution(corpus, at_delta(0.0)) == 0.0);
  const UtilityStats u = utility(corpus);
  CHECK(u.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u.min == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-pair corpus has resolution 0.1") {
  const Corpus corpus = two_pair_corpus();
  // Oracle: all four ordered biases by hand.
  const auto biases = testing::oracle_biases(corpus);
  REQUIRE(biases.size() == 4);
  CHECK(testing::oracle_resolution(corpus) == doctest::Approx(0.1));

  const AuditReport r = audit(corpus, raw_at_delta(0.0));
  CHECK(r.resolution == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(r.raw_max_bias == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_FALSE(r.passed);
  // Self-biases are exactly 0 and fail at delta 0 as well.
  CHECK(r.failure_count == 4);
  CHECK(r.failures[0].x_id == "1");
  CHECK(r.failures[0].y_id == "2");
  CHECK(r.failures[0].bias == doctest::Approx(0.1).epsilon(1e-15));

  CHECK_FALSE(audit(corpus, raw_at_delta(0.1)).passed);
  CHECK(audit(corpus, raw_at_delta(0.1 + 1e-9)).passed);
  CHECK(resolution(corpus, raw_at_delta(0.0)) ==
        doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("raw corpora are rejected unless requested") {
  CHECK_THROWS_AS(audit(two_pair_corpus(), at_delta(0.0)), Error);
  CHECK_THROWS_AS(resolution(two_pair_corpus(), at_delta(0.0)), Error);
}

TEST_CASE("negative-bias corpus from prescribed distances passes at zero") {
  // Gram matrix of (x, X(x), y, X(y)) with D(x,y) = 0.42,
  // D(X(x),y) = 0.49, D(x,X(y)) = 0.37, D(X(x),X(y)) = 0.30 and 0.2 between
  // each original and its sanitization. Cross biases are then
  // 0.30 - 0.49 = -0.19 and 0.30 - 0.37 = -0.07; self biases are -0.2.
  const auto v = testing::gram_embedding({{1.00, 0.80, 0.58, 0.63},
                                          {0.80, 1.00, 0.51, 0.70},
                                          {0.58, 0.51, 1.00, 0.80},
                                          {0.63, 0.70, 0.80, 1.00}});
  std::vector<CorpusPair> pairs;
  pairs.push_back(pair_of("x", v[0], v[1]));
  pairs.push_back(pair_of("y", v[2], v[3]));
  const Corpus corpus(std::move(pairs));

  const AuditReport r = audit(corpus, at_delta(0.0));
  CHECK(r.passed);
  CHECK(r.resolution == 0.0);
  CHECK(r.raw_max_bias == doctest::Approx(-0.07).epsilon(1e-9));
  const auto worst = worst_failures(corpus, 4, at_delta(0.0));
  REQUIRE(worst.size() == 4);
  CHECK(worst[0].x_id == "y");
  CHECK(worst[0].y_id == "x");
  CHECK(worst[0].bias == doctest::Approx(-0.07).epsilon(1e-9));
  CHECK(worst[0].d_sanitized_to_y.value == doctest::Approx(0.37));
  CHECK(worst[0].d_sanitized_to_sanitized.value == doctest::Approx(0.30));
  CHECK(worst[1].bias == doctest::Approx(-0.19).epsilon(1e-9));
}

TEST_CASE("utility statistics") {
  std::vector<CorpusPair> orthogonal;
  orthogonal.push_back(pair_of("a", {1.0, 0.0}, {0.0, 1.0}));
  const UtilityStats o = utility(Corpus(std::move(orthogonal)));
  CHECK(o.mean == 0.0);

  std::vector<CorpusPair> pairs;
  pairs.push_back(pair_of("a", {1.0, 0.0}, {0.6, 0.8}));
  pairs.push_back(pair_of("b", {1.0, 0.0}, {0.8, 0.6}));
  const UtilityStats u = utility(Corpus(std::move(pairs)));
  CHECK(u.mean == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(u.min == doctest::Approx(0.6).epsilon(1e-15));
  REQUIRE(u.per_item.size() == 2);
  CHECK(u.per_item[1].first == "b");
  CHECK(u.per_item[1].second == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("worst failures") {
  SUBCASE("tie broken lexicographically") {
    const auto worst = worst_failures(two_pair_corpus(), 1, raw_at_delta(0.0));
    REQUIRE(worst.size() == 1);
    CHECK(worst[0].x_id == "1");
    CHECK(worst[0].y_id == "2");
    CHECK(worst[0].bias == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("identity sanitization gives zero biases") {
    const auto worst = worst_failures(identity_corpus(), 3, at_delta(0.0));
    REQUIRE(worst.size() == 3);
    CHECK(worst[0].x_id == "a");
    CHECK(worst[0].y_id == "a");
    CHECK(worst[1].y_id == "b");
    CHECK(worst[2].y_id == "c");
    for (const FailurePair& f : worst) CHECK(f.bias == 0.0);
  }
  SUBCASE("k beyond the pair count returns every pair") {
    CHECK(worst_failures(identity_corpus(), 100, at_delta(0.0)).size() == 9);
  }
  SUBCASE("k must be positive") {
    CHECK_THROWS_AS(worst_failures(identity_corpus(), 0, at_delta(0.0)),
                    Error);
  }
  SUBCASE("matches exhaustive ranking") {
    const Corpus corpus = testing::synthetic_corpus(60, 77, {.dim = 24});
    auto oracle = testing::oracle_biases(corpus);
    std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
      if (a.bias != b.bias) return a.bias > b.bias;
      return std::tie(a.x_id, a.y_id) < std::tie(b.x_id, b.y_id);
    });
    const auto worst = worst_failures(corpus, 25, at_delta(0.0));
    REQUIRE(worst.size() == 25);
    for (std::size_t i = 0; i < worst.size(); ++i) {
      CHECK(worst[i].x_id == oracle[i].x_id);
      CHECK(worst[i].y_id == oracle[i].y_id);
      CHECK(worst[i].bias == doctest::Approx(oracle[i].bias).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact audit matches the all-pairs oracle") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> residual(0.05, 0.6);
  for (int trial = 0; trial < 8; ++trial) {
    testing::SyntheticOptions options;
    options.dim = 32;
    options.max_residual = residual(rng);
    const Corpus corpus = testing::synthetic_corpus(40 + 20 * trial,
                                                    1000 + trial, options);
    const double res = testing::oracle_resolution(corpus);
    for (double delta : {0.0, res * 0.5, res * 0.99, res + 1e-6}) {
      const AuditReport r = audit(corpus, at_delta(delta));
      CHECK(r.resolution == doctest::Approx(res).epsilon(1e-9));
      CHECK(failure_set(r) == testing::oracle_failure_set(corpus, delta));
      CHECK(r.failure_count == r.failures.size());
      CHECK(r.passed == r.failures.empty());
      CHECK(passes(corpus, at_delta(delta)) == r.passed);
    }
  }
}

TEST_CASE("failures carry both distances of the inequality") {
  const Corpus corpus = testing::synthetic_corpus(30, 5, {.dim = 16});
  const AuditReport r = audit(corpus, at_delta(0.0));
  REQUIRE_FALSE(r.failures.empty());
  for (const FailurePair& f : r.failures) {
    // bias = D(X(x), X(y)) - D(X(x), y) for unit embeddings.
    CHECK(f.bias == doctest::Approx(f.d_sanitized_to_sanitized.value -
                                    f.d_sanitized_to_y.value)
                        .epsilon(1e-9)
                        .scale(1.0));
    // failure iff the distance form of the test is violated.
    CHECK_FALSE(f.d_sanitized_to_y.value + r.delta >
                f.d_sanitized_to_sanitized.value + 1e-12);
  }
  for (std::size_t i = 1; i < r.failures.size(); ++i) {
    CHECK(r.failures[i - 1].bias >= r.failures[i].bias);
  }
}

TEST_CASE("passing at delta implies passing at every larger delta") {
  for (int trial = 0; trial < 10; ++trial) {
    const Corpus corpus = testing::synthetic_corpus(30, 300 + trial,
                                                    {.dim = 16});
    bool passed_before = false;
    for (double delta = 0.0; delta < 0.6; delta += 0.02) {
      const bool now = audit(corpus, at_delta(delta)).passed;
      if (passed_before) CHECK(now);
      passed_before = passed_before || now;
    }
  }
}

TEST_CASE("resolution boundary") {
  for (int trial = 0; trial < 10; ++trial) {
    const Corpus corpus = testing::synthetic_corpus(25, 500 + trial,
                                                    {.dim = 12});
    const double res = resolution(corpus, at_delta(0.0));
    REQUIRE(res > 0.0);
    CHECK(audit(corpus, at_delta(res + 1e-9)).passed);
    CHECK_FALSE(audit(corpus, at_delta(res - 1e-9)).passed);
    CHECK_FALSE(audit(corpus, at_delta(res)).passed);
  }
}

TEST_CASE("self pairs never dominate for real sanitizations") {
  const Corpus corpus = testing::synthetic_corpus(50, 9, {.dim = 20});
  for (const CorpusPair& p : corpus.pairs()) {
    const double self_bias = dot(p.u().components(), p.t());
    const double similarity =
        dot(p.original.components(), p.sanitized.components());
    CHECK(self_bias < 0.0);
    CHECK(self_bias == doctest::Approx(similarity - 1.0).epsilon(1e-12));
  }
  AuditParams without_self = at_delta(0.0);
  without_self.include_self_pairs = false;
  const double with = resolution(corpus, at_delta(0.0));
  CHECK(resolution(corpus, without_self) == with);
  const AuditReport r = audit(corpus, without_self);
  for (const FailurePair& f : r.failures) CHECK(f.x_id != f.y_id);
  CHECK(failure_set(r) ==
        testing::oracle_failure_set(corpus, 0.0, /*include_self=*/false));
}

TEST_CASE("excluding self pairs on a single-pair corpus leaves nothing") {
  std::vector<CorpusPair> pairs;
  pairs.push_back(pair_of("a", {1.0, 0.0}, {1.0, 0.0}));
  const Corpus corpus(std::move(pairs));
  AuditParams params = at_delta(0.0);
  params.include_self_pairs = false;
  const AuditReport r = audit(corpus, params);
  CHECK(r.passed);
  CHECK(r.resolution == 0.0);
  CHECK_FALSE(audit(corpus, at_delta(0.0)).passed);
}

TEST_CASE("max_failures keeps the strongest failures") {
  const Corpus corpus = testing::synthetic_corpus(40, 13, {.dim = 16});
  const AuditReport full = audit(corpus, at_delta(0.0));
  AuditParams capped = at_delta(0.0);
  capped.max_failures = 7;
  const AuditReport r = audit(corpus, capped);
  CHECK(r.failure_count == full.failure_count);
  REQUIRE(r.failures.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(r.failures[i] == full.failures[i]);
}

TEST_CASE("thread count does not change the report") {
  const Corpus corpus = testing::synthetic_corpus(80, 23, {.dim = 16});
  AuditParams one = at_delta(0.05);
  one.threads = 1;
  AuditParams four = one;
  four.threads = 4;
  const AuditReport a = audit(corpus, one);
  const AuditReport b = audit(corpus, four);
  CHECK(a.failures == b.failures);
  CHECK(a.resolution == b.resolution);
}

TEST_CASE("HNSW audit tracks the exact audit and honors ann_slack") {
  const Corpus corpus = testing::synthetic_corpus(1500, 61, {.dim = 64});
  const AuditReport exact = audit(corpus, at_delta(0.0));
  AuditParams approx = at_delta(0.0);
  approx.index.kind = IndexKind::kHnsw;
  approx.max_failures = 10;
  const AuditReport found = audit(corpus, approx);
  CHECK(found.resolution <= exact.resolution + 1e-12);
  CHECK(found.resolution >= exact.resolution - 0.02);

  approx.index.ann_slack = 0.05;
  const AuditReport slacked = audit(corpus, approx);
  CHECK(slacked.resolution ==
        doctest::Approx(found.resolution + 0.05).epsilon(1e-12));
  approx.delta = found.resolution + 0.01;
  CHECK_FALSE(audit(corpus, approx).passed);
  approx.delta = found.resolution + 0.05 + 1e-9;
  CHECK(audit(corpus, approx).passed);
}

TEST_CASE("audit parameter validation") {
  const Corpus corpus = identity_corpus();
  CHECK_THROWS_AS(audit(corpus, at_delta(-0.1)), Error);
  CHECK_THROWS_AS(audit(corpus, at_delta(NAN)), Error);
}

}  // namespace
}  // namespace privcontrast
