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

#include "privcontrast/metric.h"

#include <random>

#include "doctest.h"
#include "privcontrast/error.h"
#include "test_support.h"

namespace privcontrast {
namespace {

using testing::random_unit;

TEST_CASE("cosine distance of basic configurations") {
  const EmbeddingVector e1({1.0, 0.0});
  const EmbeddingVector e2({0.0, 1.0});
  const EmbeddingVector neg({-1.0, 0.0});
  CHECK(cosine_distance(e1, e1).value == 0.0);
  CHECK(cosine_distance(e1, e2).value == 1.0);
  CHECK(cosine_distance(e1, neg).value == 2.0);
}

TEST_CASE("dot product") {
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> b{0.5, 0.5};
  const std::vector<double> zero{0.0, 0.0};
  CHECK(dot(a, b) == 0.5);
  CHECK(dot(b, zero) == 0.0);
  CHECK_THROWS_AS(dot(a, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(
      cosine_distance(EmbeddingVector({1.0}), EmbeddingVector({1.0, 0.0})),
      Error);
}

TEST_CASE("dot is symmetric and matches a plain loop") {
  std::mt19937_64 rng(3);
  for (std::size_t dim : {1u, 3u, 4u, 7u, 64u, 129u}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto u = testing::random_gaussian(rng, dim);
      const auto v = testing::random_gaussian(rng, dim);
      CHECK(dot(u, v) == dot(v, u));
      CHECK(dot(u, v) ==
            doctest::Approx(testing::naive_dot(u, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance axioms on random unit vectors") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const EmbeddingVector x(random_unit(rng, 32));
    const EmbeddingVector y(random_unit(rng, 32));
    CHECK(cosine_distance(x, y) == cosine_distance(y, x));
    CHECK(std::abs(cosine_distance(x, x).value) < 1e-9);
    CHECK(cosine_distance(x, y).value > 0.0);
    CHECK(cosine_distance(x, y).value <= 2.0 + 1e-9);
  }
}

TEST_CASE("distance and bias forms of the contrastive test agree") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> delta(-0.5, 0.5);
  for (int trial = 0; trial < 3000; ++trial) {
    const EmbeddingVector ux(random_unit(rng, 16));
    const EmbeddingVector ey(random_unit(rng, 16));
    const EmbeddingVector ecy(random_unit(rng, 16));
    const double d = delta(rng);
    CHECK(contrastive_holds_distance_form(ux, ey, ecy, d) ==
          contrastive_holds_bias_form(ux, ey, ecy, d));
  }
}

TEST_CASE("contrastive inequality is strict at the boundary") {
  // u . (y - X(y)) = 0 exactly.
  const EmbeddingVector u({1.0, 0.0});
  const EmbeddingVector y({0.0, 1.0});
  const EmbeddingVector y_sanitized({0.0, -1.0});
  CHECK_FALSE(contrastive_holds_bias_form(u, y, y_sanitized, 0.0));
  CHECK_FALSE(contrastive_holds_distance_form(u, y, y_sanitized, 0.0));
  CHECK(contrastive_holds_bias_form(u, y, y_sanitized, 1e-12));
}

}  // namespace
}  // namespace privcontrast
