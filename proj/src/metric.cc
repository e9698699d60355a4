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

#include <string>

#include "privcontrast/error.h"

namespace privcontrast {

double dot_unchecked(const double* u, const double* v, std::size_t n) {
  // Four independent accumulators; the summation order depends only on n,
  // so dot(u, v) and dot(v, u) are bitwise equal.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += u[i] * v[i];
    s1 += u[i + 1] * v[i + 1];
    s2 += u[i + 2] * v[i + 2];
    s3 += u[i + 3] * v[i + 3];
  }
  for (; i < n; ++i) s0 += u[i] * v[i];
  return (s0 + s1) + (s2 + s3);
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                std::to_string(v.size()));
  }
  return dot_unchecked(u.data(), v.data(), u.size());
}

Distance cosine_distance(const EmbeddingVector& x, const EmbeddingVector& y) {
  return Distance{1.0 - dot(x.components(), y.components())};
}

bool contrastive_holds_distance_form(const EmbeddingVector& x_sanitized,
                                     const EmbeddingVector& y,
                                     const EmbeddingVector& y_sanitized,
                                     double delta) {
  return cosine_distance(x_sanitized, y).value + delta >
         cosine_distance(x_sanitized, y_sanitized).value;
}

bool contrastive_holds_bias_form(const EmbeddingVector& x_sanitized,
                                 const EmbeddingVector& y,
                                 const EmbeddingVector& y_sanitized,
                                 double delta) {
  if (y.dim() != y_sanitized.dim()) {
    throw Error("dimension mismatch between y and its sanitization");
  }
  std::vector<double> diff(y.dim());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = y[i] - y_sanitized[i];
  }
  return dot(x_sanitized.components(), diff) < delta;
}

}  // namespace privcontrast
