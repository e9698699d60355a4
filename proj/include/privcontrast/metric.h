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

#ifndef PRIVCONTRAST_METRIC_H_
#define PRIVCONTRAST_METRIC_H_

#include <compare>
#include <span>

#include "privcontrast/corpus.h"

namespace privcontrast {

// Semantic dissimilarity between two renderings. For unit embeddings the
// value lies in [0, 2].
struct Distance {
  double value = 0.0;

  friend auto operator<=>(const Distance&, const Distance&) = default;
};

// Inner product accumulated in double precision. Throws Error on a
// dimension mismatch.
double dot(std::span<const double> u, std::span<const double> v);

// Unchecked variant for hot loops; callers guarantee equal sizes.
double dot_unchecked(const double* u, const double* v, std::size_t n);

// 1 - x.y, the cosine distance of two unit embeddings.
Distance cosine_distance(const EmbeddingVector& x, const EmbeddingVector& y);

// The contrastive inequality for one ordered pair, evaluated through
// distances:  D(X(x), y) + delta > D(X(x), X(y)).
// Arguments are the sanitized x, the original y and the sanitized y.
bool contrastive_holds_distance_form(const EmbeddingVector& x_sanitized,
                                     const EmbeddingVector& y,
                                     const EmbeddingVector& y_sanitized,
                                     double delta);

// The same inequality rewritten in cosine space:
//   X(x) . (y - X(y)) < delta.
bool contrastive_holds_bias_form(const EmbeddingVector& x_sanitized,
                                 const EmbeddingVector& y,
                                 const EmbeddingVector& y_sanitized,
                                 double delta);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_METRIC_H_
