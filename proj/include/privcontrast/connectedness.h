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

// Semantic connectedness of two concepts, tested on quadruples
// (x, X_c(x), y, X_d(y)). The concepts are connected at delta when both
//
//   D(x, y) + delta < D(X_c(x), y)   and   D(x, y) + delta < D(x, X_d(y))
//
// hold. The slack of a quadruple is the supremum of such delta.

#ifndef PRIVCONTRAST_CONNECTEDNESS_H_
#define PRIVCONTRAST_CONNECTEDNESS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "privcontrast/corpus.h"
#include "privcontrast/metric.h"

namespace privcontrast {

struct SlackResult {
  double slack = 0.0;  // may be negative
  Distance d_xy;
  Distance d_xc_y;
  Distance d_x_yd;
  bool connected_at_zero = false;
};

// Slack from the three distances directly.
SlackResult slack_from_distances(Distance d_xy, Distance d_xc_y,
                                 Distance d_x_yd);

// Throws Error on mismatched dimensions, or when X_c(x) == y or
// x == X_d(y), which the connectedness test excludes.
SlackResult connect_slack(const ConnectQuad& quad);

// True when the quad is one of the excluded degenerate identities.
bool is_degenerate(const ConnectQuad& quad);

struct ConnectedVerdict {
  bool connected = false;
  // Index of the minimal-slack quad when not connected.
  std::optional<std::size_t> witness;
  double min_slack = 0.0;
  std::vector<SlackResult> per_quad;  // parallel to the input; empty slot
                                      // data for excluded quads
  std::vector<std::size_t> excluded;  // degenerate quads skipped
};

// Connected iff every non-degenerate quad's slack exceeds delta. Throws
// Error when `quads` is empty or every quad is degenerate.
ConnectedVerdict concepts_connected(std::span<const ConnectQuad> quads,
                                    double delta);

// p-th percentiles of `slacks` by linear interpolation between closest
// ranks: rank h = (p / 100) * (n - 1) on the ascending order. Each p must
// lie in (0, 100).
std::vector<std::pair<double, double>> percentile_resolution(
    std::span<const double> slacks, std::span<const double> percentiles);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_CONNECTEDNESS_H_
