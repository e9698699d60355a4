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

#include "privcontrast/connectedness.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "privcontrast/error.h"

namespace privcontrast {

SlackResult slack_from_distances(Distance d_xy, Distance d_xc_y,
                                 Distance d_x_yd) {
  SlackResult r;
  r.d_xy = d_xy;
  r.d_xc_y = d_xc_y;
  r.d_x_yd = d_x_yd;
  r.slack = std::min(d_xc_y.value - d_xy.value, d_x_yd.value - d_xy.value);
  r.connected_at_zero = r.slack > 0.0;
  return r;
}

bool is_degenerate(const ConnectQuad& quad) {
  return quad.x_sanitized == quad.y || quad.x == quad.y_sanitized;
}

SlackResult connect_slack(const ConnectQuad& quad) {
  const std::size_t dim = quad.x.dim();
  if (quad.x_sanitized.dim() != dim || quad.y.dim() != dim ||
      quad.y_sanitized.dim() != dim) {
    throw Error("quad (" + quad.id_x + ", " + quad.id_y +
                "): dimension mismatch");
  }
  if (quad.x_sanitized == quad.y) {
    throw Error("quad (" + quad.id_x + ", " + quad.id_y +
                "): degenerate, sanitized x equals y");
  }
  if (quad.x == quad.y_sanitized) {
    throw Error("quad (" + quad.id_x + ", " + quad.id_y +
                "): degenerate, x equals sanitized y");
  }
  return slack_from_distances(cosine_distance(quad.x, quad.y),
                              cosine_distance(quad.x_sanitized, quad.y),
                              cosine_distance(quad.x, quad.y_sanitized));
}

ConnectedVerdict concepts_connected(std::span<const ConnectQuad> quads,
                                    double delta) {
  if (quads.empty()) throw Error("connectedness: no quadruples given");
  ConnectedVerdict verdict;
  verdict.per_quad.resize(quads.size());
  std::optional<std::size_t> argmin;
  for (std::size_t i = 0; i < quads.size(); ++i) {
    if (is_degenerate(quads[i])) {
      verdict.excluded.push_back(i);
      continue;
    }
    verdict.per_quad[i] = connect_slack(quads[i]);
    if (!argmin ||
        verdict.per_quad[i].slack < verdict.per_quad[*argmin].slack) {
      argmin = i;
    }
  }
  if (!argmin) {
    throw Error("connectedness: every quadruple is degenerate");
  }
  verdict.min_slack = verdict.per_quad[*argmin].slack;
  verdict.connected = verdict.min_slack > delta;
  if (!verdict.connected) verdict.witness = argmin;
  return verdict;
}

std::vector<std::pair<double, double>> percentile_resolution(
    std::span<const double> slacks, std::span<const double> percentiles) {
  if (slacks.empty()) throw Error("percentiles: no slack values given");
  for (double s : slacks) {
    if (!std::isfinite(s)) throw Error("percentiles: non-finite slack value");
  }
  std::vector<double> sorted(slacks.begin(), slacks.end());
  std::sort(sorted.begin(), sorted.end());
  const double last = static_cast<double>(sorted.size() - 1);

  std::vector<std::pair<double, double>> out;
  out.reserve(percentiles.size());
  for (double p : percentiles) {
    if (!(p > 0.0 && p < 100.0)) {
      throw Error("percentiles: " + std::to_string(p) +
                  " is outside (0, 100)");
    }
    const double rank = p / 100.0 * last;
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    out.emplace_back(p, sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

}  // namespace privcontrast
