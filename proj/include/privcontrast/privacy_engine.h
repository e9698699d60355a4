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

// The contrastive privacy audit.
//
// For a corpus of (original, sanitized) pairs, the mechanism is private at
// resolution delta when for every ordered pair (x, y)
//
//   bias(x, y) = u_x . t_y < delta,
//
// where u_x is the sanitized embedding of x and t_y = E(y) - E(X(y)) is the
// difference vector of y. The audit indexes all t_y and asks, for each u_x,
// for the stored vector of largest inner product.

#ifndef PRIVCONTRAST_PRIVACY_ENGINE_H_
#define PRIVCONTRAST_PRIVACY_ENGINE_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "privcontrast/corpus.h"
#include "privcontrast/metric.h"
#include "privcontrast/nn_index.h"

namespace privcontrast {

struct AuditParams {
  double delta = 0.0;
  IndexParams index;
  bool include_self_pairs = true;
  // When false, raw vectors are audited as given: the bias test still
  // applies, but reported distances are 1 - dot rather than cosine
  // distances.
  bool require_unit_norm = true;
  // Caps the number of failures kept in the report (the strongest are
  // kept); 0 keeps all. failure_count always reflects the full total.
  std::size_t max_failures = 0;
  // 0 means use the configured default (see parallel.h).
  std::size_t threads = 0;

  void validate() const;
};

struct FailurePair {
  std::string x_id;
  std::string y_id;
  double bias = 0.0;
  Distance d_sanitized_to_y;          // D(X(x), y)
  Distance d_sanitized_to_sanitized;  // D(X(x), X(y))

  friend bool operator==(const FailurePair&, const FailurePair&) = default;
};

struct UtilityStats {
  double mean = 0.0;
  double min = 0.0;
  std::vector<std::pair<std::string, double>> per_item;
};

struct AuditReport {
  bool passed = false;
  double delta = 0.0;
  // max(0, raw_max_bias), plus ann_slack for HNSW audits.
  double resolution = 0.0;
  double raw_max_bias = 0.0;
  // Sorted by bias descending, then (x_id, y_id).
  std::vector<FailurePair> failures;
  std::size_t failure_count = 0;
  double utility_mean = 0.0;
  double utility_min = 0.0;
  std::vector<std::string> noop_ids;
  std::string mechanism;
  IndexParams index;
};

// Runs the full audit: enumerates every failing pair the index discovers
// and computes resolution and utility in the same pass. Throws Error when
// an embedding is not unit-normalized and params.require_unit_norm is set.
AuditReport audit(const Corpus& corpus, const AuditParams& params);

// Decision-only audit with early exit on the first failing query.
bool passes(const Corpus& corpus, const AuditParams& params);

// Smallest delta >= 0 above which the audit passes.
double resolution(const Corpus& corpus, const AuditParams& params);

// Cosine similarity of each original to its sanitization.
UtilityStats utility(const Corpus& corpus);

// The k ordered pairs of largest bias, ties broken by (x_id, y_id).
std::vector<FailurePair> worst_failures(const Corpus& corpus, std::size_t k,
                                        const AuditParams& params);

// Builds the (x, y) failure record; exposed for reporting tools.
FailurePair describe_pair(const CorpusPair& x, const CorpusPair& y);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_PRIVACY_ENGINE_H_
