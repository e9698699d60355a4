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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "privcontrast/error.h"
#include "privcontrast/parallel.h"

namespace privcontrast {
namespace {

constexpr double kUnitTolerance = 1e-6;

void check_normalized(const Corpus& corpus, const AuditParams& params) {
  if (!params.require_unit_norm) return;
  for (const CorpusPair& p : corpus.pairs()) {
    if (!is_unit(p.original, kUnitTolerance) ||
        !is_unit(p.sanitized, kUnitTolerance)) {
      throw Error("normalization violated: pair \"" + p.ref.id +
                  "\" is not unit-norm (ingest with normalization enabled)");
    }
  }
}

DiffIndex build_difference_index(const Corpus& corpus,
                                 const IndexParams& params) {
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  entries.reserve(corpus.size());
  for (const CorpusPair& p : corpus.pairs()) {
    entries.emplace_back(p.ref.id, p.difference);
  }
  return DiffIndex::build(entries, params);
}

// The ANN shortfall only applies when queries are actually approximate.
double effective_slack(const DiffIndex& index) {
  return index.exhaustive() ? 0.0 : index.params().ann_slack;
}

bool ranks_before(const FailurePair& a, const FailurePair& b) {
  if (a.bias != b.bias) return a.bias > b.bias;
  if (a.x_id != b.x_id) return a.x_id < b.x_id;
  return a.y_id < b.y_id;
}

// Best non-excluded neighbor of pair x, or nullopt when x has no partner.
std::optional<Neighbor> best_partner(const DiffIndex& index,
                                     const CorpusPair& x, bool include_self) {
  if (include_self) return index.nearest_ip(x.u().components());
  for (const Neighbor& nb : index.search(x.u().components(), 2)) {
    if (nb.id != x.ref.id) return nb;
  }
  return std::nullopt;
}

std::optional<double> max_bias(const Corpus& corpus, const DiffIndex& index,
                               const AuditParams& params) {
  const auto& pairs = corpus.pairs();
  std::vector<std::optional<double>> best(pairs.size());
  parallel_for(pairs.size(), params.threads, [&](std::size_t i) {
    if (auto nb = best_partner(index, pairs[i], params.include_self_pairs)) {
      best[i] = nb->score;
    }
  });
  std::optional<double> out;
  for (const auto& b : best) {
    if (b && (!out || *b > *out)) out = b;
  }
  return out;
}

}  // namespace

void AuditParams::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error("audit: delta must be a finite value >= 0");
  }
  index.validate();
}

FailurePair describe_pair(const CorpusPair& x, const CorpusPair& y) {
  return FailurePair{x.ref.id, y.ref.id,
                     dot(x.u().components(), y.t()),
                     cosine_distance(x.sanitized, y.original),
                     cosine_distance(x.sanitized, y.sanitized)};
}

AuditReport audit(const Corpus& corpus, const AuditParams& params) {
  params.validate();
  check_normalized(corpus, params);
  const DiffIndex index = build_difference_index(corpus, params.index);
  const double slack = effective_slack(index);
  const double threshold = params.delta - slack;
  const auto& pairs = corpus.pairs();

  struct PerQuery {
    std::optional<double> best;
    std::vector<FailurePair> failures;
    std::size_t failure_count = 0;
  };
  std::vector<PerQuery> results(pairs.size());
  parallel_for(pairs.size(), params.threads, [&](std::size_t i) {
    const CorpusPair& x = pairs[i];
    PerQuery& r = results[i];
    if (auto nb = best_partner(index, x, params.include_self_pairs)) {
      r.best = nb->score;
    }
    for (const Neighbor& nb : index.at_least(x.u().components(), threshold)) {
      if (!params.include_self_pairs && nb.id == x.ref.id) continue;
      ++r.failure_count;
      if (params.max_failures == 0 ||
          r.failures.size() < params.max_failures) {
        r.failures.push_back(describe_pair(x, pairs[nb.position]));
      }
    }
  });

  AuditReport report;
  report.delta = params.delta;
  report.mechanism = corpus.mechanism();
  report.index = params.index;
  report.noop_ids = corpus.noop_ids();
  std::optional<double> raw;
  for (PerQuery& r : results) {
    if (r.best && (!raw || *r.best > *raw)) raw = r.best;
    report.failure_count += r.failure_count;
    report.failures.insert(report.failures.end(),
                           std::make_move_iterator(r.failures.begin()),
                           std::make_move_iterator(r.failures.end()));
  }
  std::sort(report.failures.begin(), report.failures.end(), ranks_before);
  if (params.max_failures > 0 && report.failures.size() > params.max_failures) {
    report.failures.resize(params.max_failures);
  }
  report.raw_max_bias = raw.value_or(0.0);
  report.resolution = raw ? std::max(0.0, *raw + slack) : 0.0;
  report.passed = report.failure_count == 0;

  const UtilityStats u = utility(corpus);
  report.utility_mean = u.mean;
  report.utility_min = u.min;
  return report;
}

bool passes(const Corpus& corpus, const AuditParams& params) {
  params.validate();
  check_normalized(corpus, params);
  const DiffIndex index = build_difference_index(corpus, params.index);
  const double threshold = params.delta - effective_slack(index);
  for (const CorpusPair& x : corpus.pairs()) {
    auto nb = best_partner(index, x, params.include_self_pairs);
    if (nb && nb->score >= threshold) return false;
  }
  return true;
}

double resolution(const Corpus& corpus, const AuditParams& params) {
  params.validate();
  check_normalized(corpus, params);
  const DiffIndex index = build_difference_index(corpus, params.index);
  const std::optional<double> raw = max_bias(corpus, index, params);
  return raw ? std::max(0.0, *raw + effective_slack(index)) : 0.0;
}

UtilityStats utility(const Corpus& corpus) {
  if (corpus.size() == 0) throw Error("utility: corpus is empty");
  UtilityStats stats;
  stats.min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const CorpusPair& p : corpus.pairs()) {
    const double similarity =
        dot(p.original.components(), p.sanitized.components());
    stats.per_item.emplace_back(p.ref.id, similarity);
    sum += similarity;
    stats.min = std::min(stats.min, similarity);
  }
  stats.mean = sum / static_cast<double>(corpus.size());
  return stats;
}

std::vector<FailurePair> worst_failures(const Corpus& corpus, std::size_t k,
                                        const AuditParams& params) {
  if (k == 0) throw Error("worst_failures: k must be positive");
  params.validate();
  check_normalized(corpus, params);
  const DiffIndex index = build_difference_index(corpus, params.index);
  const auto& pairs = corpus.pairs();
  const std::size_t fetch = params.include_self_pairs ? k : k + 1;

  std::vector<std::vector<FailurePair>> per_query(pairs.size());
  parallel_for(pairs.size(), params.threads, [&](std::size_t i) {
    const CorpusPair& x = pairs[i];
    for (const Neighbor& nb : index.search(x.u().components(), fetch)) {
      if (!params.include_self_pairs && nb.id == x.ref.id) continue;
      if (per_query[i].size() == k) break;
      per_query[i].push_back(describe_pair(x, pairs[nb.position]));
    }
  });
  std::vector<FailurePair> out;
  for (auto& list : per_query) {
    out.insert(out.end(), std::make_move_iterator(list.begin()),
               std::make_move_iterator(list.end()));
  }
  const std::size_t keep = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + keep, out.end(), ranks_before);
  out.resize(keep);
  return out;
}

}  // namespace privcontrast
