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

#ifndef PRIVCONTRAST_REPORT_H_
#define PRIVCONTRAST_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "privcontrast/privacy_engine.h"

namespace privcontrast {

// One mechanism in the (resolution, utility) plane. Lower resolution and
// higher utility are better.
struct ParetoPoint {
  std::string label;
  double resolution = 0.0;
  double utility = 0.0;

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

// p dominates q iff p is no worse on both axes and strictly better on one.
bool dominates(const ParetoPoint& p, const ParetoPoint& q);

// The non-dominated points, ascending by resolution (then descending
// utility, then label). Points with identical coordinates are all kept.
std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points);

// Reads "label,resolution,utility" rows; a header row is optional.
std::vector<ParetoPoint> read_points_csv(std::istream& in);

struct ComparisonRow {
  std::string mechanism;
  double resolution = 0.0;
  double utility_mean = 0.0;
  double utility_min = 0.0;
  bool passed = false;
  bool pareto = false;
};

// One row per report with Pareto membership over (resolution,
// utility_mean). Throws Error on empty input or duplicate labels.
std::vector<ComparisonRow> compare(std::span<const AuditReport> reports);

void write_comparison_csv(std::span<const ComparisonRow> rows,
                          std::ostream& out);
void write_comparison_json(std::span<const ComparisonRow> rows,
                           std::ostream& out);

// compare() then write CSV to `path`. Throws Error on write failure.
void emit_comparison(std::span<const AuditReport> reports,
                     const std::filesystem::path& path);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_REPORT_H_
