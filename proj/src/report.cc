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

#include "privcontrast/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "privcontrast/error.h"
#include "privcontrast/json_output.h"

namespace privcontrast {
namespace {

bool frontier_order(const ParetoPoint& a, const ParetoPoint& b) {
  if (a.resolution != b.resolution) return a.resolution < b.resolution;
  if (a.utility != b.utility) return a.utility > b.utility;
  return a.label < b.label;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_real(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

}  // namespace

bool dominates(const ParetoPoint& p, const ParetoPoint& q) {
  return p.resolution <= q.resolution && p.utility >= q.utility &&
         (p.resolution < q.resolution || p.utility > q.utility);
}

std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points) {
  if (points.empty()) throw Error("pareto: no points given");
  for (const ParetoPoint& p : points) {
    if (!std::isfinite(p.resolution) || !std::isfinite(p.utility)) {
      throw Error("pareto: point \"" + p.label + "\" has non-finite values");
    }
  }
  std::vector<ParetoPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), frontier_order);

  // Sweep groups of equal resolution. Only a group's top utility can
  // survive, and only if it beats every utility at a smaller resolution.
  std::vector<ParetoPoint> frontier;
  bool have_best = false;
  double best_utility = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].resolution == sorted[i].resolution) {
      ++j;
    }
    const double top = sorted[i].utility;
    if (!have_best || top > best_utility) {
      for (std::size_t k = i; k < j && sorted[k].utility == top; ++k) {
        frontier.push_back(sorted[k]);
      }
      best_utility = top;
      have_best = true;
    }
    i = j;
  }
  return frontier;
}

std::vector<ParetoPoint> read_points_csv(std::istream& in) {
  std::vector<ParetoPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    const std::string where = "points line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) {
      throw Error(where + "expected label,resolution,utility");
    }
    const auto resolution = parse_real(fields[1]);
    const auto utility = parse_real(fields[2]);
    if (!resolution || !utility) {
      if (points.empty() && line_no == 1) continue;  // header
      throw Error(where + "resolution and utility must be finite numbers");
    }
    points.push_back({fields[0], *resolution, *utility});
  }
  if (points.empty()) throw Error("points: no rows found");
  return points;
}

std::vector<ComparisonRow> compare(std::span<const AuditReport> reports) {
  if (reports.empty()) throw Error("comparison: no reports given");
  std::unordered_set<std::string> labels;
  std::vector<ParetoPoint> points;
  for (const AuditReport& r : reports) {
    if (!labels.insert(r.mechanism).second) {
      throw Error("comparison: duplicate mechanism label \"" + r.mechanism +
                  "\"");
    }
    points.push_back({r.mechanism, r.resolution, r.utility_mean});
  }
  std::unordered_set<std::string> on_frontier;
  for (const ParetoPoint& p : pareto_frontier(points)) {
    on_frontier.insert(p.label);
  }
  std::vector<ComparisonRow> rows;
  for (const AuditReport& r : reports) {
    rows.push_back({r.mechanism, r.resolution, r.utility_mean, r.utility_min,
                    r.passed, on_frontier.contains(r.mechanism)});
  }
  return rows;
}

void write_comparison_csv(std::span<const ComparisonRow> rows,
                          std::ostream& out) {
  out << "mechanism,resolution,utility_mean,utility_min,passed,pareto\n";
  for (const ComparisonRow& r : rows) {
    out << r.mechanism << ',' << format9(r.resolution) << ','
        << format9(r.utility_mean) << ',' << format9(r.utility_min) << ','
        << (r.passed ? "true" : "false") << ','
        << (r.pareto ? "true" : "false") << '\n';
  }
}

void write_comparison_json(std::span<const ComparisonRow> rows,
                           std::ostream& out) {
  Json array = Json::array();
  for (const ComparisonRow& r : rows) {
    Json row;
    row["mechanism"] = r.mechanism;
    row["resolution"] = round9(r.resolution);
    row["utility_mean"] = round9(r.utility_mean);
    row["utility_min"] = round9(r.utility_min);
    row["passed"] = r.passed;
    row["pareto"] = r.pareto;
    array.push_back(std::move(row));
  }
  out << dump(array) << '\n';
}

void emit_comparison(std::span<const AuditReport> reports,
                     const std::filesystem::path& path) {
  const std::vector<ComparisonRow> rows = compare(reports);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_comparison_csv(rows, out);
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace privcontrast
