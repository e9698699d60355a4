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

#include "privcontrast/json_output.h"

#include <cstdio>
#include <cstdlib>

#include "privcontrast/error.h"

namespace privcontrast {

std::string format9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

// The nearest double to a 9-digit decimal prints back as that decimal,
// since doubles carry more than 15 significant digits.
double round9(double value) {
  const double rounded = std::strtod(format9(value).c_str(), nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

Json to_json(const IndexParams& params) {
  Json j;
  j["kind"] = index_kind_name(params.kind);
  j["M"] = params.M;
  j["ef_construction"] = params.ef_construction;
  j["ef_search"] = params.ef_search;
  j["ann_slack"] = round9(params.ann_slack);
  j["seed"] = params.seed;
  return j;
}

Json to_json(const FailurePair& failure) {
  Json j;
  j["x_id"] = failure.x_id;
  j["y_id"] = failure.y_id;
  j["bias"] = round9(failure.bias);
  j["d_xc_y"] = round9(failure.d_sanitized_to_y.value);
  j["d_xc_yc"] = round9(failure.d_sanitized_to_sanitized.value);
  return j;
}

Json to_json(const AuditReport& report) {
  Json j;
  j["passed"] = report.passed;
  j["delta"] = round9(report.delta);
  j["resolution"] = round9(report.resolution);
  j["raw_max_bias"] = round9(report.raw_max_bias);
  j["utility"] = Json{{"mean", round9(report.utility_mean)},
                      {"min", round9(report.utility_min)}};
  j["failure_count"] = report.failure_count;
  Json failures = Json::array();
  for (const FailurePair& f : report.failures) failures.push_back(to_json(f));
  j["failures"] = std::move(failures);
  j["noop_ids"] = report.noop_ids;
  j["mechanism"] = report.mechanism;
  j["index"] = to_json(report.index);
  return j;
}

AuditReport report_from_json(const nlohmann::json& j) {
  try {
    AuditReport r;
    r.passed = j.at("passed").get<bool>();
    r.delta = j.at("delta").get<double>();
    r.resolution = j.at("resolution").get<double>();
    r.utility_mean = j.at("utility").at("mean").get<double>();
    r.utility_min = j.at("utility").at("min").get<double>();
    r.mechanism = j.at("mechanism").get<std::string>();
    if (j.contains("raw_max_bias")) {
      r.raw_max_bias = j["raw_max_bias"].get<double>();
    }
    if (j.contains("noop_ids")) {
      r.noop_ids = j["noop_ids"].get<std::vector<std::string>>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("audit report JSON: ") + e.what());
  }
}

Json connect_to_json(std::span<const ConnectQuad> quads,
                     const ConnectedVerdict& verdict,
                     std::span<const std::pair<double, double>> percentiles,
                     double delta) {
  Json j;
  j["delta"] = round9(delta);
  j["connected"] = verdict.connected;
  j["min_slack"] = round9(verdict.min_slack);
  if (verdict.witness) {
    const ConnectQuad& w = quads[*verdict.witness];
    j["witness"] = Json::array({w.id_x, w.id_y});
  } else {
    j["witness"] = nullptr;
  }
  j["percentile_method"] = "linear interpolation between closest ranks";
  Json per_quad = Json::array();
  std::size_t next_excluded = 0;
  for (std::size_t i = 0; i < quads.size(); ++i) {
    Json q;
    q["ids"] = Json::array({quads[i].id_x, quads[i].id_y});
    if (next_excluded < verdict.excluded.size() &&
        verdict.excluded[next_excluded] == i) {
      ++next_excluded;
      q["excluded"] = true;
    } else {
      const SlackResult& s = verdict.per_quad[i];
      q["slack"] = round9(s.slack);
      q["d_xy"] = round9(s.d_xy.value);
      q["d_xc_y"] = round9(s.d_xc_y.value);
      q["d_x_yd"] = round9(s.d_x_yd.value);
      q["connected_at_zero"] = s.connected_at_zero;
    }
    per_quad.push_back(std::move(q));
  }
  j["per_quad"] = std::move(per_quad);
  Json pcts = Json::array();
  for (const auto& [p, value] : percentiles) {
    pcts.push_back(Json{{"p", round9(p)}, {"value", round9(value)}});
  }
  j["percentiles"] = std::move(pcts);
  return j;
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace privcontrast
