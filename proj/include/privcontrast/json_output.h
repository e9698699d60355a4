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

// JSON renderings of engine results. Keys are emitted in a fixed order and
// reals are rounded to 9 significant digits, so identical results always
// serialize to identical bytes.

#ifndef PRIVCONTRAST_JSON_OUTPUT_H_
#define PRIVCONTRAST_JSON_OUTPUT_H_

#include <span>
#include <string>

#include "json.hpp"
#include "privcontrast/connectedness.h"
#include "privcontrast/privacy_engine.h"

namespace privcontrast {

using Json = nlohmann::ordered_json;

double round9(double value);
std::string format9(double value);

Json to_json(const IndexParams& params);
Json to_json(const FailurePair& failure);
Json to_json(const AuditReport& report);

// Inverse of to_json(AuditReport) for the fields comparison tables need.
AuditReport report_from_json(const nlohmann::json& j);

Json connect_to_json(std::span<const ConnectQuad> quads,
                     const ConnectedVerdict& verdict,
                     std::span<const std::pair<double, double>> percentiles,
                     double delta);

std::string dump(const Json& j);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_JSON_OUTPUT_H_
