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

#include "privcontrast/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "privcontrast/connectedness.h"
#include "privcontrast/corpus.h"
#include "privcontrast/error.h"
#include "privcontrast/json_output.h"
#include "privcontrast/privacy_engine.h"
#include "privcontrast/report.h"

namespace privcontrast {
namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

AuditParams audit_params(const CliConfig& config) {
  AuditParams params;
  params.delta = config.delta;
  params.index = config.index;
  params.include_self_pairs = config.include_self_pairs;
  params.max_failures = config.max_failures;
  params.require_unit_norm = config.normalize;
  return params;
}

void print_failure(std::ostream& out, const FailurePair& f) {
  out << "  " << f.x_id << " -> " << f.y_id << "  bias=" << format9(f.bias)
      << "  D(X(x),y)=" << format9(f.d_sanitized_to_y.value)
      << "  D(X(x),X(y))=" << format9(f.d_sanitized_to_sanitized.value)
      << '\n';
}

void print_warnings(const Corpus& corpus, std::ostream& err) {
  for (const std::string& w : corpus.warnings()) {
    err << "warning: " << w << '\n';
  }
}

int run_audit(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const Corpus corpus = ingest_pairs(config.pairs_path, config.normalize);
  print_warnings(corpus, err);
  const AuditReport report = audit(corpus, audit_params(config));
  out << "mechanism:  " << report.mechanism << '\n'
      << "pairs:      " << corpus.size() << " (dim " << corpus.dim() << ")\n"
      << "index:      " << index_kind_name(report.index.kind) << '\n'
      << "delta:      " << format9(report.delta) << '\n'
      << "result:     " << (report.passed ? "PASS" : "FAIL") << '\n'
      << "resolution: " << format9(report.resolution) << '\n'
      << "utility:    mean " << format9(report.utility_mean) << ", min "
      << format9(report.utility_min) << '\n'
      << "failures:   " << report.failure_count << '\n';
  const std::size_t shown = std::min(config.top_k, report.failures.size());
  if (shown > 0) {
    out << "worst " << shown << ":\n";
    for (std::size_t i = 0; i < shown; ++i) {
      print_failure(out, report.failures[i]);
    }
  }
  if (!report.noop_ids.empty()) {
    out << "no-op sanitizations: " << report.noop_ids.size() << '\n';
  }
  if (!config.out_path.empty()) {
    write_file(config.out_path, dump(to_json(report)) + "\n");
  }
  return report.passed ? kExitOk : kExitPrivacyFailure;
}

int run_resolution(const CliConfig& config, std::ostream& out,
                   std::ostream& err) {
  const Corpus corpus = ingest_pairs(config.pairs_path, config.normalize);
  print_warnings(corpus, err);
  const double value = resolution(corpus, audit_params(config));
  out << "resolution: " << format9(value) << '\n';
  if (!config.out_path.empty()) {
    Json j;
    j["mechanism"] = corpus.mechanism();
    j["resolution"] = round9(value);
    j["index"] = to_json(config.index);
    write_file(config.out_path, dump(j) + "\n");
  }
  return kExitOk;
}

int run_utility(const CliConfig& config, std::ostream& out,
                std::ostream& err) {
  const Corpus corpus = ingest_pairs(config.pairs_path, config.normalize);
  print_warnings(corpus, err);
  const UtilityStats stats = utility(corpus);
  out << "utility: mean " << format9(stats.mean) << ", min "
      << format9(stats.min) << '\n';
  if (!config.out_path.empty()) {
    Json j;
    j["mechanism"] = corpus.mechanism();
    j["mean"] = round9(stats.mean);
    j["min"] = round9(stats.min);
    Json items = Json::array();
    for (const auto& [id, value] : stats.per_item) {
      items.push_back(Json{{"id", id}, {"utility", round9(value)}});
    }
    j["per_item"] = std::move(items);
    write_file(config.out_path, dump(j) + "\n");
  }
  return kExitOk;
}

int run_connect(const CliConfig& config, std::ostream& out) {
  const std::vector<ConnectQuad> quads = ingest_quads(config.quads_path);
  const ConnectedVerdict verdict = concepts_connected(quads, config.delta);
  std::vector<double> slacks;
  std::size_t next_excluded = 0;
  for (std::size_t i = 0; i < quads.size(); ++i) {
    if (next_excluded < verdict.excluded.size() &&
        verdict.excluded[next_excluded] == i) {
      ++next_excluded;
      continue;
    }
    slacks.push_back(verdict.per_quad[i].slack);
  }
  const auto pcts = percentile_resolution(slacks, config.percentiles);
  out << "quads:     " << quads.size() << " (" << verdict.excluded.size()
      << " degenerate excluded)\n"
      << "delta:     " << format9(config.delta) << '\n'
      << "connected: " << (verdict.connected ? "yes" : "no") << '\n'
      << "min slack: " << format9(verdict.min_slack) << '\n';
  if (verdict.witness) {
    const ConnectQuad& w = quads[*verdict.witness];
    out << "witness:   (" << w.id_x << ", " << w.id_y << ")\n";
  }
  for (const auto& [p, value] : pcts) {
    out << "p" << format9(p) << ":  " << format9(value) << '\n';
  }
  if (!config.out_path.empty()) {
    write_file(config.out_path,
               dump(connect_to_json(quads, verdict, pcts, config.delta)) +
                   "\n");
  }
  return kExitOk;
}

// Accepts a JSON array or whitespace/comma separated numbers.
std::vector<double> read_slacks(const std::string& path) {
  std::ifstream in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> values;
  if (first != std::string::npos && text[first] == '[') {
    try {
      values = nlohmann::json::parse(text).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(path + ": " + e.what());
    }
    return values;
  }
  std::string token;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream tokens(normalized);
  while (tokens >> token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(path + ": not a number: \"" + token + "\"");
    }
    values.push_back(value);
  }
  return values;
}

int run_percentiles(const CliConfig& config, std::ostream& out) {
  const std::vector<double> slacks = read_slacks(config.slacks_path);
  const auto pcts = percentile_resolution(slacks, config.percentiles);
  Json j;
  j["count"] = slacks.size();
  j["percentile_method"] = "linear interpolation between closest ranks";
  Json array = Json::array();
  for (const auto& [p, value] : pcts) {
    out << "p" << format9(p) << ": " << format9(value) << '\n';
    array.push_back(Json{{"p", round9(p)}, {"value", round9(value)}});
  }
  j["percentiles"] = std::move(array);
  if (!config.out_path.empty()) write_file(config.out_path, dump(j) + "\n");
  return kExitOk;
}

bool ends_with_json(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

int run_pareto(const CliConfig& config, std::ostream& out) {
  if (!config.report_paths.empty()) {
    std::vector<AuditReport> reports;
    for (const std::string& path : config.report_paths) {
      std::ifstream in = open_input(path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": " + e.what());
      }
      reports.push_back(report_from_json(j));
    }
    const std::vector<ComparisonRow> rows = compare(reports);
    write_comparison_csv(rows, out);
    if (!config.out_path.empty()) {
      if (ends_with_json(config.out_path)) {
        std::ostringstream json_text;
        write_comparison_json(rows, json_text);
        write_file(config.out_path, json_text.str());
      } else {
        emit_comparison(reports, config.out_path);
      }
    }
    return kExitOk;
  }

  std::ifstream in = open_input(config.points_path);
  const std::vector<ParetoPoint> points = read_points_csv(in);
  const std::vector<ParetoPoint> frontier = pareto_frontier(points);
  out << "frontier (" << frontier.size() << " of " << points.size() << "):\n";
  for (const ParetoPoint& p : frontier) {
    out << "  " << p.label << "  resolution=" << format9(p.resolution)
        << "  utility=" << format9(p.utility) << '\n';
  }
  if (!config.out_path.empty()) {
    std::vector<bool> flagged(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
      flagged[i] = std::find(frontier.begin(), frontier.end(), points[i]) !=
                   frontier.end();
    }
    std::ostringstream text;
    if (ends_with_json(config.out_path)) {
      Json array = Json::array();
      for (std::size_t i = 0; i < points.size(); ++i) {
        array.push_back(Json{{"label", points[i].label},
                             {"resolution", round9(points[i].resolution)},
                             {"utility", round9(points[i].utility)},
                             {"pareto", static_cast<bool>(flagged[i])}});
      }
      text << dump(array) << '\n';
    } else {
      text << "label,resolution,utility,pareto\n";
      for (std::size_t i = 0; i < points.size(); ++i) {
        text << points[i].label << ',' << format9(points[i].resolution) << ','
             << format9(points[i].utility) << ','
             << (flagged[i] ? "true" : "false") << '\n';
      }
    }
    write_file(config.out_path, text.str());
  }
  return kExitOk;
}

int run_validate(const CliConfig& config, std::ostream& out,
                 std::ostream& err) {
  if (!config.pairs_path.empty()) {
    const Corpus corpus = ingest_pairs(config.pairs_path, config.normalize);
    print_warnings(corpus, err);
    out << config.pairs_path << ": " << corpus.size() << " pairs, dim "
        << corpus.dim() << ", mechanism \"" << corpus.mechanism() << "\", "
        << corpus.noop_ids().size() << " no-op\n";
  }
  if (!config.quads_path.empty()) {
    const std::vector<ConnectQuad> quads = ingest_quads(config.quads_path);
    std::size_t degenerate = 0;
    for (const ConnectQuad& q : quads) degenerate += is_degenerate(q) ? 1 : 0;
    out << config.quads_path << ": " << quads.size() << " quads, dim "
        << quads.front().x.dim() << ", " << degenerate << " degenerate\n";
  }
  return kExitOk;
}

void add_index_options(CLI::App* sub, CliConfig& config, std::string& kind) {
  sub->add_option("--index", kind, "Index kind: exact or hnsw")
      ->check(CLI::IsMember({"exact", "hnsw"}));
  sub->add_option("--M", config.index.M, "HNSW neighbors per node");
  sub->add_option("--ef-construction", config.index.ef_construction,
                  "HNSW build beam width");
  sub->add_option("--ef-search", config.index.ef_search,
                  "HNSW query beam width");
  sub->add_option("--ann-slack", config.index.ann_slack,
                  "Tolerated approximate-search shortfall");
  sub->add_option("--seed", config.index.seed, "HNSW level seed");
  sub->add_flag("--exclude-self", "Skip x == y pairs")
      ->each([&config](const std::string&) {
        config.include_self_pairs = false;
      });
}

void add_no_normalize(CLI::App* sub, CliConfig& config) {
  sub->add_flag("--no-normalize",
                "Keep raw vectors; audits then test raw biases")
      ->each([&config](const std::string&) { config.normalize = false; });
}

}  // namespace

void CliConfig::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error("--delta must be a finite value >= 0");
  }
  if (top_k < 1) throw Error("--top-k must be >= 1");
  index.validate();
  for (double p : percentiles) {
    if (!(p > 0.0 && p < 100.0)) {
      throw Error("percentiles must lie in (0, 100)");
    }
  }
}

std::optional<CliConfig> parse_args(int argc, const char* const* argv,
                                    int& exit_code, std::ostream& out,
                                    std::ostream& err) {
  CliConfig config;
  std::string kind = "exact";
  CLI::App app{"Contrastive privacy auditing of sanitization mechanisms"};
  app.name("privcontrast");
  app.require_subcommand(1);

  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Test a mechanism at resolution delta");
  audit_cmd->add_option("--pairs", config.pairs_path, "Pairs JSONL")
      ->required();
  audit_cmd->add_option("--delta", config.delta, "Privacy parameter");
  audit_cmd->add_option("--top-k", config.top_k, "Failures shown in summary");
  audit_cmd->add_option("--max-failures", config.max_failures,
                        "Failures kept in the report (0 = all)");
  audit_cmd->add_option("--out", config.out_path, "Report JSON path");
  add_index_options(audit_cmd, config, kind);
  add_no_normalize(audit_cmd, config);

  CLI::App* resolution_cmd =
      app.add_subcommand("resolution", "Minimal achievable resolution");
  resolution_cmd->add_option("--pairs", config.pairs_path, "Pairs JSONL")
      ->required();
  resolution_cmd->add_option("--out", config.out_path, "Output JSON path");
  add_index_options(resolution_cmd, config, kind);
  add_no_normalize(resolution_cmd, config);

  CLI::App* utility_cmd =
      app.add_subcommand("utility", "Original/sanitized cosine similarity");
  utility_cmd->add_option("--pairs", config.pairs_path, "Pairs JSONL")
      ->required();
  utility_cmd->add_option("--out", config.out_path, "Output JSON path");
  add_no_normalize(utility_cmd, config);

  CLI::App* connect_cmd =
      app.add_subcommand("connect", "Semantic connectedness of quadruples");
  connect_cmd->add_option("--quads", config.quads_path, "Quads JSONL")
      ->required();
  connect_cmd->add_option("--delta", config.delta, "Connectedness parameter");
  connect_cmd->add_option("--percentiles", config.percentiles,
                          "Slack percentiles")
      ->delimiter(',');
  connect_cmd->add_option("--out", config.out_path, "Output JSON path");

  CLI::App* percentiles_cmd =
      app.add_subcommand("percentiles", "Percentiles of a slack list");
  percentiles_cmd->add_option("--slacks", config.slacks_path,
                              "Numbers, one per line, or a JSON array")
      ->required();
  percentiles_cmd->add_option("--p", config.percentiles, "Percentiles")
      ->delimiter(',');
  percentiles_cmd->add_option("--out", config.out_path, "Output JSON path");

  CLI::App* pareto_cmd =
      app.add_subcommand("pareto", "Pareto frontier over mechanisms");
  auto* points_opt = pareto_cmd->add_option(
      "--points", config.points_path, "CSV of label,resolution,utility");
  auto* reports_opt = pareto_cmd->add_option(
      "--reports", config.report_paths, "Audit report JSON files");
  points_opt->excludes(reports_opt);
  pareto_cmd->add_option("--out", config.out_path, "CSV (or .json) path");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check pairs/quads files");
  validate_cmd->add_option("--pairs", config.pairs_path, "Pairs JSONL");
  validate_cmd->add_option("--quads", config.quads_path, "Quads JSONL");
  add_no_normalize(validate_cmd, config);

  try {
    app.parse(argc, argv);
    if (pareto_cmd->parsed() && config.points_path.empty() &&
        config.report_paths.empty()) {
      throw CLI::RequiredError("--points or --reports");
    }
    if (validate_cmd->parsed() && config.pairs_path.empty() &&
        config.quads_path.empty()) {
      throw CLI::RequiredError("--pairs or --quads");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    exit_code = code == 0 ? kExitOk : kExitError;
    return std::nullopt;
  }

  config.index.kind = parse_index_kind(kind);
  if (audit_cmd->parsed()) config.command = Command::kAudit;
  if (resolution_cmd->parsed()) config.command = Command::kResolution;
  if (utility_cmd->parsed()) config.command = Command::kUtility;
  if (connect_cmd->parsed()) config.command = Command::kConnect;
  if (percentiles_cmd->parsed()) config.command = Command::kPercentiles;
  if (pareto_cmd->parsed()) config.command = Command::kPareto;
  if (validate_cmd->parsed()) config.command = Command::kValidate;
  exit_code = kExitOk;
  return config;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::kAudit:
        return run_audit(config, out, err);
      case Command::kResolution:
        return run_resolution(config, out, err);
      case Command::kUtility:
        return run_utility(config, out, err);
      case Command::kConnect:
        return run_connect(config, out);
      case Command::kPercentiles:
        return run_percentiles(config, out);
      case Command::kPareto:
        return run_pareto(config, out);
      case Command::kValidate:
        return run_validate(config, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace privcontrast
