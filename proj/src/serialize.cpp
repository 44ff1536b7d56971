// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "febias/serialize.hpp"

#include <cmath>

#include <json.hpp>

#include "febias/error.hpp"
#include "febias/text.hpp"

namespace febias {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string source_name(FindingSource s) {
  return s == FindingSource::dia ? "dia" : "dip";
}

FindingSource source_from_name(const std::string& s) {
  if (s == "dia") return FindingSource::dia;
  if (s == "dip") return FindingSource::dip;
  throw_parse("unknown finding source '" + s + "'");
}

std::string method_name(TestMethod m) {
  return m == TestMethod::exact ? "exact" : "monte_carlo";
}

TestMethod method_from_name(const std::string& s) {
  if (s == "exact") return TestMethod::exact;
  if (s == "monte_carlo") return TestMethod::monte_carlo;
  throw_parse("unknown test method '" + s + "'");
}

std::string manifest_comment(const std::string& digest) {
  return digest.empty() ? std::string() : "# manifest: " + digest + "\n";
}

}  // namespace

FindingsMeta make_meta(const PermutationConfig& cfg, const AttributeSchema& schema,
                       const std::vector<std::string>& expressions,
                       FindingSource source, const SuiteStats& stats) {
  FindingsMeta meta;
  meta.attribute = schema.name;
  meta.groups = schema.groups;
  meta.expressions = expressions;
  meta.source = source_name(source);
  meta.alpha = cfg.alpha;
  meta.permutations = cfg.permutations;
  meta.seed = cfg.seed;
  meta.exact_threshold = cfg.exact_threshold;
  meta.estimator = cfg.estimator == Estimator::paper ? "paper" : "plus_one";
  meta.stats = stats;
  return meta;
}

std::string findings_to_json(const FindingsFile& file) {
  ordered_json root;
  root["manifest"] = file.meta.manifest_digest;
  ordered_json config;
  config["attribute"] = file.meta.attribute;
  config["groups"] = file.meta.groups;
  config["expressions"] = file.meta.expressions;
  config["source"] = file.meta.source;
  config["alpha"] = file.meta.alpha;
  config["permutations"] = file.meta.permutations;
  config["seed"] = file.meta.seed;
  config["exact_threshold"] = file.meta.exact_threshold;
  config["estimator"] = file.meta.estimator;
  config["tie_break"] = file.meta.tie_break;
  root["config"] = std::move(config);

  ordered_json stats;
  stats["tests_run"] = file.meta.stats.tests_run;
  stats["test_dropped_outside_vocab"] = file.meta.stats.test_dropped_outside_vocab;
  stats["probe_dropped_outside_schema"] =
      file.meta.stats.probe_dropped_outside_schema;
  stats["predictions_dropped_outside_schema"] =
      file.meta.stats.predictions_dropped_outside_schema;
  stats["excluded_by_id_list"] = file.meta.stats.excluded_by_id_list;
  ordered_json dropped = ordered_json::array();
  for (const auto& d : file.meta.stats.dropped_strata) {
    dropped.push_back({{"expression", d.expression},
                       {"group", d.group},
                       {"n", d.n}});
  }
  stats["dropped_strata"] = std::move(dropped);
  root["stats"] = std::move(stats);

  ordered_json findings = ordered_json::array();
  for (const auto& f : file.findings) {
    ordered_json jf;
    jf["expression"] = f.expression;
    jf["attribute"] = f.attribute;
    jf["reference_group"] = f.reference_group;
    jf["source"] = source_name(f.source);
    ordered_json entries = ordered_json::array();
    for (const auto& e : f.entries) {
      ordered_json je;
      je["group"] = e.group;
      je["observed"] = e.result.observed;
      je["p"] = e.result.p;
      je["validated"] = e.result.validated;
      je["method"] = method_name(e.result.method);
      je["b_used"] = e.result.b_used;
      entries.push_back(std::move(je));
    }
    jf["entries"] = std::move(entries);
    findings.push_back(std::move(jf));
  }
  root["findings"] = std::move(findings);
  return root.dump(2) + "\n";
}

FindingsFile findings_from_json_text(const std::string& text,
                                     const std::string& context) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw_parse("invalid findings JSON in " + context + ": " + e.what());
  }
  try {
    FindingsFile file;
    file.meta.manifest_digest = root.value("manifest", std::string());
    const auto& config = root.at("config");
    file.meta.attribute = config.at("attribute").get<std::string>();
    file.meta.groups = config.at("groups").get<std::vector<std::string>>();
    file.meta.expressions =
        config.at("expressions").get<std::vector<std::string>>();
    file.meta.source = config.at("source").get<std::string>();
    file.meta.alpha = config.at("alpha").get<double>();
    file.meta.permutations = config.at("permutations").get<std::uint64_t>();
    file.meta.seed = config.at("seed").get<std::uint64_t>();
    file.meta.exact_threshold = config.at("exact_threshold").get<std::uint64_t>();
    file.meta.estimator = config.at("estimator").get<std::string>();
    file.meta.tie_break = config.value("tie_break", std::string("schema-order"));
    if (root.contains("stats")) {
      const auto& stats = root.at("stats");
      file.meta.stats.tests_run = stats.value("tests_run", std::uint64_t{0});
      file.meta.stats.test_dropped_outside_vocab =
          stats.value("test_dropped_outside_vocab", std::uint64_t{0});
      file.meta.stats.probe_dropped_outside_schema =
          stats.value("probe_dropped_outside_schema", std::uint64_t{0});
      file.meta.stats.predictions_dropped_outside_schema =
          stats.value("predictions_dropped_outside_schema", std::uint64_t{0});
      file.meta.stats.excluded_by_id_list =
          stats.value("excluded_by_id_list", std::uint64_t{0});
      for (const auto& d : stats.value("dropped_strata", ordered_json::array())) {
        file.meta.stats.dropped_strata.push_back(
            {d.at("expression").get<std::string>(),
             d.at("group").get<std::string>(), d.at("n").get<std::size_t>()});
      }
    }
    for (const auto& jf : root.at("findings")) {
      BiasFinding f;
      f.expression = jf.at("expression").get<std::string>();
      f.attribute = jf.at("attribute").get<std::string>();
      f.reference_group = jf.at("reference_group").get<std::string>();
      f.source = source_from_name(jf.at("source").get<std::string>());
      for (const auto& je : jf.at("entries")) {
        BiasEntry e;
        e.group = je.at("group").get<std::string>();
        e.result.observed = je.at("observed").get<double>();
        e.result.p = je.at("p").get<double>();
        e.result.validated = je.at("validated").get<double>();
        e.result.method = method_from_name(je.at("method").get<std::string>());
        e.result.b_used = je.at("b_used").get<std::uint64_t>();
        f.entries.push_back(std::move(e));
      }
      file.findings.push_back(std::move(f));
    }
    return file;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw_parse("malformed findings file " + context + ": " + e.what());
  }
}

FindingsFile load_findings_json(const std::string& path) {
  return findings_from_json_text(read_text_file(path), path);
}

void write_findings_json(const FindingsFile& file, const std::string& path) {
  write_text_file(path, findings_to_json(file));
}

std::string findings_to_csv(const FindingsFile& file) {
  std::string out = manifest_comment(file.meta.manifest_digest);
  out += "expression,attribute,reference_group,source,group,observed,p,"
         "validated,method,b_used\n";
  for (const auto& f : file.findings) {
    for (const auto& e : f.entries) {
      out += f.expression;
      out += ',';
      out += f.attribute;
      out += ',';
      out += f.reference_group;
      out += ',';
      out += source_name(f.source);
      out += ',';
      out += e.group;
      out += ',';
      out += format_double(e.result.observed);
      out += ',';
      out += format_double(e.result.p);
      out += ',';
      out += format_double(e.result.validated);
      out += ',';
      out += method_name(e.result.method);
      out += ',';
      out += std::to_string(e.result.b_used);
      out += '\n';
    }
  }
  return out;
}

void write_findings_csv(const FindingsFile& file, const std::string& path) {
  write_text_file(path, findings_to_csv(file));
}

std::string association_table_to_csv(const AssociationTable& table,
                                     const std::string& manifest_digest) {
  std::string out = manifest_comment(manifest_digest);
  out += "expression,group,A,count_e,count_s\n";
  for (std::size_t e = 0; e < table.expressions.size(); ++e) {
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
      out += table.expressions[e];
      out += ',';
      out += table.groups[g];
      out += ',';
      out += format_double(table.at(e, g));
      out += ',';
      out += std::to_string(table.expression_counts[e]);
      out += ',';
      out += std::to_string(table.group_counts[g]);
      out += '\n';
    }
  }
  return out;
}

std::string association_table_to_json(const AssociationTable& table,
                                      const std::string& manifest_digest) {
  ordered_json root;
  root["manifest"] = manifest_digest;
  root["expressions"] = table.expressions;
  root["groups"] = table.groups;
  ordered_json cells = ordered_json::array();
  for (std::size_t e = 0; e < table.expressions.size(); ++e) {
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
      cells.push_back({{"expression", table.expressions[e]},
                       {"group", table.groups[g]},
                       {"A", table.at(e, g)},
                       {"count_e", table.expression_counts[e]},
                       {"count_s", table.group_counts[g]}});
    }
  }
  root["cells"] = std::move(cells);
  return root.dump(2) + "\n";
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows,
                              const std::string& manifest_digest) {
  std::string out = manifest_comment(manifest_digest);
  out += "expression,l1_percent,reference_match\n";
  for (const auto& row : rows) {
    out += row.expression;
    out += ',';
    out += std::isnan(row.l1) ? "NaN" : format_percent2(row.l1);
    out += ',';
    out += row.reference_match ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string alpha_sweep_to_csv(const AlphaSweepResult& sweep,
                               const std::string& manifest_digest) {
  std::string out = manifest_comment(manifest_digest);
  out += "alpha,avg_bias_percent\n";
  for (std::size_t i = 0; i < sweep.alphas.size(); ++i) {
    out += format_double(sweep.alphas[i]);
    out += ',';
    out += format_percent2(sweep.curve[i].value);
    out += '\n';
  }
  return out;
}

std::string runs_to_csv(const std::vector<RunComparison>& runs,
                        const std::string& manifest_digest) {
  std::string out = manifest_comment(manifest_digest);
  out += "run,avg_bias_percent\n";
  for (const auto& r : runs) {
    out += r.run;
    out += ',';
    out += format_percent2(r.result.value);
    out += '\n';
  }
  return out;
}

}  // namespace febias
