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

#ifndef FEBIAS_SERIALIZE_HPP
#define FEBIAS_SERIALIZE_HPP

#include <string>
#include <vector>

#include "febias/association.hpp"
#include "febias/eval_compare.hpp"
#include "febias/stat_module.hpp"

namespace febias {

// Configuration snapshot carried inside findings files so downstream
// commands (compare, sweep, report) can run without the original flags.
struct FindingsMeta {
  std::string manifest_digest;  // empty when produced outside the CLI
  std::string attribute;
  std::vector<std::string> groups;
  std::vector<std::string> expressions;
  std::string source;  // "dia" | "dip"
  double alpha = 0.05;
  std::uint64_t permutations = 10000;
  std::uint64_t seed = 0;
  std::uint64_t exact_threshold = 100000;
  std::string estimator = "paper";
  std::string tie_break = "schema-order";
  SuiteStats stats;
};

struct FindingsFile {
  FindingsMeta meta;
  std::vector<BiasFinding> findings;
};

FindingsMeta make_meta(const PermutationConfig& cfg, const AttributeSchema& schema,
                       const std::vector<std::string>& expressions,
                       FindingSource source, const SuiteStats& stats);

std::string findings_to_json(const FindingsFile& file);
FindingsFile findings_from_json_text(const std::string& text,
                                     const std::string& context);
FindingsFile load_findings_json(const std::string& path);
void write_findings_json(const FindingsFile& file, const std::string& path);

// Flat CSV mirror of the JSON entries:
//   expression,attribute,reference_group,source,group,observed,p,validated,method,b_used
std::string findings_to_csv(const FindingsFile& file);
void write_findings_csv(const FindingsFile& file, const std::string& path);

// AssociationTable: "expression,group,A,count_e,count_s".
std::string association_table_to_csv(const AssociationTable& table,
                                     const std::string& manifest_digest);
std::string association_table_to_json(const AssociationTable& table,
                                      const std::string& manifest_digest);

// "expression,l1_percent,reference_match"; NaN rows print "NaN".
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows,
                              const std::string& manifest_digest);

// "alpha,avg_bias_percent"
std::string alpha_sweep_to_csv(const AlphaSweepResult& sweep,
                               const std::string& manifest_digest);

// "run,avg_bias_percent"
std::string runs_to_csv(const std::vector<RunComparison>& runs,
                        const std::string& manifest_digest);

}  // namespace febias

#endif  // FEBIAS_SERIALIZE_HPP
