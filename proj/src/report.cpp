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

#include "febias/report.hpp"

#include "febias/error.hpp"
#include "febias/text.hpp"

namespace febias {

namespace {

void split_entries(const BiasFinding& f, std::vector<const BiasEntry*>& nonsig,
                   std::vector<const BiasEntry*>& sig) {
  for (const auto& e : f.entries) {
    if (e.result.validated == 0.0) {
      nonsig.push_back(&e);
    } else {
      sig.push_back(&e);
    }
  }
}

}  // namespace

std::string bias_direction_cell(const BiasFinding& finding) {
  std::vector<const BiasEntry*> nonsig;
  std::vector<const BiasEntry*> sig;
  split_entries(finding, nonsig, sig);

  std::string cell = finding.reference_group;
  for (const auto* e : nonsig) {
    cell += '/';
    cell += e->group;
  }
  if (!sig.empty()) {
    cell += " → ";
    if (sig.size() == 1) {
      cell += sig.front()->group;
    } else {
      cell += '(';
      for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i > 0) cell += ", ";
        cell += sig[i]->group;
      }
      cell += ')';
    }
  }
  return cell;
}

std::string validated_values_cell(const BiasFinding& finding) {
  std::vector<const BiasEntry*> nonsig;
  std::vector<const BiasEntry*> sig;
  split_entries(finding, nonsig, sig);
  if (sig.empty()) return "0";
  if (sig.size() == 1) return format_percent2(sig.front()->result.validated);
  std::string cell = "(";
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (i > 0) cell += ", ";
    cell += format_percent2(sig[i]->result.validated);
  }
  cell += ')';
  return cell;
}

std::string render_report(const std::vector<FindingsFile>& files) {
  if (files.empty()) throw_validation("report over empty findings list");

  std::string out = "# Demographic bias findings\n";
  std::size_t total_tests = 0;
  for (const auto& file : files) {
    const auto& meta = file.meta;
    if (file.findings.empty()) {
      throw_validation("findings file for attribute '" + meta.attribute +
                       "' contains no findings");
    }
    out += "\n## Attribute: " + meta.attribute + " (" + meta.source + ")\n\n";
    out += "| Expression | Bias direction | Validated value (%) |\n";
    out += "|---|---|---|\n";
    for (const auto& f : file.findings) {
      out += "| " + f.expression + " | " + bias_direction_cell(f) + " | " +
             validated_values_cell(f) + " |\n";
    }
    out += "\n";
    out += "Config: alpha=" + format_double(meta.alpha) +
           ", B=" + std::to_string(meta.permutations) +
           ", seed=" + std::to_string(meta.seed) +
           ", estimator=" + meta.estimator + ", tie-break=" + meta.tie_break +
           "\n";
    if (!meta.manifest_digest.empty()) {
      out += "Manifest: " + meta.manifest_digest + "\n";
    }
    std::size_t dropped_samples = meta.stats.test_dropped_outside_vocab +
                                  meta.stats.probe_dropped_outside_schema +
                                  meta.stats.predictions_dropped_outside_schema;
    if (dropped_samples > 0 || meta.stats.excluded_by_id_list > 0) {
      out += "Samples excluded: " + std::to_string(dropped_samples) +
             " outside the declared vocabulary/schema, " +
             std::to_string(meta.stats.excluded_by_id_list) +
             " by id-exclusion list\n";
    }
    if (!meta.stats.dropped_strata.empty()) {
      out += "Dropped strata (below the minimum size):";
      for (const auto& d : meta.stats.dropped_strata) {
        out += " (" + d.expression + ", " + d.group + ", n=" +
               std::to_string(d.n) + ")";
      }
      out += "\n";
    }
    total_tests += meta.stats.tests_run;
  }
  out += "\n---\n";
  out += "A validated value of 0 means the observed disparity is not "
         "statistically significant at the chosen threshold; it does not "
         "indicate that the observed value is zero.\n";
  out += "Permutation tests performed: " + std::to_string(total_tests) +
         ". No multiple-comparison correction is applied.\n";
  return out;
}

}  // namespace febias
