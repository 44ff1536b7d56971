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

#ifndef FEBIAS_PERF_METRICS_HPP
#define FEBIAS_PERF_METRICS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "febias/dataset.hpp"

namespace febias {

// One (expression, group) stratum of the test set: per-sample correctness
// indicators in canonical (file) order.
struct StratumOutcome {
  std::string expression;
  std::string group;
  std::vector<std::uint8_t> indicators;
  std::size_t correct = 0;

  std::size_t n() const { return indicators.size(); }
};

// Stratifies samples with true_class == expression by attribute group.
// Samples whose attribute label is outside the schema are excluded and
// counted via `excluded_outside`. A schema group with zero samples for this
// expression is an error (statistical tests are undefined on it).
std::vector<StratumOutcome> stratify(const PredictionSet& preds,
                                     std::string_view expression,
                                     const AttributeSchema& schema,
                                     std::size_t* excluded_outside = nullptr);

// Tolerant variant: groups with fewer than `min_stratum_size` samples are
// dropped and reported instead of raising.
struct DroppedStratum {
  std::string expression;
  std::string group;
  std::size_t n = 0;
};
std::vector<StratumOutcome> stratify_with_policy(
    const PredictionSet& preds, std::string_view expression,
    const AttributeSchema& schema, std::size_t min_stratum_size,
    std::vector<DroppedStratum>* dropped,
    std::size_t* excluded_outside = nullptr);

// True positive rate of a stratum; the performance metric M of the shipped
// pipeline (Equal Opportunity when differenced).
double tpr(const StratumOutcome& s);

// DiP under a metric: M(D_{e,s_j}) - M(D_{e,s_j'}).
double dip(double m_j, double m_jp);

// Argmax of TPR over strata; exact ties break toward the earliest group in
// schema order (strata are already in schema order).
std::string reference_group_perf(const std::vector<StratumOutcome>& strata);

// Observed DEO values against the per-expression reference group.
struct DipEntry {
  std::string group;
  double observed = 0.0;
};
struct DipFinding {
  std::string expression;
  std::string attribute;
  std::string reference_group;
  std::vector<DipEntry> entries;
};

DipFinding dip_finding(std::string_view expression, const AttributeSchema& schema,
                       const std::vector<StratumOutcome>& strata);

}  // namespace febias

#endif  // FEBIAS_PERF_METRICS_HPP
