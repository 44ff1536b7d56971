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

#include "febias/perf_metrics.hpp"

#include "febias/error.hpp"

namespace febias {

namespace {

std::vector<StratumOutcome> collect_strata(const PredictionSet& preds,
                                           std::string_view expression,
                                           const AttributeSchema& schema,
                                           std::size_t* excluded_outside) {
  const auto* attr = preds.attribute_for(schema.name);
  if (attr == nullptr) {
    throw_validation("predictions carry no '" + schema.name + "' column");
  }
  std::size_t expr_class = AttributeSchema::npos;
  for (std::size_t c = 0; c < preds.class_vocabulary.size(); ++c) {
    if (preds.class_vocabulary[c] == expression) expr_class = c;
  }
  if (expr_class == AttributeSchema::npos) {
    throw_validation("expression '" + std::string(expression) +
                     "' not in prediction vocabulary");
  }

  std::vector<StratumOutcome> strata(schema.groups.size());
  for (std::size_t g = 0; g < schema.groups.size(); ++g) {
    strata[g].expression = expression;
    strata[g].group = schema.groups[g];
  }
  std::size_t outside = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds.true_class[i] != expr_class) continue;
    std::size_t g = schema.index_of((*attr)[i]);
    if (g == AttributeSchema::npos) {
      ++outside;
      continue;
    }
    std::uint8_t hit = preds.predicted_class[i] == preds.true_class[i] ? 1 : 0;
    strata[g].indicators.push_back(hit);
    strata[g].correct += hit;
  }
  if (excluded_outside != nullptr) *excluded_outside = outside;
  return strata;
}

}  // namespace

std::vector<StratumOutcome> stratify(const PredictionSet& preds,
                                     std::string_view expression,
                                     const AttributeSchema& schema,
                                     std::size_t* excluded_outside) {
  auto strata = collect_strata(preds, expression, schema, excluded_outside);
  for (const auto& s : strata) {
    if (s.n() == 0) {
      throw_validation("empty stratum (" + std::string(expression) + ", " +
                       s.group + ")");
    }
  }
  return strata;
}

std::vector<StratumOutcome> stratify_with_policy(
    const PredictionSet& preds, std::string_view expression,
    const AttributeSchema& schema, std::size_t min_stratum_size,
    std::vector<DroppedStratum>* dropped, std::size_t* excluded_outside) {
  auto strata = collect_strata(preds, expression, schema, excluded_outside);
  std::vector<StratumOutcome> kept;
  kept.reserve(strata.size());
  for (auto& s : strata) {
    if (s.n() < min_stratum_size) {
      if (dropped != nullptr) {
        dropped->push_back({s.expression, s.group, s.n()});
      }
      continue;
    }
    kept.push_back(std::move(s));
  }
  return kept;
}

double tpr(const StratumOutcome& s) {
  if (s.n() == 0) {
    throw_stat("TPR undefined on empty stratum (" + s.expression + ", " +
               s.group + ")");
  }
  return static_cast<double>(s.correct) / static_cast<double>(s.n());
}

double dip(double m_j, double m_jp) { return m_j - m_jp; }

std::string reference_group_perf(const std::vector<StratumOutcome>& strata) {
  if (strata.size() < 2) {
    throw_validation("reference selection needs at least 2 strata");
  }
  std::size_t best = 0;
  double best_tpr = tpr(strata[0]);
  for (std::size_t g = 1; g < strata.size(); ++g) {
    double t = tpr(strata[g]);
    if (t > best_tpr) {
      best = g;
      best_tpr = t;
    }
  }
  return strata[best].group;
}

DipFinding dip_finding(std::string_view expression, const AttributeSchema& schema,
                       const std::vector<StratumOutcome>& strata) {
  DipFinding f;
  f.expression = expression;
  f.attribute = schema.name;
  f.reference_group = reference_group_perf(strata);
  double ref_tpr = 0.0;
  for (const auto& s : strata) {
    if (s.group == f.reference_group) ref_tpr = tpr(s);
  }
  for (const auto& s : strata) {
    if (s.group == f.reference_group) continue;
    f.entries.push_back({s.group, dip(ref_tpr, tpr(s))});
  }
  return f;
}

}  // namespace febias
