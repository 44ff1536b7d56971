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

#include "febias/eval_compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "febias/error.hpp"

namespace febias {

ComparisonRow l1_compare(const BiasFinding& method, const BiasFinding& truth) {
  if (method.expression != truth.expression ||
      method.attribute != truth.attribute) {
    throw_validation("compared findings must share expression and attribute");
  }
  auto group_set = [](const BiasFinding& f) {
    std::set<std::string> s{f.reference_group};
    for (const auto& e : f.entries) s.insert(e.group);
    return s;
  };
  if (group_set(method) != group_set(truth)) {
    throw_validation("compared findings cover different group sets for '" +
                     method.expression + "'");
  }

  ComparisonRow row;
  row.expression = method.expression;
  row.reference_match = method.reference_group == truth.reference_group;
  if (!row.reference_match) {
    row.l1 = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  double sum = 0.0;
  for (const auto& me : method.entries) {
    const BiasEntry* te = nullptr;
    for (const auto& cand : truth.entries) {
      if (cand.group == me.group) te = &cand;
    }
    sum += std::abs(me.result.validated - te->result.validated);
  }
  row.l1 = sum / static_cast<double>(method.entries.size());
  return row;
}

namespace {

struct EntryRef {
  double observed;
  double p;
  double validated;
  bool excluded;
};

// Flattens findings into per-attribute entry lists, marking reference
// mismatches against the truth run when one is supplied.
std::map<std::string, std::vector<EntryRef>> collect_entries(
    const std::vector<BiasFinding>& findings,
    const std::vector<BiasFinding>* truth, std::size_t* excluded_total) {
  std::map<std::string, std::vector<EntryRef>> by_attribute;
  for (const auto& f : findings) {
    bool excluded = false;
    if (truth != nullptr) {
      const BiasFinding* match = nullptr;
      for (const auto& t : *truth) {
        if (t.expression == f.expression && t.attribute == f.attribute) {
          match = &t;
        }
      }
      if (match == nullptr) {
        throw_validation("no ground-truth finding for (" + f.expression + ", " +
                         f.attribute + ")");
      }
      excluded = match->reference_group != f.reference_group;
    }
    auto& list = by_attribute[f.attribute];
    for (const auto& e : f.entries) {
      list.push_back({e.result.observed, e.result.p, e.result.validated, excluded});
      if (excluded && excluded_total != nullptr) ++*excluded_total;
    }
  }
  return by_attribute;
}

AvgBiasResult aggregate(const std::map<std::string, std::vector<EntryRef>>& grouped,
                        double alpha, bool revalidate) {
  AvgBiasResult out;
  out.alpha = alpha;
  double attr_sum = 0.0;
  std::size_t attrs_used = 0;
  for (const auto& [attribute, entries] : grouped) {
    (void)attribute;
    double sum = 0.0;
    std::size_t included = 0;
    for (const auto& e : entries) {
      if (e.excluded) continue;
      sum += revalidate ? validate_value(e.observed, e.p, alpha) : e.validated;
      ++included;
    }
    out.included_entries += included;
    if (included == 0) continue;  // attribute fully excluded
    attr_sum += sum / static_cast<double>(included);
    ++attrs_used;
  }
  if (attrs_used == 0) {
    throw_validation("no entries left to aggregate into AvgBias");
  }
  out.value = attr_sum / static_cast<double>(attrs_used);
  return out;
}

}  // namespace

AvgBiasResult avg_bias(const std::vector<BiasFinding>& findings, double alpha,
                       const std::vector<BiasFinding>* truth) {
  if (findings.empty()) throw_validation("avg_bias over empty findings");
  std::size_t excluded = 0;
  auto grouped = collect_entries(findings, truth, &excluded);
  AvgBiasResult out = aggregate(grouped, alpha, /*revalidate=*/false);
  out.excluded_nan = excluded;
  return out;
}

AlphaSweepResult alpha_sweep(const std::vector<BiasFinding>& findings,
                             const std::vector<double>& alphas,
                             const std::vector<BiasFinding>* truth) {
  if (findings.empty()) throw_validation("alpha_sweep over empty findings");
  if (alphas.empty()) throw_invalid("alpha_sweep needs at least one alpha");
  std::size_t excluded = 0;
  auto grouped = collect_entries(findings, truth, &excluded);
  AlphaSweepResult sweep;
  sweep.alphas = alphas;
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw_invalid("alpha values must lie in (0, 1)");
    }
    AvgBiasResult r = aggregate(grouped, alpha, /*revalidate=*/true);
    r.excluded_nan = excluded;
    sweep.curve.push_back(r);
  }
  return sweep;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> alphas;
  for (int i = 1; i <= 10; ++i) alphas.push_back(static_cast<double>(i) / 100.0);
  return alphas;
}

namespace {

// (attribute, expression, reference+groups) signature used to check that
// runs are comparable.
std::set<std::string> vocabulary_signature(const std::vector<BiasFinding>& findings) {
  std::set<std::string> sig;
  for (const auto& f : findings) {
    std::set<std::string> groups{f.reference_group};
    for (const auto& e : f.entries) groups.insert(e.group);
    std::string s = f.attribute + "|" + f.expression + "|";
    for (const auto& g : groups) s += g + ",";
    sig.insert(std::move(s));
  }
  return sig;
}

}  // namespace

std::vector<RunComparison> multi_run_compare(
    const std::vector<std::pair<std::string, std::vector<BiasFinding>>>& runs,
    double alpha) {
  if (runs.empty()) throw_validation("multi_run_compare over empty run list");
  auto reference_sig = vocabulary_signature(runs.front().second);
  std::vector<RunComparison> out;
  for (const auto& [name, findings] : runs) {
    if (vocabulary_signature(findings) != reference_sig) {
      throw_validation("run '" + name +
                       "' covers a different vocabulary than '" +
                       runs.front().first + "'");
    }
    out.push_back({name, avg_bias(findings, alpha)});
  }
  return out;
}

}  // namespace febias
