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

#ifndef FEBIAS_EVAL_COMPARE_HPP
#define FEBIAS_EVAL_COMPARE_HPP

#include <string>
#include <vector>

#include "febias/stat_module.hpp"

namespace febias {

// Agreement between a method finding and the ground-truth finding for the
// same (expression, attribute): mean absolute difference of validated
// values over the n-1 remaining groups, or NaN when the two disagree on the
// reference group (the method failed outright for this expression).
struct ComparisonRow {
  std::string expression;
  double l1 = 0.0;  // NaN iff !reference_match
  bool reference_match = true;
};

ComparisonRow l1_compare(const BiasFinding& method, const BiasFinding& truth);

// AvgBias: per attribute, validated values are averaged over the (n-1) x |E|
// entries (each attribute keeps its own n), then averaged across attributes.
// Entries under a mismatched reference group (relative to `truth`, when
// given) are excluded from both numerator and denominator; both counts are
// reported so exclusions stay visible.
struct AvgBiasResult {
  double value = 0.0;
  std::size_t included_entries = 0;
  std::size_t excluded_nan = 0;
  double alpha = 0.0;
};

AvgBiasResult avg_bias(const std::vector<BiasFinding>& findings, double alpha,
                       const std::vector<BiasFinding>* truth = nullptr);

// Re-thresholds stored (observed, p) pairs at each alpha; permutations are
// never re-drawn, which is exact because validation is a pure threshold.
struct AlphaSweepResult {
  std::vector<double> alphas;
  std::vector<AvgBiasResult> curve;
};

AlphaSweepResult alpha_sweep(const std::vector<BiasFinding>& findings,
                             const std::vector<double>& alphas,
                             const std::vector<BiasFinding>* truth = nullptr);

std::vector<double> default_alpha_grid();  // 0.01 .. 0.10 step 0.01

// AvgBias per named run; vocabularies (attributes, expressions, groups)
// must agree across runs.
struct RunComparison {
  std::string run;
  AvgBiasResult result;
};

std::vector<RunComparison> multi_run_compare(
    const std::vector<std::pair<std::string, std::vector<BiasFinding>>>& runs,
    double alpha);

}  // namespace febias

#endif  // FEBIAS_EVAL_COMPARE_HPP
