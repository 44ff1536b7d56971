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

#ifndef FEBIAS_STAT_MODULE_HPP
#define FEBIAS_STAT_MODULE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "febias/association.hpp"
#include "febias/dataset.hpp"
#include "febias/perf_metrics.hpp"

namespace febias {

// `paper` is the published estimator (1/B) sum 1(V_b >= V); it can return
// p = 0. `plus_one` is the add-one variant (1 + sum)/(1 + B).
enum class Estimator { paper, plus_one };

struct PermutationConfig {
  std::uint64_t permutations = 10000;  // B
  double alpha = 0.05;
  std::uint64_t seed = 0;
  // Exact enumeration replaces Monte Carlo when the number of distinct
  // assignments C(n1+n2, n1) is at most this.
  std::uint64_t exact_threshold = 100000;
  Estimator estimator = Estimator::paper;

  void validate() const;
};

enum class TestMethod { monte_carlo, exact };

struct TestResult {
  double observed = 0.0;
  double p = 1.0;
  double validated = 0.0;  // observed if p < alpha, else 0
  TestMethod method = TestMethod::monte_carlo;
  std::uint64_t b_used = 0;
};

// The validated-value rule, strict inequality: p exactly equal to alpha
// yields 0.
double validate_value(double observed, double p, double alpha);

// Canonical two-sample statistic: mean(a) - mean(b), evaluated via the
// pooled total and the ascending sum of the smaller side. Exact-test code
// evaluates every assignment with this same expression, so the observed
// value and the identity assignment agree bitwise.
double two_sample_mean_diff(std::span<const double> a, std::span<const double> b);

// C(n, k), saturating to cap + 1 once it exceeds cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

// Exact tail over all C(n1+n2, n1) assignments (combinations of the smaller
// side are enumerated; cost is assignments * min(n1, n2)).
double exact_enumeration_p(std::span<const double> pooled, std::size_t n1,
                           std::size_t n2, double observed);

// Exact tail for 0/1 indicator values via the hypergeometric distribution;
// agrees with exact_enumeration_p exactly.
double exact_hypergeometric_p(std::span<const double> pooled, std::size_t n1,
                              std::size_t n2, double observed);

bool all_binary(std::span<const double> values);

// One permutation test between two groups of scalar values. `observed` must
// come from two_sample_mean_diff on the same (unpermuted) values. Monte
// Carlo draws are counter-based: permutation b is generated from
// (seed, stream_id, b) alone, so results do not depend on `threads`.
TestResult permutation_test(std::span<const double> values_a,
                            std::span<const double> values_b, double observed,
                            const PermutationConfig& cfg,
                            std::string_view stream_id, unsigned threads = 1);

// Projection of probe unit vectors onto an expression's mean direction:
// t_i = dot(unit_i, mean_unit_e). DiA between two groups equals
// (mean(t_a) - mean(t_b)) / 2, which is what makes resampling linear-time.
std::pair<std::vector<double>, std::vector<double>> project_scalars(
    const GroupSummary& expr, const NormalizedEmbeddingSet& group_a,
    const NormalizedEmbeddingSet& group_b);

enum class FindingSource { dia, dip };

struct BiasEntry {
  std::string group;
  TestResult result;
};

struct BiasFinding {
  std::string expression;
  std::string attribute;
  std::string reference_group;
  FindingSource source = FindingSource::dia;
  std::vector<BiasEntry> entries;  // the n-1 remaining groups
};

// Bookkeeping the CLI surfaces in manifests and report footers.
struct SuiteStats {
  std::size_t test_dropped_outside_vocab = 0;
  std::size_t probe_dropped_outside_schema = 0;
  std::size_t predictions_dropped_outside_schema = 0;
  std::size_t excluded_by_id_list = 0;
  std::vector<DroppedStratum> dropped_strata;
  std::size_t tests_run = 0;
};

// Feature-space suite: associations from test-set expression embeddings vs
// probe-group embeddings, reference via the association argmax, then one
// permutation test per remaining group. Only probe group membership is
// permuted; expression embeddings stay fixed.
std::vector<BiasFinding> run_dia_suite(const EmbeddingSet& test_embeddings,
                                       const EmbeddingSet& probe_embeddings,
                                       const std::vector<std::string>& expressions,
                                       const AttributeSchema& schema,
                                       const PermutationConfig& cfg,
                                       unsigned threads = 1,
                                       SuiteStats* stats = nullptr);

// Prediction-log suite: per-expression strata, reference via the TPR argmax,
// permutation tests on the 0/1 correctness indicators. With
// min_stratum_size == 0 an empty stratum is a hard error; otherwise groups
// below the threshold are dropped and recorded in `stats`.
std::vector<BiasFinding> run_dip_suite(const PredictionSet& predictions,
                                       const std::vector<std::string>& expressions,
                                       const AttributeSchema& schema,
                                       const PermutationConfig& cfg,
                                       std::size_t min_stratum_size = 0,
                                       unsigned threads = 1,
                                       SuiteStats* stats = nullptr);

}  // namespace febias

#endif  // FEBIAS_STAT_MODULE_HPP
