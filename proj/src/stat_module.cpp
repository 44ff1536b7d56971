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

#include "febias/stat_module.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

#include "febias/error.hpp"
#include "febias/rng.hpp"

namespace febias {

void PermutationConfig::validate() const {
  if (permutations < 1) throw_invalid("permutation count B must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw_invalid("significance threshold alpha must lie in (0, 1)");
  }
}

double validate_value(double observed, double p, double alpha) {
  return p < alpha ? observed : 0.0;
}

namespace {

double sequential_sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

// Statistic for an assignment, given the ascending sum of the smaller side.
// Shared by the observed value, exact enumeration, and the hypergeometric
// tail so boundary comparisons stay bitwise consistent.
double stat_from_small_sum(double small_sum, double total, bool small_is_a,
                           std::size_t n1, std::size_t n2) {
  if (small_is_a) {
    return small_sum / static_cast<double>(n1) -
           (total - small_sum) / static_cast<double>(n2);
  }
  return (total - small_sum) / static_cast<double>(n1) -
         small_sum / static_cast<double>(n2);
}

}  // namespace

double two_sample_mean_diff(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw_stat("two-sample statistic requires non-empty sides");
  }
  // One continuous accumulation chain over [a..., b...], exactly as the
  // exact-test code sums the pooled vector.
  double total = 0.0;
  for (double v : a) total += v;
  for (double v : b) total += v;
  bool small_is_a = a.size() <= b.size();
  double small_sum = small_is_a ? sequential_sum(a) : sequential_sum(b);
  return stat_from_small_sum(small_sum, total, small_is_a, a.size(), b.size());
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact at every step
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

bool all_binary(std::span<const double> values) {
  for (double v : values) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

double exact_enumeration_p(std::span<const double> pooled, std::size_t n1,
                           std::size_t n2, double observed) {
  const std::size_t total_n = n1 + n2;
  if (pooled.size() != total_n || n1 == 0 || n2 == 0) {
    throw_invalid("pooled values do not match the group sizes");
  }
  const bool small_is_a = n1 <= n2;
  const std::size_t m = std::min(n1, n2);
  const double total = sequential_sum(pooled);

  std::vector<std::size_t> comb(m);
  std::iota(comb.begin(), comb.end(), 0);
  std::uint64_t assignments = 0;
  std::uint64_t hits = 0;
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += pooled[comb[i]];
    double v = stat_from_small_sum(s, total, small_is_a, n1, n2);
    ++assignments;
    if (v >= observed) ++hits;
    // next lexicographic combination
    std::size_t i = m;
    while (i > 0 && comb[i - 1] == total_n - m + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < m; ++j) comb[j] = comb[j - 1] + 1;
  }
  return static_cast<double>(hits) / static_cast<double>(assignments);
}

double exact_hypergeometric_p(std::span<const double> pooled, std::size_t n1,
                              std::size_t n2, double observed) {
  const std::size_t total_n = n1 + n2;
  if (pooled.size() != total_n || n1 == 0 || n2 == 0) {
    throw_invalid("pooled values do not match the group sizes");
  }
  if (!all_binary(pooled)) {
    throw_invalid("hypergeometric tail requires 0/1 indicator values");
  }
  const bool small_is_a = n1 <= n2;
  const std::size_t m = std::min(n1, n2);
  const std::size_t big = total_n - m;
  std::size_t ones = 0;
  for (double v : pooled) ones += v == 1.0 ? 1 : 0;
  const std::size_t zeros = total_n - ones;
  const double total = static_cast<double>(ones);

  // s = number of ones landing on the smaller side.
  const std::size_t s_min = ones > big ? ones - big : 0;
  const std::size_t s_max = std::min(m, ones);
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 2;
  const std::uint64_t denom = binomial_capped(total_n, m, cap);
  if (denom > cap) {
    throw_invalid("too many assignments for an exact hypergeometric tail");
  }
  std::uint64_t hits = 0;
  for (std::size_t s = s_min; s <= s_max; ++s) {
    double v = stat_from_small_sum(static_cast<double>(s), total, small_is_a,
                                   n1, n2);
    if (v >= observed) {
      hits += binomial_capped(ones, s, denom) *
              binomial_capped(zeros, m - s, denom);
    }
  }
  return static_cast<double>(hits) / static_cast<double>(denom);
}

namespace {

// Monte Carlo tail count. Permutation b is generated entirely from
// (key, b): a fresh identity index array, a partial Fisher-Yates draw of the
// smaller side, then the shared statistic formula. Work may be split across
// threads in any contiguous chunking without changing a single draw.
std::uint64_t monte_carlo_hits(std::span<const double> pooled, std::size_t n1,
                               std::size_t n2, double observed,
                               std::uint64_t permutations, std::uint64_t key,
                               unsigned threads) {
  const std::uint32_t total_n = static_cast<std::uint32_t>(n1 + n2);
  const std::uint32_t m = static_cast<std::uint32_t>(std::min(n1, n2));
  const bool small_is_a = n1 <= n2;
  const double total = sequential_sum(pooled);
  const double* vals = pooled.data();

  auto count_range = [&](std::uint64_t lo, std::uint64_t hi) -> std::uint64_t {
    std::vector<std::uint32_t> idx(total_n);
    std::uint64_t hits = 0;
    for (std::uint64_t b = lo; b < hi; ++b) {
      std::iota(idx.begin(), idx.end(), 0u);
      PhiloxStream stream(key, b);
      double s = 0.0;
      for (std::uint32_t j = 0; j < m; ++j) {
        std::uint32_t r = j + stream.below(total_n - j);
        std::swap(idx[j], idx[r]);
        s += vals[idx[j]];
      }
      double v = stat_from_small_sum(s, total, small_is_a, n1, n2);
      if (v >= observed) ++hits;
    }
    return hits;
  };

  unsigned workers = std::max(1u, threads);
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, permutations));
  if (workers == 1) return count_range(0, permutations);

  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::uint64_t chunk = (permutations + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t lo = w * chunk;
    std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, permutations);
    pool.emplace_back([&, w, lo, hi] { partial[w] = count_range(lo, hi); });
  }
  for (auto& t : pool) t.join();
  std::uint64_t hits = 0;
  for (std::uint64_t h : partial) hits += h;
  return hits;
}

}  // namespace

TestResult permutation_test(std::span<const double> values_a,
                            std::span<const double> values_b, double observed,
                            const PermutationConfig& cfg,
                            std::string_view stream_id, unsigned threads) {
  cfg.validate();
  if (values_a.empty() || values_b.empty()) {
    throw_stat("permutation test requires non-empty groups");
  }
  const std::size_t n1 = values_a.size();
  const std::size_t n2 = values_b.size();
  std::vector<double> pooled;
  pooled.reserve(n1 + n2);
  pooled.insert(pooled.end(), values_a.begin(), values_a.end());
  pooled.insert(pooled.end(), values_b.begin(), values_b.end());

  TestResult result;
  result.observed = observed;

  std::uint64_t assignments =
      binomial_capped(n1 + n2, std::min(n1, n2), cfg.exact_threshold);
  if (assignments <= cfg.exact_threshold) {
    result.method = TestMethod::exact;
    result.b_used = assignments;
    result.p = all_binary(pooled)
                   ? exact_hypergeometric_p(pooled, n1, n2, observed)
                   : exact_enumeration_p(pooled, n1, n2, observed);
  } else {
    result.method = TestMethod::monte_carlo;
    result.b_used = cfg.permutations;
    std::uint64_t key = derive_stream_key(cfg.seed, stream_id);
    std::uint64_t hits = monte_carlo_hits(pooled, n1, n2, observed,
                                          cfg.permutations, key, threads);
    double b = static_cast<double>(cfg.permutations);
    result.p = cfg.estimator == Estimator::paper
                   ? static_cast<double>(hits) / b
                   : (1.0 + static_cast<double>(hits)) / (1.0 + b);
  }
  result.validated = validate_value(observed, result.p, cfg.alpha);
  return result;
}

std::pair<std::vector<double>, std::vector<double>> project_scalars(
    const GroupSummary& expr, const NormalizedEmbeddingSet& group_a,
    const NormalizedEmbeddingSet& group_b) {
  if (group_a.dim() != expr.mean_unit.size() ||
      group_b.dim() != expr.mean_unit.size()) {
    throw_invalid("probe dimension does not match expression summary");
  }
  auto project = [&](const NormalizedEmbeddingSet& g) {
    std::vector<double> t(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      t[i] = dot(g.unit_row(i), expr.mean_unit);
    }
    return t;
  };
  return {project(group_a), project(group_b)};
}

namespace {

std::string stream_name(std::string_view kind, const std::string& attribute,
                        const std::string& expression, const std::string& ref,
                        const std::string& group) {
  std::string s(kind);
  s += '|';
  s += attribute;
  s += '|';
  s += expression;
  s += '|';
  s += ref;
  s += '|';
  s += group;
  return s;
}

}  // namespace

std::vector<BiasFinding> run_dia_suite(const EmbeddingSet& test_embeddings,
                                       const EmbeddingSet& probe_embeddings,
                                       const std::vector<std::string>& expressions,
                                       const AttributeSchema& schema,
                                       const PermutationConfig& cfg,
                                       unsigned threads, SuiteStats* stats) {
  cfg.validate();
  if (expressions.empty()) throw_invalid("empty expression vocabulary");

  std::size_t test_dropped = 0;
  std::size_t probe_dropped = 0;
  EmbeddingSet test_kept = filter_to_categories(test_embeddings, "expression",
                                                expressions, &test_dropped);
  EmbeddingSet probe_kept = filter_to_categories(probe_embeddings, schema.name,
                                                 schema.groups, &probe_dropped);
  if (stats != nullptr) {
    stats->test_dropped_outside_vocab += test_dropped;
    stats->probe_dropped_outside_schema += probe_dropped;
  }
  if (test_kept.dim != probe_kept.dim) {
    throw_validation("test and probe embeddings disagree on dimension (" +
                     std::to_string(test_kept.dim) + " vs " +
                     std::to_string(probe_kept.dim) + ")");
  }

  NormalizedEmbeddingSet test_norm = normalize(test_kept);
  NormalizedEmbeddingSet probe_norm = normalize(probe_kept);
  auto by_expression = partition(test_norm, "expression", expressions);
  auto by_group = partition(probe_norm, schema.name, schema.groups);

  std::vector<GroupSummary> expr_summaries;
  expr_summaries.reserve(by_expression.size());
  for (const auto& s : by_expression) expr_summaries.push_back(group_summary(s));
  std::vector<GroupSummary> group_summaries;
  group_summaries.reserve(by_group.size());
  for (const auto& s : by_group) group_summaries.push_back(group_summary(s));

  AssociationTable table;
  for (const auto& s : expr_summaries) {
    table.expressions.push_back(s.group);
    table.expression_counts.push_back(s.count);
  }
  for (const auto& s : group_summaries) {
    table.groups.push_back(s.group);
    table.group_counts.push_back(s.count);
  }
  table.values.resize(expr_summaries.size() * group_summaries.size());
  for (std::size_t e = 0; e < expr_summaries.size(); ++e) {
    for (std::size_t g = 0; g < group_summaries.size(); ++g) {
      table.values[e * group_summaries.size() + g] =
          association(expr_summaries[e], group_summaries[g]);
    }
  }

  std::vector<BiasFinding> findings;
  findings.reserve(expressions.size());
  for (std::size_t e = 0; e < expressions.size(); ++e) {
    BiasFinding finding;
    finding.expression = expressions[e];
    finding.attribute = schema.name;
    finding.source = FindingSource::dia;
    finding.reference_group = reference_group_assoc(table, expressions[e]);
    std::size_t ref_idx = schema.index_of(finding.reference_group);

    // Halved projections: DiA(max, k) is then a plain two-sample mean
    // difference of these values.
    std::vector<std::vector<double>> scaled(by_group.size());
    for (std::size_t g = 0; g < by_group.size(); ++g) {
      const auto& set = by_group[g].set;
      scaled[g].resize(set.size());
      for (std::size_t i = 0; i < set.size(); ++i) {
        scaled[g][i] = 0.5 * dot(set.unit_row(i), expr_summaries[e].mean_unit);
      }
    }
    for (std::size_t g = 0; g < by_group.size(); ++g) {
      if (g == ref_idx) continue;
      double observed = two_sample_mean_diff(scaled[ref_idx], scaled[g]);
      TestResult res = permutation_test(
          scaled[ref_idx], scaled[g], observed, cfg,
          stream_name("dia", schema.name, expressions[e],
                      finding.reference_group, schema.groups[g]),
          threads);
      finding.entries.push_back({schema.groups[g], res});
      if (stats != nullptr) ++stats->tests_run;
    }
    findings.push_back(std::move(finding));
  }
  return findings;
}

std::vector<BiasFinding> run_dip_suite(const PredictionSet& predictions,
                                       const std::vector<std::string>& expressions,
                                       const AttributeSchema& schema,
                                       const PermutationConfig& cfg,
                                       std::size_t min_stratum_size,
                                       unsigned threads, SuiteStats* stats) {
  cfg.validate();
  if (expressions.empty()) throw_invalid("empty expression vocabulary");

  std::vector<BiasFinding> findings;
  findings.reserve(expressions.size());
  for (const auto& expression : expressions) {
    std::size_t outside = 0;
    std::vector<DroppedStratum> dropped;
    // min_stratum_size == 0: empty strata are hard errors. Otherwise groups
    // below the threshold are dropped and recorded.
    std::vector<StratumOutcome> strata =
        min_stratum_size == 0
            ? stratify(predictions, expression, schema, &outside)
            : stratify_with_policy(predictions, expression, schema,
                                   min_stratum_size, &dropped, &outside);
    if (stats != nullptr) {
      stats->predictions_dropped_outside_schema += outside;
      stats->dropped_strata.insert(stats->dropped_strata.end(), dropped.begin(),
                                   dropped.end());
    }
    if (strata.size() < 2) {
      throw_validation("fewer than 2 usable strata for expression '" +
                       expression + "' under attribute '" + schema.name + "'");
    }

    BiasFinding finding;
    finding.expression = expression;
    finding.attribute = schema.name;
    finding.source = FindingSource::dip;
    finding.reference_group = reference_group_perf(strata);

    const StratumOutcome* ref = nullptr;
    for (const auto& s : strata) {
      if (s.group == finding.reference_group) ref = &s;
    }
    std::vector<double> ref_vals(ref->indicators.begin(), ref->indicators.end());
    for (const auto& s : strata) {
      if (s.group == finding.reference_group) continue;
      std::vector<double> vals(s.indicators.begin(), s.indicators.end());
      double observed = two_sample_mean_diff(ref_vals, vals);
      TestResult res = permutation_test(
          ref_vals, vals, observed, cfg,
          stream_name("dip", schema.name, expression, finding.reference_group,
                      s.group),
          threads);
      finding.entries.push_back({s.group, res});
      if (stats != nullptr) ++stats->tests_run;
    }
    findings.push_back(std::move(finding));
  }
  return findings;
}

}  // namespace febias
