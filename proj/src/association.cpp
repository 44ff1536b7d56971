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

#include "febias/association.hpp"

#include <algorithm>
#include <cmath>

#include "febias/error.hpp"

namespace febias {

namespace {

// Below this many rows, plain sequential accumulation.
constexpr std::size_t kPairwiseLeaf = 8;

void pairwise_rec(const double* rows, std::size_t lo, std::size_t hi,
                  std::size_t dim, double* out) {
  if (hi - lo <= kPairwiseLeaf) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* r = rows + i * dim;
      for (std::size_t j = 0; j < dim; ++j) out[j] += r[j];
    }
    return;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(dim);
  pairwise_rec(rows, lo, mid, dim, out);
  pairwise_rec(rows, mid, hi, dim, right.data());
  for (std::size_t j = 0; j < dim; ++j) out[j] += right[j];
}

}  // namespace

void pairwise_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      double* out) {
  pairwise_rec(rows, 0, n, dim, out);
}

GroupSummary group_summary(std::string group, const NormalizedEmbeddingSet& g) {
  if (g.size() == 0) {
    throw_validation("empty group '" + group + "' in group_summary");
  }
  GroupSummary out;
  out.group = std::move(group);
  out.count = g.size();
  out.mean_unit.resize(g.dim());
  pairwise_row_sum(g.unit.data(), g.size(), g.dim(), out.mean_unit.data());
  double inv = 1.0 / static_cast<double>(out.count);
  for (double& v : out.mean_unit) v *= inv;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

double association(const GroupSummary& expr, const GroupSummary& grp) {
  if (expr.mean_unit.size() != grp.mean_unit.size()) {
    throw_invalid("dimension mismatch between group summaries (" +
                  std::to_string(expr.mean_unit.size()) + " vs " +
                  std::to_string(grp.mean_unit.size()) + ")");
  }
  double a = 0.5 * dot(expr.mean_unit, grp.mean_unit) + 0.5;
  return std::clamp(a, 0.0, 1.0);
}

double association_naive(const EmbeddingSet& expr_set,
                         const EmbeddingSet& grp_set) {
  if (expr_set.size() == 0 || grp_set.size() == 0) {
    throw_validation("association_naive requires non-empty sets");
  }
  if (expr_set.dim != grp_set.dim) {
    throw_invalid("dimension mismatch between embedding sets");
  }
  auto norms = [](const EmbeddingSet& s) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto r = s.row(i);
      out[i] = std::sqrt(dot(r, r));
    }
    return out;
  };
  std::vector<double> ne = norms(expr_set);
  std::vector<double> ng = norms(grp_set);
  double total = 0.0;
  for (std::size_t i = 0; i < expr_set.size(); ++i) {
    auto zi = expr_set.row(i);
    for (std::size_t k = 0; k < grp_set.size(); ++k) {
      double cos = dot(zi, grp_set.row(k)) / (ne[i] * ng[k]);
      total += cos + 1.0;
    }
  }
  double a = total / (2.0 * static_cast<double>(expr_set.size()) *
                      static_cast<double>(grp_set.size()));
  return std::clamp(a, 0.0, 1.0);
}

std::size_t AssociationTable::expression_index(std::string_view name) const {
  for (std::size_t i = 0; i < expressions.size(); ++i) {
    if (expressions[i] == name) return i;
  }
  throw_invalid("unknown expression '" + std::string(name) + "' in table");
}

std::size_t AssociationTable::group_index(std::string_view name) const {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] == name) return i;
  }
  throw_invalid("unknown group '" + std::string(name) + "' in table");
}

AssociationTable association_table(const std::vector<LabeledSubset>& by_expression,
                                   const std::vector<LabeledSubset>& by_group) {
  if (by_expression.empty() || by_group.empty()) {
    throw_validation("association_table requires non-empty partitions");
  }
  std::vector<GroupSummary> expr_summaries;
  expr_summaries.reserve(by_expression.size());
  for (const auto& s : by_expression) expr_summaries.push_back(group_summary(s));
  std::vector<GroupSummary> grp_summaries;
  grp_summaries.reserve(by_group.size());
  for (const auto& s : by_group) grp_summaries.push_back(group_summary(s));

  AssociationTable table;
  for (const auto& s : expr_summaries) {
    table.expressions.push_back(s.group);
    table.expression_counts.push_back(s.count);
  }
  for (const auto& s : grp_summaries) {
    table.groups.push_back(s.group);
    table.group_counts.push_back(s.count);
  }
  table.values.resize(expr_summaries.size() * grp_summaries.size());
  for (std::size_t e = 0; e < expr_summaries.size(); ++e) {
    for (std::size_t g = 0; g < grp_summaries.size(); ++g) {
      table.values[e * grp_summaries.size() + g] =
          association(expr_summaries[e], grp_summaries[g]);
    }
  }
  return table;
}

double dia(const AssociationTable& table, std::string_view expression,
           std::string_view group_j, std::string_view group_jp) {
  std::size_t e = table.expression_index(expression);
  return table.at(e, table.group_index(group_j)) -
         table.at(e, table.group_index(group_jp));
}

std::string reference_group_assoc(const AssociationTable& table,
                                  std::string_view expression) {
  std::size_t e = table.expression_index(expression);
  std::size_t best = 0;
  for (std::size_t g = 1; g < table.groups.size(); ++g) {
    if (table.at(e, g) > table.at(e, best)) best = g;
  }
  return table.groups[best];
}

namespace {

// Eq. of the original iEAT: s(w, A, B) = mean_a cos(w, a) - mean_b cos(w, b).
double single_differential(std::span<const double> w,
                           const NormalizedEmbeddingSet& a,
                           const NormalizedEmbeddingSet& b) {
  double sa = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sa += dot(w, a.unit_row(i));
  double sb = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) sb += dot(w, b.unit_row(i));
  return sa / static_cast<double>(a.size()) - sb / static_cast<double>(b.size());
}

}  // namespace

double ieat_differential(const NormalizedEmbeddingSet& x,
                         const NormalizedEmbeddingSet& y,
                         const NormalizedEmbeddingSet& a,
                         const NormalizedEmbeddingSet& b) {
  if (x.size() == 0 || y.size() == 0 || a.size() == 0 || b.size() == 0) {
    throw_validation("ieat_differential requires four non-empty sets");
  }
  if (x.dim() != y.dim() || x.dim() != a.dim() || x.dim() != b.dim()) {
    throw_invalid("dimension mismatch across iEAT sets");
  }
  double sx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += single_differential(x.unit_row(i), a, b);
  }
  double sy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sy += single_differential(y.unit_row(i), a, b);
  }
  return sx - sy;
}

std::vector<DiaFinding> dia_findings(const AssociationTable& table,
                                     const AttributeSchema& schema) {
  for (const auto& g : schema.groups) table.group_index(g);  // must all exist
  std::vector<DiaFinding> findings;
  findings.reserve(table.expressions.size());
  for (const auto& expression : table.expressions) {
    DiaFinding f;
    f.expression = expression;
    f.attribute = schema.name;
    f.reference_group = reference_group_assoc(table, expression);
    for (const auto& g : schema.groups) {
      if (g == f.reference_group) continue;
      f.entries.push_back({g, dia(table, expression, f.reference_group, g)});
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

}  // namespace febias
