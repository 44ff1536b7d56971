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

#ifndef FEBIAS_ASSOCIATION_HPP
#define FEBIAS_ASSOCIATION_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "febias/dataset.hpp"

namespace febias {

// Mean of a group's unit vectors. The association between an expression set
// and a group set factors through these means:
//
//   mean over all pairs of (cos + 1)/2  ==  dot(mean_e, mean_s)/2 + 1/2
//
// which turns the quadratic pair sum into two linear passes and makes
// permutation testing tractable.
struct GroupSummary {
  std::string group;
  std::size_t count = 0;
  std::vector<double> mean_unit;
};

// Fixed-order pairwise reduction; keeps accumulation bit-stable regardless
// of scheduling so repeated runs produce identical tables.
void pairwise_row_sum(const double* rows, std::size_t n, std::size_t dim,
                      double* out);

GroupSummary group_summary(std::string group, const NormalizedEmbeddingSet& g);
inline GroupSummary group_summary(const LabeledSubset& s) {
  return group_summary(s.label, s.set);
}

double dot(std::span<const double> a, std::span<const double> b);

// Association in [0, 1]: 1 iff all pairwise cosines are 1, 0 iff all are -1.
double association(const GroupSummary& expr, const GroupSummary& grp);

// Literal mean over all pairs of (cos + 1)/2, cosines computed from the raw
// vectors. Quadratic; retained as the independent oracle for `association`.
double association_naive(const EmbeddingSet& expr_set, const EmbeddingSet& grp_set);

struct AssociationTable {
  std::vector<std::string> expressions;
  std::vector<std::string> groups;
  std::vector<double> values;  // expressions.size() x groups.size()
  std::vector<std::size_t> expression_counts;
  std::vector<std::size_t> group_counts;

  double at(std::size_t e, std::size_t g) const {
    return values[e * groups.size() + g];
  }
  std::size_t expression_index(std::string_view name) const;
  std::size_t group_index(std::string_view name) const;
};

AssociationTable association_table(const std::vector<LabeledSubset>& by_expression,
                                   const std::vector<LabeledSubset>& by_group);

// DiA(e, j, j') = A(e, s_j) - A(e, s_j'). Antisymmetric in (j, j').
double dia(const AssociationTable& table, std::string_view expression,
           std::string_view group_j, std::string_view group_jp);

// Argmax of a table row; exact ties break toward the earliest group in
// declared order.
std::string reference_group_assoc(const AssociationTable& table,
                                  std::string_view expression);

// Original iEAT differential association s(X, Y, A, B) on raw cosines
// (no affine shift). A cross-check primitive, not a test battery.
double ieat_differential(const NormalizedEmbeddingSet& x,
                         const NormalizedEmbeddingSet& y,
                         const NormalizedEmbeddingSet& a,
                         const NormalizedEmbeddingSet& b);

// Observed differential associations against the per-expression reference
// group, before any statistical validation.
struct DiaEntry {
  std::string group;
  double observed = 0.0;
};
struct DiaFinding {
  std::string expression;
  std::string attribute;
  std::string reference_group;
  std::vector<DiaEntry> entries;  // the n-1 remaining groups, schema order
};

std::vector<DiaFinding> dia_findings(const AssociationTable& table,
                                     const AttributeSchema& schema);

}  // namespace febias

#endif  // FEBIAS_ASSOCIATION_HPP
