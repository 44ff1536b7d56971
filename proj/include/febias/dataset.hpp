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

#ifndef FEBIAS_DATASET_HPP
#define FEBIAS_DATASET_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace febias {

// A sensitive attribute and its groups. Declaration order is load-bearing:
// argmax ties break toward the earliest group, so reordering a schema file
// changes reference-group selection on exact ties.
struct AttributeSchema {
  std::string name;
  std::vector<std::string> groups;

  static AttributeSchema make(std::string name, std::vector<std::string> groups);

  std::size_t index_of(std::string_view group) const;  // npos when absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Labeled embedding rows. Values are held at 64-bit precision regardless of
// the on-disk payload width; file row order is the canonical sample order.
class EmbeddingSet {
 public:
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<double> values;  // size() x dim, row-major
  std::vector<std::string> label_keys;
  std::vector<std::vector<std::string>> labels;  // labels[k][i]

  std::size_t size() const { return ids.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }

  const std::vector<std::string>* labels_for(std::string_view key) const;

  // Enforces the ingestion invariants: rectangular values, finite components,
  // no zero-norm row, full label coverage, CSV-safe tokens.
  void validate() const;
};

struct NormalizedEmbeddingSet {
  EmbeddingSet base;
  std::vector<double> unit;  // same shape as base.values, L2-normalized rows

  std::size_t size() const { return base.size(); }
  std::size_t dim() const { return base.dim; }

  std::span<const double> unit_row(std::size_t i) const {
    return {unit.data() + i * base.dim, base.dim};
  }
};

NormalizedEmbeddingSet normalize(const EmbeddingSet& set);

struct LabeledSubset {
  std::string label;
  NormalizedEmbeddingSet set;
};

// Strict partition: every sample's label must be one of `categories`
// (error listing the unknown labels otherwise), and every category must be
// non-empty. Subset order follows `categories`.
std::vector<LabeledSubset> partition(const NormalizedEmbeddingSet& set,
                                     std::string_view label_key,
                                     const std::vector<std::string>& categories);

// Keeps rows whose `label_key` value is in `categories`; the count of
// dropped rows is reported so the CLI can record it.
EmbeddingSet filter_to_categories(const EmbeddingSet& set,
                                  std::string_view label_key,
                                  const std::vector<std::string>& categories,
                                  std::size_t* dropped = nullptr);

EmbeddingSet exclude_ids(const EmbeddingSet& set,
                         const std::unordered_set<std::string>& excluded,
                         std::size_t* removed = nullptr);

// Prediction log: per-sample true/predicted class plus optional
// per-attribute group labels. Classes are stored as vocabulary indices.
struct PredictionSet {
  std::vector<std::string> ids;
  std::vector<std::string> class_vocabulary;
  std::vector<std::uint32_t> true_class;
  std::vector<std::uint32_t> predicted_class;
  std::vector<std::string> attribute_keys;
  std::vector<std::vector<std::string>> attribute_labels;  // [k][i]

  std::size_t size() const { return ids.size(); }
  const std::vector<std::string>* attribute_for(std::string_view key) const;
  const std::string& true_name(std::size_t i) const {
    return class_vocabulary[true_class[i]];
  }
  const std::string& predicted_name(std::size_t i) const {
    return class_vocabulary[predicted_class[i]];
  }
};

PredictionSet exclude_ids(const PredictionSet& set,
                          const std::unordered_set<std::string>& excluded,
                          std::size_t* removed = nullptr);

}  // namespace febias

#endif  // FEBIAS_DATASET_HPP
