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

#include "febias/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "febias/error.hpp"
#include "febias/text.hpp"

namespace febias {

AttributeSchema AttributeSchema::make(std::string name,
                                      std::vector<std::string> groups) {
  if (!valid_token(name)) throw_validation("invalid attribute name");
  if (groups.size() < 2) {
    throw_validation("attribute '" + name + "' needs at least 2 groups");
  }
  std::unordered_set<std::string> seen;
  for (const auto& g : groups) {
    if (!valid_token(g)) {
      throw_validation("invalid group name '" + g + "' in attribute '" + name + "'");
    }
    if (!seen.insert(g).second) {
      throw_validation("duplicate group '" + g + "' in attribute '" + name + "'");
    }
  }
  return AttributeSchema{std::move(name), std::move(groups)};
}

std::size_t AttributeSchema::index_of(std::string_view group) const {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] == group) return i;
  }
  return npos;
}

const std::vector<std::string>* EmbeddingSet::labels_for(
    std::string_view key) const {
  for (std::size_t k = 0; k < label_keys.size(); ++k) {
    if (label_keys[k] == key) return &labels[k];
  }
  return nullptr;
}

void EmbeddingSet::validate() const {
  if (dim == 0) throw_validation("embedding dimension must be positive");
  if (values.size() != size() * dim) {
    throw_validation("embedding matrix shape does not match id count");
  }
  if (labels.size() != label_keys.size()) {
    throw_validation("label storage does not match label keys");
  }
  for (std::size_t k = 0; k < label_keys.size(); ++k) {
    if (!valid_token(label_keys[k])) {
      throw_validation("invalid label key '" + label_keys[k] + "'");
    }
    if (labels[k].size() != size()) {
      throw_validation("label key '" + label_keys[k] +
                       "' does not cover every sample");
    }
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (!valid_token(ids[i])) {
      throw_validation("invalid sample id at row " + std::to_string(i));
    }
    double sq = 0.0;
    for (double v : row(i)) {
      if (!std::isfinite(v)) {
        throw_validation("non-finite component in sample '" + ids[i] + "'");
      }
      sq += v * v;
    }
    if (sq == 0.0) {
      throw_validation("zero-norm vector for sample '" + ids[i] + "'");
    }
    for (std::size_t k = 0; k < label_keys.size(); ++k) {
      if (!valid_token(labels[k][i])) {
        throw_validation("invalid '" + label_keys[k] + "' label for sample '" +
                         ids[i] + "'");
      }
    }
  }
}

NormalizedEmbeddingSet normalize(const EmbeddingSet& set) {
  NormalizedEmbeddingSet out;
  out.base = set;
  out.unit.resize(set.values.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto r = set.row(i);
    double sq = 0.0;
    for (double v : r) sq += v * v;
    double norm = std::sqrt(sq);
    double inv = 1.0 / norm;
    double* dst = out.unit.data() + i * set.dim;
    for (std::size_t j = 0; j < set.dim; ++j) dst[j] = r[j] * inv;
  }
  return out;
}

namespace {

NormalizedEmbeddingSet take_rows(const NormalizedEmbeddingSet& src,
                                 const std::vector<std::size_t>& rows) {
  NormalizedEmbeddingSet out;
  out.base.dim = src.base.dim;
  out.base.label_keys = src.base.label_keys;
  out.base.labels.resize(src.base.label_keys.size());
  out.base.ids.reserve(rows.size());
  out.base.values.reserve(rows.size() * src.base.dim);
  out.unit.reserve(rows.size() * src.base.dim);
  for (std::size_t i : rows) {
    out.base.ids.push_back(src.base.ids[i]);
    auto raw = src.base.row(i);
    out.base.values.insert(out.base.values.end(), raw.begin(), raw.end());
    auto u = src.unit_row(i);
    out.unit.insert(out.unit.end(), u.begin(), u.end());
    for (std::size_t k = 0; k < src.base.label_keys.size(); ++k) {
      out.base.labels[k].push_back(src.base.labels[k][i]);
    }
  }
  return out;
}

}  // namespace

std::vector<LabeledSubset> partition(const NormalizedEmbeddingSet& set,
                                     std::string_view label_key,
                                     const std::vector<std::string>& categories) {
  const auto* labels = set.base.labels_for(label_key);
  if (labels == nullptr) {
    throw_validation("label key '" + std::string(label_key) + "' not present");
  }
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t c = 0; c < categories.size(); ++c) index.emplace(categories[c], c);

  std::vector<std::vector<std::size_t>> member_rows(categories.size());
  std::vector<std::string> unknown;
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto it = index.find((*labels)[i]);
    if (it == index.end()) {
      if (std::find(unknown.begin(), unknown.end(), (*labels)[i]) == unknown.end()) {
        unknown.push_back((*labels)[i]);
      }
      continue;
    }
    member_rows[it->second].push_back(i);
  }
  if (!unknown.empty()) {
    std::string msg = "labels outside declared categories for key '" +
                      std::string(label_key) + "':";
    for (const auto& u : unknown) msg += " '" + u + "'";
    throw_validation(msg);
  }
  std::vector<LabeledSubset> out;
  out.reserve(categories.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    if (member_rows[c].empty()) {
      throw_validation("empty category '" + categories[c] + "' for key '" +
                       std::string(label_key) + "'");
    }
    out.push_back({categories[c], take_rows(set, member_rows[c])});
  }
  return out;
}

namespace {

EmbeddingSet take_raw_rows(const EmbeddingSet& src,
                           const std::vector<std::size_t>& rows) {
  EmbeddingSet out;
  out.dim = src.dim;
  out.label_keys = src.label_keys;
  out.labels.resize(src.label_keys.size());
  out.ids.reserve(rows.size());
  out.values.reserve(rows.size() * src.dim);
  for (std::size_t i : rows) {
    out.ids.push_back(src.ids[i]);
    auto raw = src.row(i);
    out.values.insert(out.values.end(), raw.begin(), raw.end());
    for (std::size_t k = 0; k < src.label_keys.size(); ++k) {
      out.labels[k].push_back(src.labels[k][i]);
    }
  }
  return out;
}

}  // namespace

EmbeddingSet filter_to_categories(const EmbeddingSet& set,
                                  std::string_view label_key,
                                  const std::vector<std::string>& categories,
                                  std::size_t* dropped) {
  const auto* labels = set.labels_for(label_key);
  if (labels == nullptr) {
    throw_validation("label key '" + std::string(label_key) + "' not present");
  }
  std::unordered_set<std::string_view> keep(categories.begin(), categories.end());
  std::vector<std::size_t> rows;
  rows.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (keep.count((*labels)[i]) > 0) rows.push_back(i);
  }
  if (dropped != nullptr) *dropped = set.size() - rows.size();
  return take_raw_rows(set, rows);
}

EmbeddingSet exclude_ids(const EmbeddingSet& set,
                         const std::unordered_set<std::string>& excluded,
                         std::size_t* removed) {
  std::vector<std::size_t> rows;
  rows.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (excluded.count(set.ids[i]) == 0) rows.push_back(i);
  }
  if (removed != nullptr) *removed = set.size() - rows.size();
  return take_raw_rows(set, rows);
}

const std::vector<std::string>* PredictionSet::attribute_for(
    std::string_view key) const {
  for (std::size_t k = 0; k < attribute_keys.size(); ++k) {
    if (attribute_keys[k] == key) return &attribute_labels[k];
  }
  return nullptr;
}

PredictionSet exclude_ids(const PredictionSet& set,
                          const std::unordered_set<std::string>& excluded,
                          std::size_t* removed) {
  PredictionSet out;
  out.class_vocabulary = set.class_vocabulary;
  out.attribute_keys = set.attribute_keys;
  out.attribute_labels.resize(set.attribute_keys.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (excluded.count(set.ids[i]) > 0) continue;
    out.ids.push_back(set.ids[i]);
    out.true_class.push_back(set.true_class[i]);
    out.predicted_class.push_back(set.predicted_class[i]);
    for (std::size_t k = 0; k < set.attribute_keys.size(); ++k) {
      out.attribute_labels[k].push_back(set.attribute_labels[k][i]);
    }
  }
  if (removed != nullptr) *removed = set.size() - out.size();
  return out;
}

}  // namespace febias
