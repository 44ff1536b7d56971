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

#ifndef FEBIAS_DATASET_IO_HPP
#define FEBIAS_DATASET_IO_HPP

#include <string>
#include <unordered_set>
#include <vector>

#include "febias/dataset.hpp"

namespace febias {

// Binary embedding container:
//   "FEBE" | u32 version (=1) | u32 n | u32 d | u32 label_block_len |
//   label block (UTF-8 CSV: header "id[,<key>...]" + n rows) |
//   n*d little-endian f32, row-major.
// CSV embedding container: header "id,<label-keys...>,v0..v{d-1}".
enum class EmbeddingFormat { binary, csv };

EmbeddingSet load_embeddings(const std::string& path, EmbeddingFormat format);
void write_embeddings(const EmbeddingSet& set, const std::string& path,
                      EmbeddingFormat format);

// Sniffs the magic bytes: "FEBE" -> binary, anything else -> csv.
EmbeddingFormat detect_embedding_format(const std::string& path);

// Prediction CSV: header "id,true,pred[,<attribute columns...>]".
PredictionSet load_predictions(const std::string& path,
                               std::vector<std::string> class_vocabulary);
void write_predictions(const PredictionSet& set, const std::string& path);

// One id per line, '#' comments.
std::unordered_set<std::string> load_id_exclusions(const std::string& path);

}  // namespace febias

#endif  // FEBIAS_DATASET_IO_HPP
