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

#include "febias/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "febias/error.hpp"
#include "febias/text.hpp"

namespace febias {

namespace {

constexpr char kMagic[4] = {'F', 'E', 'B', 'E'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t read_u32_le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void append_u32_le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

float f32_from_bits(std::uint32_t bits) { return std::bit_cast<float>(bits); }
std::uint32_t bits_from_f32(float v) { return std::bit_cast<std::uint32_t>(v); }

// Parses the label block / CSV head shared by both containers.
struct LabelTable {
  std::vector<std::string> ids;
  std::vector<std::string> keys;
  std::vector<std::vector<std::string>> columns;  // per key
};

LabelTable parse_label_block(std::string_view text, std::size_t expect_rows,
                             const std::string& path) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) {
    throw_parse("missing label block header in " + path);
  }
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "id") {
    throw_parse("label block header must start with 'id' in " + path);
  }
  LabelTable table;
  table.keys.assign(header.begin() + 1, header.end());
  table.columns.resize(table.keys.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw_parse("label row for '" + (fields.empty() ? "?" : fields[0]) +
                  "' has " + std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()) + " in " + path);
    }
    table.ids.push_back(fields[0]);
    for (std::size_t k = 0; k < table.keys.size(); ++k) {
      table.columns[k].push_back(fields[k + 1]);
    }
  }
  if (table.ids.size() != expect_rows) {
    throw_parse("label block lists " + std::to_string(table.ids.size()) +
                " samples but header declares " + std::to_string(expect_rows) +
                " in " + path);
  }
  return table;
}

std::string render_label_block(const EmbeddingSet& set) {
  std::string out = "id";
  for (const auto& key : set.label_keys) {
    out += ',';
    out += key;
  }
  out += '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += set.ids[i];
    for (std::size_t k = 0; k < set.label_keys.size(); ++k) {
      out += ',';
      out += set.labels[k][i];
    }
    out += '\n';
  }
  return out;
}

EmbeddingSet load_embeddings_binary(const std::string& path) {
  std::string blob = read_text_file(path);
  const auto* p = reinterpret_cast<const std::uint8_t*>(blob.data());
  if (blob.size() < 20 || std::memcmp(p, kMagic, 4) != 0) {
    throw_parse("not a FEBE embedding file: " + path);
  }
  std::uint32_t version = read_u32_le(p + 4);
  if (version != kVersion) {
    throw_parse("unsupported FEBE version " + std::to_string(version) + " in " + path);
  }
  std::uint32_t n = read_u32_le(p + 8);
  std::uint32_t d = read_u32_le(p + 12);
  std::uint32_t label_len = read_u32_le(p + 16);
  std::size_t header_end = 20;
  if (blob.size() < header_end + label_len) {
    throw_parse("label block truncated in " + path);
  }
  std::string_view label_text(blob.data() + header_end, label_len);
  std::size_t payload_off = header_end + label_len;
  std::size_t expect_payload = std::size_t(n) * d * 4;
  if (blob.size() - payload_off != expect_payload) {
    throw_parse("payload size mismatch in " + path + ": expected " +
                std::to_string(expect_payload) + " bytes, found " +
                std::to_string(blob.size() - payload_off));
  }

  EmbeddingSet set;
  set.dim = d;
  auto table = parse_label_block(label_text, n, path);
  set.ids = std::move(table.ids);
  set.label_keys = std::move(table.keys);
  set.labels = std::move(table.columns);

  set.values.resize(std::size_t(n) * d);
  const std::uint8_t* q = p + payload_off;
  for (std::size_t i = 0; i < set.values.size(); ++i) {
    set.values[i] = static_cast<double>(f32_from_bits(read_u32_le(q + 4 * i)));
  }
  set.validate();
  return set;
}

EmbeddingSet load_embeddings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open embeddings: " + path);
  std::string line;
  if (!std::getline(in, line)) throw_parse("empty embedding CSV: " + path);
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "id") {
    throw_parse("embedding CSV header must start with 'id' in " + path);
  }
  // Trailing v0..v{d-1} columns carry the vector; anything between is labels.
  std::size_t first_value = header.size();
  while (first_value > 1) {
    const std::string& col = header[first_value - 1];
    if (col.size() < 2 || col[0] != 'v') break;
    bool digits = true;
    for (std::size_t i = 1; i < col.size(); ++i) {
      if (col[i] < '0' || col[i] > '9') digits = false;
    }
    if (!digits) break;
    --first_value;
  }
  std::size_t d = header.size() - first_value;
  if (d == 0) throw_parse("no v0..v{d-1} columns in " + path);
  for (std::size_t j = 0; j < d; ++j) {
    if (header[first_value + j] != "v" + std::to_string(j)) {
      throw_parse("value columns must be v0..v" + std::to_string(d - 1) +
                  " in order in " + path);
    }
  }

  EmbeddingSet set;
  set.dim = d;
  set.label_keys.assign(header.begin() + 1, header.begin() + first_value);
  set.labels.resize(set.label_keys.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw_parse("row for '" + (fields.empty() ? "?" : fields[0]) + "' has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()) + " in " + path);
    }
    set.ids.push_back(fields[0]);
    for (std::size_t k = 0; k < set.label_keys.size(); ++k) {
      set.labels[k].push_back(fields[1 + k]);
    }
    for (std::size_t j = 0; j < d; ++j) {
      set.values.push_back(
          parse_double_strict(fields[first_value + j], path));
    }
  }
  set.validate();
  return set;
}

}  // namespace

EmbeddingFormat detect_embedding_format(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open embeddings: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
    return EmbeddingFormat::binary;
  }
  return EmbeddingFormat::csv;
}

EmbeddingSet load_embeddings(const std::string& path, EmbeddingFormat format) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw_io("cannot open embeddings: " + path);
  }
  return format == EmbeddingFormat::binary ? load_embeddings_binary(path)
                                           : load_embeddings_csv(path);
}

void write_embeddings(const EmbeddingSet& set, const std::string& path,
                      EmbeddingFormat format) {
  set.validate();
  if (format == EmbeddingFormat::binary) {
    std::string label_block = render_label_block(set);
    std::string out;
    out.reserve(20 + label_block.size() + set.values.size() * 4);
    out.append(kMagic, 4);
    append_u32_le(out, kVersion);
    append_u32_le(out, static_cast<std::uint32_t>(set.size()));
    append_u32_le(out, static_cast<std::uint32_t>(set.dim));
    append_u32_le(out, static_cast<std::uint32_t>(label_block.size()));
    out += label_block;
    for (double v : set.values) {
      append_u32_le(out, bits_from_f32(static_cast<float>(v)));
    }
    write_text_file(path, out);
    return;
  }
  std::string out = "id";
  for (const auto& key : set.label_keys) {
    out += ',';
    out += key;
  }
  for (std::size_t j = 0; j < set.dim; ++j) out += ",v" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += set.ids[i];
    for (std::size_t k = 0; k < set.label_keys.size(); ++k) {
      out += ',';
      out += set.labels[k][i];
    }
    for (double v : set.row(i)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

PredictionSet load_predictions(const std::string& path,
                               std::vector<std::string> class_vocabulary) {
  if (class_vocabulary.empty()) throw_invalid("empty class vocabulary");
  std::ifstream in(path);
  if (!in) throw_io("cannot open predictions: " + path);
  std::string line;
  if (!std::getline(in, line)) throw_parse("empty prediction CSV: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "true" ||
      header[2] != "pred") {
    throw_parse("prediction CSV header must be id,true,pred[,...] in " + path);
  }

  PredictionSet set;
  set.class_vocabulary = std::move(class_vocabulary);
  set.attribute_keys.assign(header.begin() + 3, header.end());
  set.attribute_labels.resize(set.attribute_keys.size());

  auto class_index = [&](const std::string& name) -> std::uint32_t {
    for (std::size_t c = 0; c < set.class_vocabulary.size(); ++c) {
      if (set.class_vocabulary[c] == name) return static_cast<std::uint32_t>(c);
    }
    throw_validation("class '" + name + "' not in declared vocabulary (" + path + ")");
  };

  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw_parse("row for '" + (fields.empty() ? "?" : fields[0]) + "' has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()) + " in " + path);
    }
    if (!valid_token(fields[0])) {
      throw_validation("invalid sample id '" + fields[0] + "' in " + path);
    }
    if (!seen_ids.insert(fields[0]).second) {
      throw_validation("duplicate id '" + fields[0] + "' in " + path);
    }
    set.ids.push_back(fields[0]);
    set.true_class.push_back(class_index(fields[1]));
    set.predicted_class.push_back(class_index(fields[2]));
    for (std::size_t k = 0; k < set.attribute_keys.size(); ++k) {
      if (!valid_token(fields[3 + k])) {
        throw_validation("invalid attribute label for '" + fields[0] + "' in " + path);
      }
      set.attribute_labels[k].push_back(fields[3 + k]);
    }
  }
  return set;
}

void write_predictions(const PredictionSet& set, const std::string& path) {
  std::string out = "id,true,pred";
  for (const auto& key : set.attribute_keys) {
    out += ',';
    out += key;
  }
  out += '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += set.ids[i];
    out += ',';
    out += set.true_name(i);
    out += ',';
    out += set.predicted_name(i);
    for (std::size_t k = 0; k < set.attribute_keys.size(); ++k) {
      out += ',';
      out += set.attribute_labels[k][i];
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::unordered_set<std::string> load_id_exclusions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open exclusion list: " + path);
  std::unordered_set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ids.insert(line);
  }
  return ids;
}

}  // namespace febias
