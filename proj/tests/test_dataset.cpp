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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "febias/dataset.hpp"
#include "febias/dataset_io.hpp"
#include "febias/error.hpp"
#include "febias/rng.hpp"
#include "febias/text.hpp"

using namespace febias;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "febias_dataset_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = (temp_dir() / name).string();
  write_text_file(path, content);
  return path;
}

EmbeddingSet tiny_set() {
  EmbeddingSet set;
  set.dim = 4;
  set.ids = {"a", "b", "c"};
  set.values = {3, 4, 0, 0, 1, 0, 0, 0, -2, 0, 0, 0};
  set.label_keys = {"expression", "gender"};
  set.labels = {{"anger", "fear", "anger"}, {"F", "M", "F"}};
  return set;
}

}  // namespace

TEST_CASE("csv load: well-formed 3x4 file") {
  auto path = write_temp("ok.csv",
                         "id,expression,v0,v1,v2,v3\n"
                         "s1,anger,1,0,0,0\n"
                         "s2,fear,0,1,0,0\n"
                         "s3,anger,0.5,0.25,0,1\n");
  auto set = load_embeddings(path, EmbeddingFormat::csv);
  CHECK(set.size() == 3);
  CHECK(set.dim == 4);
  CHECK(set.ids[2] == "s3");
  CHECK(set.row(2)[1] == 0.25);
  CHECK((*set.labels_for("expression"))[1] == "fear");
}

TEST_CASE("csv load: zero vector is rejected naming the sample") {
  auto path = write_temp("zero.csv",
                         "id,expression,v0,v1\n"
                         "good,anger,1,0\n"
                         "bad_row,anger,0,0\n");
  try {
    load_embeddings(path, EmbeddingFormat::csv);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("bad_row") != std::string::npos);
  }
}

TEST_CASE("csv load: non-finite value rejected") {
  auto path = write_temp("nan.csv",
                         "id,expression,v0,v1\n"
                         "s1,anger,nan,0\n");
  CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::csv), Error);
}

TEST_CASE("csv load: missing label column is an error") {
  auto path = write_temp("short.csv",
                         "id,expression,v0,v1\n"
                         "s1,1,0\n");
  try {
    load_embeddings(path, EmbeddingFormat::csv);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
}

TEST_CASE("binary truncated payload reports a size mismatch") {
  auto bin_path = (temp_dir() / "trunc.febe").string();
  write_embeddings(tiny_set(), bin_path, EmbeddingFormat::binary);
  auto blob = read_text_file(bin_path);
  write_text_file(bin_path, blob.substr(0, blob.size() - 5));
  try {
    load_embeddings(bin_path, EmbeddingFormat::binary);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("payload size mismatch") != std::string::npos);
  }
}

TEST_CASE("binary round-trip is byte-identical") {
  // Random set, written, loaded, written again.
  PhiloxStream rng(derive_stream_key(99, "roundtrip"), 0);
  EmbeddingSet set;
  set.dim = 7;
  set.label_keys = {"expression", "race"};
  set.labels.resize(2);
  for (int i = 0; i < 23; ++i) {
    set.ids.push_back("img_" + std::to_string(i));
    set.labels[0].push_back(i % 2 == 0 ? "anger" : "fear");
    set.labels[1].push_back(i % 3 == 0 ? "W" : "B");
    for (std::size_t j = 0; j < set.dim; ++j) {
      set.values.push_back(rng.next_gaussian());
    }
  }
  auto p1 = (temp_dir() / "rt1.febe").string();
  auto p2 = (temp_dir() / "rt2.febe").string();
  write_embeddings(set, p1, EmbeddingFormat::binary);
  auto loaded = load_embeddings(p1, EmbeddingFormat::binary);
  write_embeddings(loaded, p2, EmbeddingFormat::binary);
  CHECK(read_text_file(p1) == read_text_file(p2));

  // 32-bit payloads widen losslessly: narrowing back reproduces the bits.
  CHECK(loaded.row(0)[0] == doctest::Approx(set.values[0]).epsilon(1e-7));
}

TEST_CASE("csv round-trip preserves doubles exactly") {
  auto set = tiny_set();
  auto p1 = (temp_dir() / "rt1.csv").string();
  write_embeddings(set, p1, EmbeddingFormat::csv);
  auto loaded = load_embeddings(p1, EmbeddingFormat::csv);
  REQUIRE(loaded.size() == set.size());
  for (std::size_t i = 0; i < set.values.size(); ++i) {
    CHECK(loaded.values[i] == set.values[i]);
  }
}

TEST_CASE("format detection sniffs the magic bytes") {
  auto bin = (temp_dir() / "det.febe").string();
  write_embeddings(tiny_set(), bin, EmbeddingFormat::binary);
  CHECK(detect_embedding_format(bin) == EmbeddingFormat::binary);
  auto csv = write_temp("det.csv", "id,expression,v0\nx,anger,1\n");
  CHECK(detect_embedding_format(csv) == EmbeddingFormat::csv);
}

TEST_CASE("normalize: 3-4-5 triangle, unit identity, sign preserved") {
  auto n = normalize(tiny_set());
  CHECK(n.unit_row(0)[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(n.unit_row(0)[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(n.unit_row(1)[0] == 1.0);
  CHECK(n.unit_row(2)[0] == -1.0);
  CHECK(n.unit_row(2)[1] == 0.0);
}

TEST_CASE("normalize is idempotent within 1e-12") {
  PhiloxStream rng(derive_stream_key(5, "idem"), 0);
  EmbeddingSet set;
  set.dim = 6;
  for (int i = 0; i < 40; ++i) {
    set.ids.push_back("n" + std::to_string(i));
    for (std::size_t j = 0; j < set.dim; ++j) {
      set.values.push_back(3.0 * rng.next_gaussian());
    }
  }
  auto once = normalize(set);
  EmbeddingSet unit_as_raw;
  unit_as_raw.dim = set.dim;
  unit_as_raw.ids = set.ids;
  unit_as_raw.values = once.unit;
  auto twice = normalize(unit_as_raw);
  for (std::size_t i = 0; i < once.unit.size(); ++i) {
    CHECK(std::abs(once.unit[i] - twice.unit[i]) <= 1e-12);
  }
  for (std::size_t i = 0; i < once.size(); ++i) {
    double sq = 0.0;
    for (double v : once.unit_row(i)) sq += v * v;
    CHECK(std::abs(std::sqrt(sq) - 1.0) <= 1e-9);
  }
}

TEST_CASE("partition splits 6/4 by gender and errors on unknown labels") {
  EmbeddingSet set;
  set.dim = 2;
  set.label_keys = {"gender"};
  set.labels.resize(1);
  for (int i = 0; i < 10; ++i) {
    set.ids.push_back("g" + std::to_string(i));
    set.labels[0].push_back(i < 6 ? "F" : "M");
    set.values.push_back(1.0);
    set.values.push_back(static_cast<double>(i));
  }
  auto norm = normalize(set);
  auto parts = partition(norm, "gender", {"F", "M"});
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].label == "F");
  CHECK(parts[0].set.size() == 6);
  CHECK(parts[1].set.size() == 4);

  set.labels[0][3] = "Other";
  auto norm2 = normalize(set);
  try {
    partition(norm2, "gender", {"F", "M"});
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Other") != std::string::npos);
  }

  CHECK_THROWS_AS(partition(norm, "gender", {"F", "M", "X"}), Error);  // empty group
}

TEST_CASE("partition then re-concatenate yields the original id multiset") {
  PhiloxStream rng(derive_stream_key(11, "part"), 0);
  EmbeddingSet set;
  set.dim = 3;
  set.label_keys = {"race"};
  set.labels.resize(1);
  const char* cats[] = {"W", "B", "A", "I"};
  for (int i = 0; i < 60; ++i) {
    set.ids.push_back("r" + std::to_string(i));
    set.labels[0].push_back(cats[rng.below(4)]);
    for (int j = 0; j < 3; ++j) set.values.push_back(rng.next_gaussian());
  }
  // Make sure every category is hit.
  set.labels[0][0] = "W";
  set.labels[0][1] = "B";
  set.labels[0][2] = "A";
  set.labels[0][3] = "I";
  auto parts = partition(normalize(set), "race", {"W", "B", "A", "I"});
  std::multiset<std::string> got;
  std::size_t total = 0;
  for (const auto& p : parts) {
    total += p.set.size();
    for (const auto& id : p.set.base.ids) got.insert(id);
  }
  CHECK(total == set.size());
  CHECK(got == std::multiset<std::string>(set.ids.begin(), set.ids.end()));
}

TEST_CASE("prediction log loads, and rejects unknown classes and duplicates") {
  auto ok = write_temp("preds.csv",
                       "id,true,pred,gender\n"
                       "p1,anger,anger,F\n"
                       "p2,anger,fear,M\n"
                       "p3,fear,fear,F\n"
                       "p4,fear,anger,M\n"
                       "p5,anger,anger,F\n");
  auto preds = load_predictions(ok, {"anger", "fear"});
  CHECK(preds.size() == 5);
  CHECK(preds.true_name(0) == "anger");
  CHECK(preds.predicted_name(1) == "fear");
  REQUIRE(preds.attribute_for("gender") != nullptr);

  auto bad_class = write_temp("preds_bad.csv",
                              "id,true,pred\n"
                              "p1,anger,joy\n");
  try {
    load_predictions(bad_class, {"anger", "fear"});
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("joy") != std::string::npos);
  }

  auto dup = write_temp("preds_dup.csv",
                        "id,true,pred\n"
                        "img_7,anger,anger\n"
                        "img_7,fear,fear\n");
  try {
    load_predictions(dup, {"anger", "fear"});
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("img_7") != std::string::npos);
  }
}

TEST_CASE("id exclusion removes rows and reports the count") {
  auto excl_path = write_temp("excl.txt", "# ambiguous samples\nb\nmissing\n");
  auto excluded = load_id_exclusions(excl_path);
  std::size_t removed = 0;
  auto filtered = exclude_ids(tiny_set(), excluded, &removed);
  CHECK(removed == 1);
  CHECK(filtered.size() == 2);
  CHECK(filtered.ids[0] == "a");
  CHECK(filtered.ids[1] == "c");
}

TEST_CASE("filter_to_categories drops out-of-schema rows with a count") {
  auto set = tiny_set();
  std::size_t dropped = 0;
  auto kept = filter_to_categories(set, "expression", {"anger"}, &dropped);
  CHECK(dropped == 1);
  CHECK(kept.size() == 2);
}

TEST_CASE("schema requires two unique groups") {
  CHECK_THROWS_AS(AttributeSchema::make("gender", {"F"}), Error);
  CHECK_THROWS_AS(AttributeSchema::make("gender", {"F", "F"}), Error);
  auto s = AttributeSchema::make("gender", {"F", "M"});
  CHECK(s.index_of("M") == 1);
  CHECK(s.index_of("X") == AttributeSchema::npos);
}
