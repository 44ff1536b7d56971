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
#include <filesystem>

#include "febias/association.hpp"
#include "febias/dataset_io.hpp"
#include "febias/error.hpp"
#include "febias/synth.hpp"
#include "febias/text.hpp"

using namespace febias;

TEST_CASE("same seed reproduces the scenario bit for bit") {
  ScenarioSpec spec;
  spec.dim = 12;
  spec.expressions = {"e0", "e1"};
  spec.groups = {"g0", "g1"};
  spec.tilt = 0.3;
  spec.test_per_expression = 15;
  spec.probe_per_group = 10;
  spec.predictions_per_cell = 20;
  spec.seed = 77;
  auto s1 = gen_biased(spec);
  auto s2 = gen_biased(spec);
  CHECK(s1.test.values == s2.test.values);
  CHECK(s1.probe.values == s2.probe.values);
  CHECK(s1.predictions.predicted_class == s2.predictions.predicted_class);
  CHECK(s1.anchor_cosines == s2.anchor_cosines);

  spec.seed = 78;
  auto s3 = gen_biased(spec);
  CHECK(s1.test.values != s3.test.values);
}

TEST_CASE("anchors are orthonormal and recorded") {
  ScenarioSpec spec;
  spec.dim = 16;
  spec.expressions = {"e0", "e1", "e2"};
  spec.groups = {"g0", "g1"};
  spec.seed = 5;
  auto s = gen_biased(spec);
  std::size_t k = spec.expressions.size() + spec.groups.size();
  REQUIRE(s.anchor_cosines.size() == k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(s.anchor_cosines[i * k + j] - expect) <= 1e-9);
    }
  }
}

TEST_CASE("zero tilt keeps the two probe groups symmetric") {
  ScenarioSpec spec;
  spec.dim = 24;
  spec.expressions = {"e0"};
  spec.groups = {"g0", "g1"};
  spec.tilt = 0.0;
  spec.test_per_expression = 300;
  spec.probe_per_group = 300;
  spec.predictions_per_cell = 10;
  spec.seed = 9;
  auto s = gen_biased(spec);
  auto by_expr = partition(normalize(s.test), "expression", spec.expressions);
  auto by_group = partition(normalize(s.probe), "group", spec.groups);
  auto table = association_table(by_expr, by_group);
  CHECK(std::abs(dia(table, "e0", "g0", "g1")) < 0.05);
}

TEST_CASE("large tilt pulls the tilted group toward the target expression") {
  ScenarioSpec spec;
  spec.dim = 24;
  spec.expressions = {"e0", "e1"};
  spec.groups = {"g0", "g1"};
  spec.tilt = 0.8;
  spec.tilted_group = 1;
  spec.target_expression = 0;
  spec.noise_scale = 0.4;
  spec.test_per_expression = 300;
  spec.probe_per_group = 300;
  spec.predictions_per_cell = 10;
  spec.seed = 13;
  auto s = gen_biased(spec);
  auto by_expr = partition(normalize(s.test), "expression", spec.expressions);
  auto by_group = partition(normalize(s.probe), "group", spec.groups);
  auto table = association_table(by_expr, by_group);
  CHECK(reference_group_assoc(table, "e0") == "g1");
  CHECK(dia(table, "e0", "g1", "g0") > 0.02);
}

TEST_CASE("accuracy boost plants a DEO disparity in the prediction log") {
  ScenarioSpec spec;
  spec.dim = 8;
  spec.expressions = {"e0", "e1"};
  spec.groups = {"g0", "g1"};
  spec.tilted_group = 0;
  spec.target_expression = 0;
  spec.base_accuracy = 0.6;
  spec.accuracy_boost = 0.35;
  spec.predictions_per_cell = 2000;
  spec.test_per_expression = 5;
  spec.probe_per_group = 5;
  spec.seed = 21;
  auto s = gen_biased(spec);
  // empirical accuracy per cell
  auto acc = [&](const std::string& e, const std::string& g) {
    std::size_t n = 0, ok = 0;
    for (std::size_t i = 0; i < s.predictions.size(); ++i) {
      if (s.predictions.true_name(i) == e &&
          s.predictions.attribute_labels[0][i] == g) {
        ++n;
        ok += s.predictions.predicted_class[i] == s.predictions.true_class[i];
      }
    }
    return static_cast<double>(ok) / static_cast<double>(n);
  };
  CHECK(acc("e0", "g0") > acc("e0", "g1") + 0.2);
  CHECK(std::abs(acc("e1", "g0") - acc("e1", "g1")) < 0.1);
}

TEST_CASE("null scenario draws all groups from one distribution") {
  NullSpec spec;
  spec.dim = 16;
  spec.expressions = {"e0"};
  spec.groups = {"g0", "g1", "g2"};
  spec.test_per_expression = 50;
  spec.probe_per_group = 400;
  spec.predictions_per_cell = 50;
  spec.seed = 31;
  auto s = gen_null(spec);
  auto by_group = partition(normalize(s.probe), "group", spec.groups);
  // group means should coincide (shared anchor), pairwise cosine near 1
  std::vector<GroupSummary> sums;
  for (const auto& g : by_group) sums.push_back(group_summary(g));
  for (std::size_t i = 1; i < sums.size(); ++i) {
    double c = dot(sums[0].mean_unit, sums[i].mean_unit) /
               std::sqrt(dot(sums[0].mean_unit, sums[0].mean_unit) *
                         dot(sums[i].mean_unit, sums[i].mean_unit));
    CHECK(c > 0.99);
  }
}

TEST_CASE("invalid specs are rejected") {
  ScenarioSpec spec;
  spec.test_per_expression = 0;
  CHECK_THROWS_AS(gen_biased(spec), Error);
  ScenarioSpec spec2;
  spec2.dim = 4;  // 7 expressions + 2 groups > 4 dims
  CHECK_THROWS_AS(gen_biased(spec2), Error);
  ScenarioSpec spec3;
  spec3.tilted_group = 9;
  CHECK_THROWS_AS(gen_biased(spec3), Error);
  NullSpec n;
  n.probe_per_group = 0;
  CHECK_THROWS_AS(gen_null(n), Error);
}

TEST_CASE("scenario files round-trip through the standard formats") {
  ScenarioSpec spec;
  spec.dim = 10;
  spec.expressions = {"e0", "e1"};
  spec.groups = {"g0", "g1"};
  spec.test_per_expression = 8;
  spec.probe_per_group = 6;
  spec.predictions_per_cell = 5;
  spec.seed = 3;
  auto s = gen_biased(spec);
  auto dir = std::filesystem::temp_directory_path() / "febias_synth_rt";
  std::filesystem::create_directories(dir);
  auto test_path = (dir / "test.febe").string();
  auto preds_path = (dir / "preds.csv").string();
  write_embeddings(s.test, test_path, EmbeddingFormat::binary);
  auto loaded = load_embeddings(test_path, EmbeddingFormat::binary);
  CHECK(loaded.size() == s.test.size());
  CHECK(loaded.labels_for("expression") != nullptr);
  write_predictions(s.predictions, preds_path);
  auto preds = load_predictions(preds_path, spec.expressions);
  CHECK(preds.size() == s.predictions.size());
  CHECK(preds.attribute_for("group") != nullptr);
}
