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

#ifndef FEBIAS_SYNTH_HPP
#define FEBIAS_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "febias/dataset.hpp"

namespace febias {

// Synthetic scenarios with controllable planted bias. Expression and group
// anchors are random orthonormal directions (or explicit ones for hand-built
// cases); samples are anchor + isotropic Gaussian noise, written raw so
// normalization happens in the ordinary ingestion path.
struct ScenarioSpec {
  std::size_t dim = 32;
  std::vector<std::string> expressions = {"neutral",  "happiness", "surprise",
                                          "sadness",  "anger",     "disgust",
                                          "fear"};
  std::string attribute_name = "group";
  std::vector<std::string> groups = {"g0", "g1"};

  // Planted feature-space bias: members of `tilted_group` lean toward the
  // anchor of `target_expression` by `tilt`.
  double tilt = 0.0;
  std::size_t tilted_group = 0;
  std::size_t target_expression = 0;

  std::size_t test_per_expression = 200;
  std::size_t probe_per_group = 200;
  std::size_t predictions_per_cell = 200;

  double noise_scale = 0.5;

  // Planted performance bias: the tilted group's correctness probability on
  // the target expression is base_accuracy + accuracy_boost.
  double base_accuracy = 0.75;
  double accuracy_boost = 0.0;

  std::uint64_t seed = 0;

  // Optional explicit anchors (unit vectors); sizes must match when given.
  std::vector<std::vector<double>> expression_anchors;
  std::vector<std::vector<double>> group_anchors;
};

// All groups share one distribution and one correctness probability, so any
// group relabeling leaves the data distribution unchanged.
struct NullSpec {
  std::size_t dim = 32;
  std::vector<std::string> expressions = {"e0"};
  std::string attribute_name = "group";
  std::vector<std::string> groups = {"g0", "g1"};
  std::size_t test_per_expression = 200;
  std::size_t probe_per_group = 200;
  std::size_t predictions_per_cell = 200;
  double noise_scale = 0.5;
  double accuracy = 0.75;
  std::uint64_t seed = 0;
};

struct SynthScenario {
  EmbeddingSet test;
  EmbeddingSet probe;
  PredictionSet predictions;
  // Pairwise cosines of the anchors actually used (row-major over the
  // concatenated expression+group anchor list), recorded for auditability.
  std::vector<double> anchor_cosines;
};

SynthScenario gen_biased(const ScenarioSpec& spec);
SynthScenario gen_null(const NullSpec& spec);

}  // namespace febias

#endif  // FEBIAS_SYNTH_HPP
