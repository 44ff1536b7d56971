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

#include "febias/report.hpp"

using namespace febias;

namespace {

BiasEntry entry(const std::string& group, double validated) {
  BiasEntry e;
  e.group = group;
  e.result.observed = validated > 0 ? validated : 0.12;
  e.result.p = validated > 0 ? 0.001 : 0.5;
  e.result.validated = validated;
  e.result.method = TestMethod::monte_carlo;
  e.result.b_used = 10000;
  return e;
}

BiasFinding finding(const std::string& expr, const std::string& attr,
                    const std::string& ref, std::vector<BiasEntry> entries) {
  BiasFinding f;
  f.expression = expr;
  f.attribute = attr;
  f.reference_group = ref;
  f.source = FindingSource::dip;
  f.entries = std::move(entries);
  return f;
}

}  // namespace

TEST_CASE("direction cells: significant, not significant, mixed") {
  // reference M, F significant at 9.30%
  auto anger = finding("anger", "gender", "M", {entry("F", 0.0930)});
  CHECK(bias_direction_cell(anger) == "M → F");
  CHECK(validated_values_cell(anger) == "9.30");

  // reference F, M not significant
  auto surprise = finding("surprise", "gender", "F", {entry("M", 0.0)});
  CHECK(bias_direction_cell(surprise) == "F/M");
  CHECK(validated_values_cell(surprise) == "0");

  // four race groups, I and A not significant, B at 7.81%
  auto race = finding("anger", "race", "W",
                      {entry("I", 0.0), entry("A", 0.0), entry("B", 0.0781)});
  CHECK(bias_direction_cell(race) == "W/I/A → B");
  CHECK(validated_values_cell(race) == "7.81");
}

TEST_CASE("direction cells: several significant groups are parenthesized") {
  auto sadness = finding("sadness", "race", "A",
                         {entry("W", 0.0823), entry("B", 0.1093), entry("I", 0.1182)});
  CHECK(bias_direction_cell(sadness) == "A → (W, B, I)");
  CHECK(validated_values_cell(sadness) == "(8.23, 10.93, 11.82)");

  auto neutral = finding("neutral", "race", "B",
                         {entry("A", 0.0), entry("W", 0.0423), entry("I", 0.0582)});
  CHECK(bias_direction_cell(neutral) == "B/A → (W, I)");
  CHECK(validated_values_cell(neutral) == "(4.23, 5.82)");

  auto happiness = finding("happiness", "race", "W",
                           {entry("B", 0.0), entry("A", 0.0), entry("I", 0.0)});
  CHECK(bias_direction_cell(happiness) == "W/B/A/I");
  CHECK(validated_values_cell(happiness) == "0");
}

TEST_CASE("report renders one table per attribute with footers") {
  FindingsFile gender;
  gender.meta.attribute = "gender";
  gender.meta.source = "dip";
  gender.meta.alpha = 0.05;
  gender.meta.permutations = 10000;
  gender.meta.manifest_digest = "abc123";
  gender.meta.stats.tests_run = 7;
  gender.findings = {finding("anger", "gender", "M", {entry("F", 0.0930)}),
                     finding("surprise", "gender", "F", {entry("M", 0.0)})};

  FindingsFile race;
  race.meta.attribute = "race";
  race.meta.source = "dia";
  race.meta.alpha = 0.05;
  race.meta.permutations = 10000;
  race.meta.stats.tests_run = 21;
  race.meta.stats.dropped_strata = {{"fear", "I", 3}};
  race.findings = {finding("anger", "race", "W",
                           {entry("I", 0.0), entry("A", 0.0), entry("B", 0.0781)})};

  auto md = render_report({gender, race});
  CHECK(md.find("## Attribute: gender (dip)") != std::string::npos);
  CHECK(md.find("## Attribute: race (dia)") != std::string::npos);
  CHECK(md.find("| anger | M → F | 9.30 |") != std::string::npos);
  CHECK(md.find("| surprise | F/M | 0 |") != std::string::npos);
  CHECK(md.find("| anger | W/I/A → B | 7.81 |") != std::string::npos);
  CHECK(md.find("Manifest: abc123") != std::string::npos);
  CHECK(md.find("does not indicate that the observed value is zero") !=
        std::string::npos);
  CHECK(md.find("Permutation tests performed: 28") != std::string::npos);
  CHECK(md.find("(fear, I, n=3)") != std::string::npos);
  CHECK(md.find("No multiple-comparison correction") != std::string::npos);
}

TEST_CASE("report rejects empty input") {
  CHECK_THROWS(render_report({}));
  FindingsFile empty;
  empty.meta.attribute = "gender";
  CHECK_THROWS(render_report({empty}));
}
