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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "febias.h"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "febias_capi";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(std::string(febias_version()) == "0.1.0");
  febias_perm_config cfg;
  febias_perm_config_defaults(&cfg);
  CHECK(cfg.permutations == 10000);
  CHECK(cfg.alpha == 0.05);
  CHECK(cfg.exact_threshold == 100000);
  CHECK(cfg.estimator == 0);
}

TEST_CASE("errors set a status and a message") {
  febias_embeddings* set = nullptr;
  auto st = febias_embeddings_load("/nonexistent/file.febe", FEBIAS_FORMAT_AUTO,
                                   &set);
  CHECK(st == FEBIAS_ERROR_IO);
  CHECK(std::strlen(febias_last_error()) > 0);
  CHECK(set == nullptr);

  febias_namelist* list = nullptr;
  CHECK(febias_namelist_create(nullptr, 0, &list) ==
        FEBIAS_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("end-to-end through the shared library") {
  auto dir = work_dir();
  auto synth_dir = dir / "scenario";

  febias_synth_config synth;
  febias_synth_config_defaults(&synth);
  synth.dim = 16;
  synth.n_expressions = 3;
  synth.n_groups = 2;
  synth.test_per_expression = 60;
  synth.probe_per_group = 50;
  synth.predictions_per_cell = 80;
  synth.tilt = 0.6;
  synth.accuracy_boost = 0.2;
  synth.base_accuracy = 0.7;
  synth.seed = 12345;
  REQUIRE(febias_synth_generate(&synth, synth_dir.string().c_str()) == FEBIAS_OK);

  febias_namelist* expressions = nullptr;
  REQUIRE(febias_namelist_load((synth_dir / "expressions.txt").string().c_str(),
                               &expressions) == FEBIAS_OK);
  CHECK(febias_namelist_count(expressions) == 3);
  CHECK(std::string(febias_namelist_name(expressions, 0)) == "e0");

  febias_namelist* groups = nullptr;
  REQUIRE(febias_namelist_load((synth_dir / "group.txt").string().c_str(),
                               &groups) == FEBIAS_OK);
  febias_schema* schema = nullptr;
  REQUIRE(febias_schema_create("group", groups, &schema) == FEBIAS_OK);

  febias_embeddings* test_set = nullptr;
  febias_embeddings* probe_set = nullptr;
  REQUIRE(febias_embeddings_load(
              (synth_dir / "test_embeddings.febe").string().c_str(),
              FEBIAS_FORMAT_AUTO, &test_set) == FEBIAS_OK);
  REQUIRE(febias_embeddings_load(
              (synth_dir / "probe_embeddings.febe").string().c_str(),
              FEBIAS_FORMAT_AUTO, &probe_set) == FEBIAS_OK);
  CHECK(febias_embeddings_count(test_set) == 180);
  CHECK(febias_embeddings_dim(test_set) == 16);

  febias_perm_config cfg;
  febias_perm_config_defaults(&cfg);
  cfg.permutations = 400;
  cfg.seed = 9;
  cfg.threads = 2;

  febias_findings* dia = nullptr;
  REQUIRE(febias_run_dia(test_set, probe_set, expressions, schema, &cfg, &dia) ==
          FEBIAS_OK);
  CHECK(febias_findings_count(dia) == 3);
  CHECK(febias_findings_tests_run(dia) == 3);

  febias_predictions* preds = nullptr;
  REQUIRE(febias_predictions_load((synth_dir / "predictions.csv").string().c_str(),
                                  expressions, &preds) == FEBIAS_OK);
  CHECK(febias_predictions_count(preds) == 3 * 2 * 80);

  febias_findings* dip = nullptr;
  REQUIRE(febias_run_dip(preds, expressions, schema, &cfg, 1, &dip) == FEBIAS_OK);
  CHECK(febias_findings_count(dip) == 3);

  auto json_path = dir / "dia.json";
  auto csv_path = dir / "dia.csv";
  REQUIRE(febias_findings_write_json(dia, json_path.string().c_str(), "feed") ==
          FEBIAS_OK);
  REQUIRE(febias_findings_write_csv(dia, csv_path.string().c_str(), "feed") ==
          FEBIAS_OK);
  CHECK(slurp(csv_path).rfind("# manifest: feed", 0) == 0);

  febias_findings* reloaded = nullptr;
  REQUIRE(febias_findings_load_json(json_path.string().c_str(), &reloaded) ==
          FEBIAS_OK);
  CHECK(febias_findings_count(reloaded) == 3);

  // compare a findings set against itself: every row matches, l1 = 0
  auto cmp_path = dir / "cmp.csv";
  REQUIRE(febias_compare_write_csv(dia, reloaded, cmp_path.string().c_str(),
                                   nullptr) == FEBIAS_OK);
  auto cmp = slurp(cmp_path);
  CHECK(cmp.find("e0,0.00,true") != std::string::npos);

  const febias_findings* sets[2] = {dia, dip};
  double value = -1.0;
  uint64_t included = 0, excluded = 0;
  REQUIRE(febias_avg_bias(sets, 2, nullptr, &value, &included, &excluded) ==
          FEBIAS_OK);
  CHECK(value >= 0.0);
  CHECK(included == 6);
  CHECK(excluded == 0);

  auto sweep_path = dir / "sweep.csv";
  REQUIRE(febias_alpha_sweep_write_csv(sets, 2, nullptr, nullptr, 0,
                                       sweep_path.string().c_str(),
                                       nullptr) == FEBIAS_OK);
  auto sweep = slurp(sweep_path);
  CHECK(sweep.find("alpha,avg_bias_percent") != std::string::npos);
  CHECK(sweep.find("0.01,") != std::string::npos);
  CHECK(sweep.find("0.1,") != std::string::npos);

  const char* run_names[2] = {"run_a", "run_b"};
  const febias_findings* runs[2] = {dia, reloaded};
  auto runs_path = dir / "runs.csv";
  REQUIRE(febias_multi_run_write_csv(run_names, runs, 2,
                                     runs_path.string().c_str(),
                                     nullptr) == FEBIAS_OK);
  CHECK(slurp(runs_path).find("run_a,") != std::string::npos);

  auto report_path = dir / "report.md";
  REQUIRE(febias_report_write_markdown(sets, 2, report_path.string().c_str()) ==
          FEBIAS_OK);
  auto report = slurp(report_path);
  CHECK(report.find("## Attribute: group (dia)") != std::string::npos);
  CHECK(report.find("## Attribute: group (dip)") != std::string::npos);

  // digests are stable and hex-shaped
  char hex1[65], hex2[65];
  REQUIRE(febias_file_sha256(json_path.string().c_str(), hex1) == FEBIAS_OK);
  REQUIRE(febias_file_sha256(json_path.string().c_str(), hex2) == FEBIAS_OK);
  CHECK(std::string(hex1) == std::string(hex2));
  CHECK(std::strlen(hex1) == 64);
  char hex3[65];
  REQUIRE(febias_buffer_sha256("abc", 3, hex3) == FEBIAS_OK);
  CHECK(std::string(hex3) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  febias_findings_free(dia);
  febias_findings_free(dip);
  febias_findings_free(reloaded);
  febias_predictions_free(preds);
  febias_embeddings_free(test_set);
  febias_embeddings_free(probe_set);
  febias_schema_free(schema);
  febias_namelist_free(groups);
  febias_namelist_free(expressions);
}

TEST_CASE("embeddings exclusion through the C surface") {
  auto dir = work_dir();
  auto csv = dir / "small.csv";
  {
    std::ofstream out(csv);
    out << "id,expression,v0,v1\na,anger,1,0\nb,anger,0,1\nc,fear,1,1\n";
  }
  auto excl = dir / "excl.txt";
  {
    std::ofstream out(excl);
    out << "b\n";
  }
  febias_embeddings* set = nullptr;
  REQUIRE(febias_embeddings_load(csv.string().c_str(), FEBIAS_FORMAT_CSV,
                                 &set) == FEBIAS_OK);
  size_t removed = 0;
  REQUIRE(febias_embeddings_exclude(set, excl.string().c_str(), &removed) ==
          FEBIAS_OK);
  CHECK(removed == 1);
  CHECK(febias_embeddings_count(set) == 2);

  auto out_path = dir / "rewritten.febe";
  REQUIRE(febias_embeddings_write(set, out_path.string().c_str(),
                                  FEBIAS_FORMAT_BINARY) == FEBIAS_OK);
  febias_embeddings* reloaded = nullptr;
  REQUIRE(febias_embeddings_load(out_path.string().c_str(), FEBIAS_FORMAT_AUTO,
                                 &reloaded) == FEBIAS_OK);
  CHECK(febias_embeddings_count(reloaded) == 2);
  febias_embeddings_free(reloaded);
  febias_embeddings_free(set);
}
