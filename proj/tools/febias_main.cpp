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

// febias command-line front end. All domain work happens behind the C API
// in libfebias; this file only parses arguments, assembles the run
// manifest, and orchestrates files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "febias.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitStatistical = 2;

int exit_code_of(febias_status status) {
  return status == FEBIAS_ERROR_STAT ? kExitStatistical : kExitValidation;
}

[[noreturn]] void fail(febias_status status, const std::string& context) {
  std::cerr << "febias: " << context << ": " << febias_last_error() << "\n";
  std::exit(exit_code_of(status));
}

void check(febias_status status, const std::string& context) {
  if (status != FEBIAS_OK) fail(status, context);
}

// RAII wrappers over the C handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { Free(ptr); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using NameList = Handle<febias_namelist, febias_namelist_free>;
using Schema = Handle<febias_schema, febias_schema_free>;
using Embeddings = Handle<febias_embeddings, febias_embeddings_free>;
using Predictions = Handle<febias_predictions, febias_predictions_free>;
using Findings = Handle<febias_findings, febias_findings_free>;

std::string file_digest(const std::string& path) {
  char hex[65];
  check(febias_file_sha256(path.c_str(), hex), "digesting " + path);
  return hex;
}

std::string path_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string timestamp_utc() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

struct ManifestInput {
  std::string role;
  std::string path;
};

// The run manifest: tool version, configuration snapshot, input digests.
// The digest covers everything except the timestamp, so reruns with the
// same inputs and seed emit result files that cite the same manifest.
struct Manifest {
  std::string command;
  ordered_json config = ordered_json::object();
  std::vector<ManifestInput> inputs;

  std::string digest;

  void finalize(const std::string& out_dir) {
    ordered_json root;
    root["tool"] = "febias";
    root["version"] = febias_version();
    root["command"] = command;
    root["config"] = config;
    ordered_json jinputs = ordered_json::array();
    for (const auto& in : inputs) {
      jinputs.push_back({{"role", in.role},
                         {"path", in.path},
                         {"sha256", file_digest(in.path)}});
    }
    root["inputs"] = jinputs;

    std::string canonical = root.dump();
    char hex[65];
    check(febias_buffer_sha256(canonical.data(), canonical.size(), hex),
          "digesting manifest");
    digest = hex;

    root["digest"] = digest;
    root["created_at"] = timestamp_utc();
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
    out << root.dump(2) << "\n";
    if (!out) {
      std::cerr << "febias: cannot write manifest in " << out_dir << "\n";
      std::exit(kExitValidation);
    }
  }
};

struct StatOptions {
  std::uint64_t b = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t exact_threshold = 100000;
  std::string estimator = "paper";
  int threads = 0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--b", b, "Permutation count B")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Significance threshold")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed (all randomness derives from it)")
        ->required();
    cmd->add_option("--exact-threshold", exact_threshold,
                    "Use exact enumeration when the number of distinct "
                    "assignments is at most this")
        ->capture_default_str();
    cmd->add_option("--estimator", estimator, "p-value estimator")
        ->check(CLI::IsMember({"paper", "plus-one"}))
        ->capture_default_str();
    cmd->add_option("--threads", threads,
                    "Worker threads (0 = available parallelism); results do "
                    "not depend on this")
        ->capture_default_str();
  }

  febias_perm_config to_config() const {
    febias_perm_config cfg;
    febias_perm_config_defaults(&cfg);
    cfg.permutations = b;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.exact_threshold = exact_threshold;
    cfg.estimator = estimator == "plus-one" ? 1 : 0;
    cfg.threads = threads;
    return cfg;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["b"] = b;
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["exact_threshold"] = exact_threshold;
    j["estimator"] = estimator;
    j["tie_break"] = "schema-order";
    return j;
  }
};

ordered_json names_json(const febias_namelist* list) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < febias_namelist_count(list); ++i) {
    arr.push_back(febias_namelist_name(list, i));
  }
  return arr;
}

std::vector<std::string> parse_formats(const std::string& formats) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= formats.size()) {
    std::size_t comma = formats.find(',', start);
    std::string item = formats.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& f : out) {
    if (f != "json" && f != "csv" && f != "md") {
      std::cerr << "febias: unknown format '" << f << "'\n";
      std::exit(kExitValidation);
    }
  }
  return out;
}

void write_findings(const Findings& findings, const Manifest& manifest,
                    const std::string& out_dir, const std::string& base,
                    const std::vector<std::string>& formats) {
  fs::create_directories(out_dir);
  for (const auto& f : formats) {
    if (f == "json") {
      auto path = (fs::path(out_dir) / (base + ".json")).string();
      check(febias_findings_write_json(findings.get(), path.c_str(),
                                       manifest.digest.c_str()),
            "writing " + path);
      std::cout << "wrote " << path << "\n";
    } else if (f == "csv") {
      auto path = (fs::path(out_dir) / (base + ".csv")).string();
      check(febias_findings_write_csv(findings.get(), path.c_str(),
                                      manifest.digest.c_str()),
            "writing " + path);
      std::cout << "wrote " << path << "\n";
    }
  }
}

// Shared loading helpers ------------------------------------------------

void load_namelist(const std::string& path, NameList& out,
                   const std::string& what) {
  check(febias_namelist_load(path.c_str(), out.out()), "loading " + what);
}

void load_schema(const std::string& schema_file, NameList& groups, Schema& out) {
  load_namelist(schema_file, groups, "schema " + schema_file);
  std::string attribute = path_stem(schema_file);
  check(febias_schema_create(attribute.c_str(), groups.get(), out.out()),
        "building schema '" + attribute + "'");
}

std::vector<Findings> load_findings_list(const std::vector<std::string>& paths) {
  std::vector<Findings> out(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    check(febias_findings_load_json(paths[i].c_str(), out[i].out()),
          "loading findings " + paths[i]);
  }
  return out;
}

std::vector<const febias_findings*> raw_pointers(const std::vector<Findings>& v) {
  std::vector<const febias_findings*> out;
  for (const auto& h : v) out.push_back(h.get());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-level demographic bias evaluation for classifier "
               "embeddings and prediction logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("febias ") + febias_version());

  // ---- bias-dia -------------------------------------------------------
  auto* dia = app.add_subcommand(
      "bias-dia", "Differential-association bias suite over embeddings");
  std::string dia_test, dia_probe, dia_expr, dia_schema, dia_exclude;
  std::string dia_out = ".", dia_formats = "json,csv";
  StatOptions dia_stats;
  dia->add_option("--test-embeddings", dia_test,
                  "Embeddings of the labeled test set (binary or CSV; must "
                  "carry an 'expression' label)")
      ->required();
  dia->add_option("--probe-embeddings", dia_probe,
                  "Probe-dataset embeddings labeled by attribute group")
      ->required();
  dia->add_option("--expressions", dia_expr,
                  "Expression vocabulary file (one name per line)")
      ->required();
  dia->add_option("--attribute", dia_schema,
                  "Attribute schema file (one group per line; attribute name "
                  "is the file stem; order breaks argmax ties)")
      ->required();
  dia_stats.add_flags(dia);
  dia->add_option("--exclude", dia_exclude,
                  "Id-exclusion file applied to both embedding sets");
  dia->add_option("--out-dir", dia_out, "Output directory")
      ->capture_default_str();
  dia->add_option("--format", dia_formats, "Comma-separated output formats")
      ->capture_default_str();

  // ---- bias-dip -------------------------------------------------------
  auto* dip = app.add_subcommand(
      "bias-dip", "Performance-disparity (DEO) bias suite over a prediction log");
  std::string dip_preds, dip_expr, dip_schema, dip_exclude;
  std::string dip_out = ".", dip_formats = "json,csv";
  unsigned dip_min_stratum = 1;
  StatOptions dip_stats;
  dip->add_option("--predictions", dip_preds,
                  "Prediction CSV (id,true,pred[,<attribute columns>])")
      ->required();
  dip->add_option("--expressions", dip_expr, "Expression vocabulary file")
      ->required();
  dip->add_option("--attribute", dip_schema, "Attribute schema file")->required();
  dip_stats.add_flags(dip);
  auto* min_stratum_opt = dip->add_option(
      "--min-stratum-size", dip_min_stratum,
      "Drop strata smaller than this and record the drop (when omitted, an "
      "empty stratum is a hard error)");
  dip->add_option("--exclude", dip_exclude, "Id-exclusion file");
  dip->add_option("--out-dir", dip_out, "Output directory")->capture_default_str();
  dip->add_option("--format", dip_formats, "Comma-separated output formats")
      ->capture_default_str();

  // ---- compare ----------------------------------------------------------
  auto* cmp = app.add_subcommand(
      "compare", "Per-expression L1 agreement of findings against ground truth");
  std::string cmp_method, cmp_truth, cmp_out = ".";
  cmp->add_option("--method", cmp_method, "Findings JSON produced by a method")
      ->required();
  cmp->add_option("--truth", cmp_truth, "Ground-truth findings JSON")->required();
  cmp->add_option("--out-dir", cmp_out, "Output directory")->capture_default_str();

  // ---- avgbias ----------------------------------------------------------
  auto* avg = app.add_subcommand(
      "avgbias", "Aggregate AvgBias over findings files (or per named run)");
  std::vector<std::string> avg_findings, avg_truth, avg_runs;
  std::string avg_out = ".";
  avg->add_option("--findings", avg_findings,
                  "Findings JSON files (one per attribute)");
  avg->add_option("--truth", avg_truth,
                  "Ground-truth findings files (enables NaN exclusion)");
  avg->add_option("--run", avg_runs,
                  "Named run as name=findings.json[,findings.json...]; "
                  "repeat for a multi-run table");
  avg->add_option("--out-dir", avg_out, "Output directory")->capture_default_str();

  // ---- alpha-sweep --------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "alpha-sweep", "AvgBias as the significance threshold varies");
  std::vector<std::string> sweep_findings, sweep_truth;
  std::string sweep_out = ".", sweep_range = "0.01:0.10:0.01";
  sweep->add_option("--findings", sweep_findings, "Findings JSON files")
      ->required();
  sweep->add_option("--truth", sweep_truth, "Ground-truth findings files");
  sweep->add_option("--alphas", sweep_range, "Alpha grid as start:stop:step")
      ->capture_default_str();
  sweep->add_option("--out-dir", sweep_out, "Output directory")
      ->capture_default_str();

  // ---- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic scenario with controllable planted bias");
  febias_synth_config synth_cfg;
  febias_synth_config_defaults(&synth_cfg);
  std::string synth_out;
  bool synth_null = false;
  std::uint64_t synth_seed = 0;
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Generation seed")->required();
  synth->add_option("--dim", synth_cfg.dim, "Embedding dimension")
      ->capture_default_str();
  synth->add_option("--num-expressions", synth_cfg.n_expressions,
                    "Number of expression classes")
      ->capture_default_str();
  synth->add_option("--num-groups", synth_cfg.n_groups,
                    "Number of attribute groups")
      ->capture_default_str();
  synth->add_option("--test-per-expression", synth_cfg.test_per_expression,
                    "Test embeddings per expression")
      ->capture_default_str();
  synth->add_option("--probe-per-group", synth_cfg.probe_per_group,
                    "Probe embeddings per group")
      ->capture_default_str();
  synth->add_option("--predictions-per-cell", synth_cfg.predictions_per_cell,
                    "Prediction rows per (expression, group) cell")
      ->capture_default_str();
  synth->add_option("--tilt", synth_cfg.tilt,
                    "Planted feature-space bias strength")
      ->capture_default_str();
  synth->add_option("--noise-scale", synth_cfg.noise_scale,
                    "Isotropic noise scale")
      ->capture_default_str();
  synth->add_option("--base-accuracy", synth_cfg.base_accuracy,
                    "Correctness probability of every cell")
      ->capture_default_str();
  synth->add_option("--accuracy-boost", synth_cfg.accuracy_boost,
                    "Extra correctness probability for the tilted cell")
      ->capture_default_str();
  synth->add_option("--tilted-group", synth_cfg.tilted_group,
                    "Index of the group that leans toward the target expression")
      ->capture_default_str();
  synth->add_option("--target-expression", synth_cfg.target_expression,
                    "Index of the leaned-toward expression")
      ->capture_default_str();
  synth->add_flag("--null", synth_null,
                  "Null scenario: all groups share one distribution");

  // ---- report ------------------------------------------------------------
  auto* rep = app.add_subcommand(
      "report", "Render findings as a markdown report");
  std::vector<std::string> rep_findings;
  std::string rep_out = ".";
  rep->add_option("--findings", rep_findings,
                  "Findings JSON files (one per attribute)")
      ->required();
  rep->add_option("--out-dir", rep_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  // ---- bias-dia body ----------------------------------------------------
  if (dia->parsed()) {
    NameList expressions;
    load_namelist(dia_expr, expressions, "expressions " + dia_expr);
    NameList groups;
    Schema schema;
    load_schema(dia_schema, groups, schema);

    Embeddings test_set;
    check(febias_embeddings_load(dia_test.c_str(), FEBIAS_FORMAT_AUTO,
                                 test_set.out()),
          "loading " + dia_test);
    Embeddings probe_set;
    check(febias_embeddings_load(dia_probe.c_str(), FEBIAS_FORMAT_AUTO,
                                 probe_set.out()),
          "loading " + dia_probe);
    if (!dia_exclude.empty()) {
      size_t removed = 0;
      check(febias_embeddings_exclude(test_set.get(), dia_exclude.c_str(),
                                      &removed),
            "applying exclusions to " + dia_test);
      check(febias_embeddings_exclude(probe_set.get(), dia_exclude.c_str(),
                                      &removed),
            "applying exclusions to " + dia_probe);
    }

    Manifest manifest;
    manifest.command = "bias-dia";
    manifest.config = dia_stats.to_json();
    manifest.config["attribute"] = path_stem(dia_schema);
    manifest.config["groups"] = names_json(groups.get());
    manifest.config["expressions"] = names_json(expressions.get());
    manifest.inputs = {{"test-embeddings", dia_test},
                       {"probe-embeddings", dia_probe},
                       {"expressions", dia_expr},
                       {"attribute-schema", dia_schema}};
    if (!dia_exclude.empty()) manifest.inputs.push_back({"exclusions", dia_exclude});
    manifest.finalize(dia_out);

    auto cfg = dia_stats.to_config();
    Findings findings;
    check(febias_run_dia(test_set.get(), probe_set.get(), expressions.get(),
                         schema.get(), &cfg, findings.out()),
          "running the DiA suite");
    write_findings(findings, manifest, dia_out,
                   "findings_dia_" + path_stem(dia_schema),
                   parse_formats(dia_formats));
    return 0;
  }

  // ---- bias-dip body ----------------------------------------------------
  if (dip->parsed()) {
    NameList expressions;
    load_namelist(dip_expr, expressions, "expressions " + dip_expr);
    NameList groups;
    Schema schema;
    load_schema(dip_schema, groups, schema);

    Predictions preds;
    check(febias_predictions_load(dip_preds.c_str(), expressions.get(),
                                  preds.out()),
          "loading " + dip_preds);
    if (!dip_exclude.empty()) {
      size_t removed = 0;
      check(febias_predictions_exclude(preds.get(), dip_exclude.c_str(),
                                       &removed),
            "applying exclusions to " + dip_preds);
    }
    // Explicit flag selects the drop-and-record policy; otherwise empty
    // strata are hard errors.
    std::uint32_t min_stratum = min_stratum_opt->count() > 0 ? dip_min_stratum : 0;

    Manifest manifest;
    manifest.command = "bias-dip";
    manifest.config = dip_stats.to_json();
    manifest.config["min_stratum_size"] =
        min_stratum_opt->count() > 0 ? ordered_json(dip_min_stratum)
                                     : ordered_json("strict");
    manifest.config["attribute"] = path_stem(dip_schema);
    manifest.config["groups"] = names_json(groups.get());
    manifest.config["expressions"] = names_json(expressions.get());
    manifest.inputs = {{"predictions", dip_preds},
                       {"expressions", dip_expr},
                       {"attribute-schema", dip_schema}};
    if (!dip_exclude.empty()) manifest.inputs.push_back({"exclusions", dip_exclude});
    manifest.finalize(dip_out);

    auto cfg = dip_stats.to_config();
    Findings findings;
    check(febias_run_dip(preds.get(), expressions.get(), schema.get(), &cfg,
                         min_stratum, findings.out()),
          "running the DiP suite");
    write_findings(findings, manifest, dip_out,
                   "findings_dip_" + path_stem(dip_schema),
                   parse_formats(dip_formats));
    return 0;
  }

  // ---- compare body -------------------------------------------------------
  if (cmp->parsed()) {
    Findings method;
    check(febias_findings_load_json(cmp_method.c_str(), method.out()),
          "loading " + cmp_method);
    Findings truth;
    check(febias_findings_load_json(cmp_truth.c_str(), truth.out()),
          "loading " + cmp_truth);

    Manifest manifest;
    manifest.command = "compare";
    manifest.inputs = {{"method", cmp_method}, {"truth", cmp_truth}};
    manifest.finalize(cmp_out);

    auto path = (fs::path(cmp_out) / "compare.csv").string();
    check(febias_compare_write_csv(method.get(), truth.get(), path.c_str(),
                                   manifest.digest.c_str()),
          "writing " + path);
    std::cout << "wrote " << path << "\n";
    return 0;
  }

  // ---- avgbias body ---------------------------------------------------------
  if (avg->parsed()) {
    if (avg_runs.empty() && avg_findings.empty()) {
      std::cerr << "febias: avgbias needs --findings or --run\n";
      return kExitValidation;
    }
    Manifest manifest;
    manifest.command = "avgbias";

    if (!avg_runs.empty()) {
      // multi-run table
      std::vector<std::string> run_names;
      std::vector<std::vector<Findings>> run_files;
      std::vector<Findings> merged;
      for (const auto& spec : avg_runs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
          std::cerr << "febias: --run expects name=file[,file...]\n";
          return kExitValidation;
        }
        run_names.push_back(spec.substr(0, eq));
        std::vector<std::string> paths;
        std::string rest = spec.substr(eq + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
          auto comma = rest.find(',', start);
          paths.push_back(rest.substr(
              start, comma == std::string::npos ? std::string::npos
                                                : comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        for (const auto& p : paths) {
          manifest.inputs.push_back({"run:" + run_names.back(), p});
        }
        run_files.push_back(load_findings_list(paths));
      }
      manifest.finalize(avg_out);

      // Merge each run's findings into a single handle by concatenating
      // through JSON would be heavyweight; instead require one file per run.
      std::vector<const febias_findings*> run_ptrs;
      for (auto& files : run_files) {
        if (files.size() != 1) {
          std::cerr << "febias: each --run currently takes exactly one "
                       "findings file per run\n";
          return kExitValidation;
        }
        run_ptrs.push_back(files[0].get());
      }
      std::vector<const char*> names;
      for (const auto& n : run_names) names.push_back(n.c_str());
      auto path = (fs::path(avg_out) / "runs.csv").string();
      check(febias_multi_run_write_csv(names.data(), run_ptrs.data(),
                                       run_ptrs.size(), path.c_str(),
                                       manifest.digest.c_str()),
            "writing " + path);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    for (const auto& p : avg_findings) manifest.inputs.push_back({"findings", p});
    for (const auto& p : avg_truth) manifest.inputs.push_back({"truth", p});
    manifest.finalize(avg_out);

    auto files = load_findings_list(avg_findings);
    auto ptrs = raw_pointers(files);
    std::vector<Findings> truth_files = load_findings_list(avg_truth);
    // Ground truth findings files concatenate into one set for exclusion
    // marking; the C API takes a single handle, so merge via JSON when
    // several are given.
    Findings merged_truth;
    if (truth_files.size() == 1) {
      merged_truth.ptr = truth_files[0].ptr;
      truth_files[0].ptr = nullptr;
    } else if (truth_files.size() > 1) {
      std::cerr << "febias: pass a single --truth file per attribute set "
                   "(concatenate findings first)\n";
      return kExitValidation;
    }

    double value = 0.0;
    uint64_t included = 0, excluded = 0;
    check(febias_avg_bias(ptrs.data(), ptrs.size(), merged_truth.get(), &value,
                          &included, &excluded),
          "computing AvgBias");

    ordered_json out;
    out["manifest"] = manifest.digest;
    out["avg_bias"] = value;
    out["avg_bias_percent"] = value * 100.0;
    out["included_entries"] = included;
    out["excluded_nan"] = excluded;
    auto path = (fs::path(avg_out) / "avgbias.json").string();
    std::ofstream f(path, std::ios::binary);
    f << out.dump(2) << "\n";
    std::printf("AvgBias = %.4f%% over %llu entries (%llu excluded as NaN)\n",
                value * 100.0, static_cast<unsigned long long>(included),
                static_cast<unsigned long long>(excluded));
    std::cout << "wrote " << path << "\n";
    return 0;
  }

  // ---- alpha-sweep body -------------------------------------------------------
  if (sweep->parsed()) {
    double start = 0.01, stop = 0.10, step = 0.01;
    if (std::sscanf(sweep_range.c_str(), "%lf:%lf:%lf", &start, &stop, &step) !=
            3 ||
        step <= 0.0 || start <= 0.0 || stop < start) {
      std::cerr << "febias: --alphas expects start:stop:step\n";
      return kExitValidation;
    }
    std::vector<double> alphas;
    for (int i = 0;; ++i) {
      // snap accumulated grid points to 9 decimals so 0.06 prints as 0.06
      double a = std::round((start + step * i) * 1e9) / 1e9;
      if (a > stop + 1e-12) break;
      alphas.push_back(a);
    }

    Manifest manifest;
    manifest.command = "alpha-sweep";
    for (const auto& p : sweep_findings) manifest.inputs.push_back({"findings", p});
    for (const auto& p : sweep_truth) manifest.inputs.push_back({"truth", p});
    manifest.config["alphas"] = alphas;
    manifest.finalize(sweep_out);

    auto files = load_findings_list(sweep_findings);
    auto ptrs = raw_pointers(files);
    Findings truth;
    if (sweep_truth.size() == 1) {
      check(febias_findings_load_json(sweep_truth[0].c_str(), truth.out()),
            "loading " + sweep_truth[0]);
    } else if (sweep_truth.size() > 1) {
      std::cerr << "febias: pass a single --truth file\n";
      return kExitValidation;
    }

    auto path = (fs::path(sweep_out) / "alpha_sweep.csv").string();
    check(febias_alpha_sweep_write_csv(ptrs.data(), ptrs.size(), truth.get(),
                                       alphas.data(), alphas.size(),
                                       path.c_str(), manifest.digest.c_str()),
          "writing " + path);
    std::cout << "wrote " << path << "\n";
    return 0;
  }

  // ---- synth body ---------------------------------------------------------
  if (synth->parsed()) {
    synth_cfg.seed = synth_seed;
    synth_cfg.null_scenario = synth_null ? 1 : 0;

    Manifest manifest;
    manifest.command = "synth";
    manifest.config["dim"] = synth_cfg.dim;
    manifest.config["num_expressions"] = synth_cfg.n_expressions;
    manifest.config["num_groups"] = synth_cfg.n_groups;
    manifest.config["test_per_expression"] = synth_cfg.test_per_expression;
    manifest.config["probe_per_group"] = synth_cfg.probe_per_group;
    manifest.config["predictions_per_cell"] = synth_cfg.predictions_per_cell;
    manifest.config["tilt"] = synth_cfg.tilt;
    manifest.config["noise_scale"] = synth_cfg.noise_scale;
    manifest.config["base_accuracy"] = synth_cfg.base_accuracy;
    manifest.config["accuracy_boost"] = synth_cfg.accuracy_boost;
    manifest.config["tilted_group"] = synth_cfg.tilted_group;
    manifest.config["target_expression"] = synth_cfg.target_expression;
    manifest.config["seed"] = synth_cfg.seed;
    manifest.config["null_scenario"] = synth_cfg.null_scenario != 0;

    check(febias_synth_generate(&synth_cfg, synth_out.c_str()),
          "generating scenario");
    manifest.finalize(synth_out);
    std::cout << "wrote scenario files into " << synth_out << "\n";
    return 0;
  }

  // ---- report body ----------------------------------------------------------
  if (rep->parsed()) {
    Manifest manifest;
    manifest.command = "report";
    for (const auto& p : rep_findings) manifest.inputs.push_back({"findings", p});
    manifest.finalize(rep_out);

    auto files = load_findings_list(rep_findings);
    auto ptrs = raw_pointers(files);
    auto path = (fs::path(rep_out) / "report.md").string();
    check(febias_report_write_markdown(ptrs.data(), ptrs.size(), path.c_str()),
          "writing " + path);
    std::cout << "wrote " << path << "\n";
    return 0;
  }

  return 0;
}
