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

#include "febias.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "febias/dataset.hpp"
#include "febias/dataset_io.hpp"
#include "febias/error.hpp"
#include "febias/eval_compare.hpp"
#include "febias/report.hpp"
#include "febias/serialize.hpp"
#include "febias/sha256.hpp"
#include "febias/stat_module.hpp"
#include "febias/synth.hpp"
#include "febias/text.hpp"
#include "febias/version.hpp"

struct febias_embeddings {
  febias::EmbeddingSet set;
  std::size_t excluded = 0;
};
struct febias_predictions {
  febias::PredictionSet set;
  std::size_t excluded = 0;
};
struct febias_namelist {
  std::vector<std::string> names;
};
struct febias_schema {
  febias::AttributeSchema schema;
};
struct febias_findings {
  febias::FindingsFile file;
};

namespace {

thread_local std::string g_last_error;

febias_status status_of(febias::ErrorKind kind) {
  switch (kind) {
    case febias::ErrorKind::io:
      return FEBIAS_ERROR_IO;
    case febias::ErrorKind::parse:
      return FEBIAS_ERROR_PARSE;
    case febias::ErrorKind::validation:
      return FEBIAS_ERROR_VALIDATION;
    case febias::ErrorKind::stat:
      return FEBIAS_ERROR_STAT;
    case febias::ErrorKind::invalid_argument:
      return FEBIAS_ERROR_INVALID_ARGUMENT;
  }
  return FEBIAS_ERROR_INTERNAL;
}

template <class Fn>
febias_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FEBIAS_OK;
  } catch (const febias::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FEBIAS_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FEBIAS_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) febias::throw_invalid(message);
}

febias::PermutationConfig convert(const febias_perm_config* cfg) {
  require(cfg != nullptr, "null configuration");
  febias::PermutationConfig out;
  out.permutations = cfg->permutations;
  out.alpha = cfg->alpha;
  out.seed = cfg->seed;
  out.exact_threshold = cfg->exact_threshold;
  require(cfg->estimator == 0 || cfg->estimator == 1, "unknown estimator");
  out.estimator =
      cfg->estimator == 0 ? febias::Estimator::paper : febias::Estimator::plus_one;
  return out;
}

unsigned effective_threads(int threads) {
  if (threads > 0) return static_cast<unsigned>(threads);
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

febias::EmbeddingFormat resolve_format(const char* path, int format) {
  switch (format) {
    case FEBIAS_FORMAT_AUTO:
      return febias::detect_embedding_format(path);
    case FEBIAS_FORMAT_BINARY:
      return febias::EmbeddingFormat::binary;
    case FEBIAS_FORMAT_CSV:
      return febias::EmbeddingFormat::csv;
    default:
      febias::throw_invalid("unknown embedding format code");
  }
}

std::vector<febias::BiasFinding> flatten(const febias_findings* const* sets,
                                         std::size_t count) {
  require(sets != nullptr && count > 0, "need at least one findings set");
  std::vector<febias::BiasFinding> all;
  for (std::size_t i = 0; i < count; ++i) {
    require(sets[i] != nullptr, "null findings handle");
    all.insert(all.end(), sets[i]->file.findings.begin(),
               sets[i]->file.findings.end());
  }
  return all;
}

void write_hex(char* hex_out, const std::string& hex) {
  std::memcpy(hex_out, hex.c_str(), hex.size() + 1);
}

}  // namespace

extern "C" {

const char* febias_version(void) { return febias::kVersion; }

const char* febias_last_error(void) { return g_last_error.c_str(); }

void febias_perm_config_defaults(febias_perm_config* cfg) {
  if (cfg == nullptr) return;
  cfg->permutations = 10000;
  cfg->alpha = 0.05;
  cfg->seed = 0;
  cfg->exact_threshold = 100000;
  cfg->estimator = 0;
  cfg->threads = 0;
}

febias_status febias_namelist_load(const char* path, febias_namelist** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto list = std::make_unique<febias_namelist>();
    list->names = febias::load_name_list(path);
    *out = list.release();
  });
}

febias_status febias_namelist_create(const char* const* names, size_t count,
                                     febias_namelist** out) {
  return guarded([&] {
    require(names != nullptr && out != nullptr && count > 0,
            "need at least one name");
    auto list = std::make_unique<febias_namelist>();
    for (size_t i = 0; i < count; ++i) {
      require(names[i] != nullptr, "null name");
      if (!febias::valid_token(names[i])) {
        febias::throw_validation("invalid name '" + std::string(names[i]) + "'");
      }
      list->names.emplace_back(names[i]);
    }
    *out = list.release();
  });
}

size_t febias_namelist_count(const febias_namelist* list) {
  return list == nullptr ? 0 : list->names.size();
}

const char* febias_namelist_name(const febias_namelist* list, size_t index) {
  if (list == nullptr || index >= list->names.size()) return nullptr;
  return list->names[index].c_str();
}

void febias_namelist_free(febias_namelist* list) { delete list; }

febias_status febias_schema_create(const char* attribute_name,
                                   const febias_namelist* groups,
                                   febias_schema** out) {
  return guarded([&] {
    require(attribute_name != nullptr && groups != nullptr && out != nullptr,
            "null argument");
    auto schema = std::make_unique<febias_schema>();
    schema->schema =
        febias::AttributeSchema::make(attribute_name, groups->names);
    *out = schema.release();
  });
}

void febias_schema_free(febias_schema* schema) { delete schema; }

febias_status febias_embeddings_load(const char* path, int format,
                                     febias_embeddings** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<febias_embeddings>();
    handle->set = febias::load_embeddings(path, resolve_format(path, format));
    *out = handle.release();
  });
}

febias_status febias_embeddings_write(const febias_embeddings* set,
                                      const char* path, int format) {
  return guarded([&] {
    require(set != nullptr && path != nullptr, "null argument");
    require(format != FEBIAS_FORMAT_AUTO,
            "writing requires an explicit format");
    febias::write_embeddings(set->set, path,
                             format == FEBIAS_FORMAT_BINARY
                                 ? febias::EmbeddingFormat::binary
                                 : febias::EmbeddingFormat::csv);
  });
}

febias_status febias_embeddings_exclude(febias_embeddings* set,
                                        const char* id_list_path,
                                        size_t* removed) {
  return guarded([&] {
    require(set != nullptr && id_list_path != nullptr, "null argument");
    auto ids = febias::load_id_exclusions(id_list_path);
    std::size_t n = 0;
    set->set = febias::exclude_ids(set->set, ids, &n);
    set->excluded += n;
    if (removed != nullptr) *removed = n;
  });
}

size_t febias_embeddings_count(const febias_embeddings* set) {
  return set == nullptr ? 0 : set->set.size();
}

size_t febias_embeddings_dim(const febias_embeddings* set) {
  return set == nullptr ? 0 : set->set.dim;
}

void febias_embeddings_free(febias_embeddings* set) { delete set; }

febias_status febias_predictions_load(const char* path,
                                      const febias_namelist* class_vocabulary,
                                      febias_predictions** out) {
  return guarded([&] {
    require(path != nullptr && class_vocabulary != nullptr && out != nullptr,
            "null argument");
    auto handle = std::make_unique<febias_predictions>();
    handle->set = febias::load_predictions(path, class_vocabulary->names);
    *out = handle.release();
  });
}

febias_status febias_predictions_exclude(febias_predictions* set,
                                         const char* id_list_path,
                                         size_t* removed) {
  return guarded([&] {
    require(set != nullptr && id_list_path != nullptr, "null argument");
    auto ids = febias::load_id_exclusions(id_list_path);
    std::size_t n = 0;
    set->set = febias::exclude_ids(set->set, ids, &n);
    set->excluded += n;
    if (removed != nullptr) *removed = n;
  });
}

size_t febias_predictions_count(const febias_predictions* set) {
  return set == nullptr ? 0 : set->set.size();
}

void febias_predictions_free(febias_predictions* set) { delete set; }

febias_status febias_run_dia(const febias_embeddings* test_set,
                             const febias_embeddings* probe_set,
                             const febias_namelist* expressions,
                             const febias_schema* schema,
                             const febias_perm_config* cfg,
                             febias_findings** out) {
  return guarded([&] {
    require(test_set != nullptr && probe_set != nullptr &&
                expressions != nullptr && schema != nullptr && out != nullptr,
            "null argument");
    auto config = convert(cfg);
    febias::SuiteStats stats;
    stats.excluded_by_id_list = test_set->excluded + probe_set->excluded;
    auto findings = febias::run_dia_suite(
        test_set->set, probe_set->set, expressions->names, schema->schema,
        config, effective_threads(cfg->threads), &stats);
    auto handle = std::make_unique<febias_findings>();
    handle->file.meta = febias::make_meta(config, schema->schema,
                                          expressions->names,
                                          febias::FindingSource::dia, stats);
    handle->file.findings = std::move(findings);
    *out = handle.release();
  });
}

febias_status febias_run_dip(const febias_predictions* predictions,
                             const febias_namelist* expressions,
                             const febias_schema* schema,
                             const febias_perm_config* cfg,
                             uint32_t min_stratum_size, febias_findings** out) {
  return guarded([&] {
    require(predictions != nullptr && expressions != nullptr &&
                schema != nullptr && out != nullptr,
            "null argument");
    auto config = convert(cfg);
    febias::SuiteStats stats;
    stats.excluded_by_id_list = predictions->excluded;
    auto findings = febias::run_dip_suite(
        predictions->set, expressions->names, schema->schema, config,
        min_stratum_size, effective_threads(cfg->threads), &stats);
    auto handle = std::make_unique<febias_findings>();
    handle->file.meta = febias::make_meta(config, schema->schema,
                                          expressions->names,
                                          febias::FindingSource::dip, stats);
    handle->file.findings = std::move(findings);
    *out = handle.release();
  });
}

febias_status febias_findings_load_json(const char* path,
                                        febias_findings** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<febias_findings>();
    handle->file = febias::load_findings_json(path);
    *out = handle.release();
  });
}

febias_status febias_findings_write_json(const febias_findings* f,
                                         const char* path,
                                         const char* manifest_digest) {
  return guarded([&] {
    require(f != nullptr && path != nullptr, "null argument");
    febias::FindingsFile copy = f->file;
    if (manifest_digest != nullptr) copy.meta.manifest_digest = manifest_digest;
    febias::write_findings_json(copy, path);
  });
}

febias_status febias_findings_write_csv(const febias_findings* f,
                                        const char* path,
                                        const char* manifest_digest) {
  return guarded([&] {
    require(f != nullptr && path != nullptr, "null argument");
    febias::FindingsFile copy = f->file;
    if (manifest_digest != nullptr) copy.meta.manifest_digest = manifest_digest;
    febias::write_findings_csv(copy, path);
  });
}

size_t febias_findings_count(const febias_findings* f) {
  return f == nullptr ? 0 : f->file.findings.size();
}

size_t febias_findings_tests_run(const febias_findings* f) {
  return f == nullptr ? 0 : f->file.meta.stats.tests_run;
}

void febias_findings_free(febias_findings* f) { delete f; }

febias_status febias_compare_write_csv(const febias_findings* method,
                                       const febias_findings* truth,
                                       const char* path,
                                       const char* manifest_digest) {
  return guarded([&] {
    require(method != nullptr && truth != nullptr && path != nullptr,
            "null argument");
    std::vector<febias::ComparisonRow> rows;
    for (const auto& mf : method->file.findings) {
      const febias::BiasFinding* tf = nullptr;
      for (const auto& cand : truth->file.findings) {
        if (cand.expression == mf.expression && cand.attribute == mf.attribute) {
          tf = &cand;
        }
      }
      if (tf == nullptr) {
        febias::throw_validation("no ground-truth finding for (" +
                                 mf.expression + ", " + mf.attribute + ")");
      }
      rows.push_back(febias::l1_compare(mf, *tf));
    }
    febias::write_text_file(
        path, febias::comparison_to_csv(
                  rows, manifest_digest == nullptr ? "" : manifest_digest));
  });
}

febias_status febias_avg_bias(const febias_findings* const* sets, size_t count,
                              const febias_findings* truth_or_null,
                              double* value, uint64_t* included,
                              uint64_t* excluded) {
  return guarded([&] {
    require(value != nullptr, "null output");
    auto all = flatten(sets, count);
    double alpha = sets[0]->file.meta.alpha;
    const std::vector<febias::BiasFinding>* truth = nullptr;
    if (truth_or_null != nullptr) truth = &truth_or_null->file.findings;
    auto r = febias::avg_bias(all, alpha, truth);
    *value = r.value;
    if (included != nullptr) *included = r.included_entries;
    if (excluded != nullptr) *excluded = r.excluded_nan;
  });
}

febias_status febias_alpha_sweep_write_csv(const febias_findings* const* sets,
                                           size_t count,
                                           const febias_findings* truth_or_null,
                                           const double* alphas,
                                           size_t alpha_count, const char* path,
                                           const char* manifest_digest) {
  return guarded([&] {
    require(path != nullptr, "null path");
    auto all = flatten(sets, count);
    std::vector<double> grid;
    if (alphas == nullptr || alpha_count == 0) {
      grid = febias::default_alpha_grid();
    } else {
      grid.assign(alphas, alphas + alpha_count);
    }
    const std::vector<febias::BiasFinding>* truth = nullptr;
    if (truth_or_null != nullptr) truth = &truth_or_null->file.findings;
    auto sweep = febias::alpha_sweep(all, grid, truth);
    febias::write_text_file(
        path, febias::alpha_sweep_to_csv(
                  sweep, manifest_digest == nullptr ? "" : manifest_digest));
  });
}

febias_status febias_multi_run_write_csv(const char* const* run_names,
                                         const febias_findings* const* runs,
                                         size_t count, const char* path,
                                         const char* manifest_digest) {
  return guarded([&] {
    require(run_names != nullptr && runs != nullptr && count > 0 &&
                path != nullptr,
            "null argument");
    std::vector<std::pair<std::string, std::vector<febias::BiasFinding>>> named;
    for (size_t i = 0; i < count; ++i) {
      require(run_names[i] != nullptr && runs[i] != nullptr, "null run");
      named.emplace_back(run_names[i], runs[i]->file.findings);
    }
    auto rows = febias::multi_run_compare(named, runs[0]->file.meta.alpha);
    febias::write_text_file(
        path, febias::runs_to_csv(
                  rows, manifest_digest == nullptr ? "" : manifest_digest));
  });
}

febias_status febias_report_write_markdown(const febias_findings* const* sets,
                                           size_t count, const char* path) {
  return guarded([&] {
    require(sets != nullptr && count > 0 && path != nullptr, "null argument");
    std::vector<febias::FindingsFile> files;
    for (size_t i = 0; i < count; ++i) {
      require(sets[i] != nullptr, "null findings handle");
      files.push_back(sets[i]->file);
    }
    febias::write_text_file(path, febias::render_report(files));
  });
}

void febias_synth_config_defaults(febias_synth_config* cfg) {
  if (cfg == nullptr) return;
  cfg->dim = 32;
  cfg->n_expressions = 7;
  cfg->n_groups = 2;
  cfg->test_per_expression = 200;
  cfg->probe_per_group = 200;
  cfg->predictions_per_cell = 200;
  cfg->tilt = 0.0;
  cfg->noise_scale = 0.5;
  cfg->base_accuracy = 0.75;
  cfg->accuracy_boost = 0.0;
  cfg->tilted_group = 0;
  cfg->target_expression = 0;
  cfg->seed = 0;
  cfg->null_scenario = 0;
}

febias_status febias_synth_generate(const febias_synth_config* cfg,
                                    const char* out_dir) {
  return guarded([&] {
    require(cfg != nullptr && out_dir != nullptr, "null argument");
    std::filesystem::create_directories(out_dir);
    auto names = [](const char* prefix, std::size_t n) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
      }
      return out;
    };
    febias::SynthScenario scenario;
    std::vector<std::string> expressions = names("e", cfg->n_expressions);
    std::vector<std::string> groups = names("g", cfg->n_groups);
    if (cfg->null_scenario != 0) {
      febias::NullSpec spec;
      spec.dim = cfg->dim;
      spec.expressions = expressions;
      spec.groups = groups;
      spec.test_per_expression = cfg->test_per_expression;
      spec.probe_per_group = cfg->probe_per_group;
      spec.predictions_per_cell = cfg->predictions_per_cell;
      spec.noise_scale = cfg->noise_scale;
      spec.accuracy = cfg->base_accuracy;
      spec.seed = cfg->seed;
      scenario = febias::gen_null(spec);
    } else {
      febias::ScenarioSpec spec;
      spec.dim = cfg->dim;
      spec.expressions = expressions;
      spec.groups = groups;
      spec.tilt = cfg->tilt;
      spec.tilted_group = cfg->tilted_group;
      spec.target_expression = cfg->target_expression;
      spec.test_per_expression = cfg->test_per_expression;
      spec.probe_per_group = cfg->probe_per_group;
      spec.predictions_per_cell = cfg->predictions_per_cell;
      spec.noise_scale = cfg->noise_scale;
      spec.base_accuracy = cfg->base_accuracy;
      spec.accuracy_boost = cfg->accuracy_boost;
      spec.seed = cfg->seed;
      scenario = febias::gen_biased(spec);
    }
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    febias::write_embeddings(scenario.test, (dir / "test_embeddings.febe").string(),
                             febias::EmbeddingFormat::binary);
    febias::write_embeddings(scenario.probe,
                             (dir / "probe_embeddings.febe").string(),
                             febias::EmbeddingFormat::binary);
    febias::write_predictions(scenario.predictions,
                              (dir / "predictions.csv").string());
    std::string vocab;
    for (const auto& e : expressions) vocab += e + "\n";
    febias::write_text_file((dir / "expressions.txt").string(), vocab);
    std::string schema_text;
    for (const auto& g : groups) schema_text += g + "\n";
    febias::write_text_file((dir / "group.txt").string(), schema_text);
  });
}

febias_status febias_file_sha256(const char* path, char* hex_out) {
  return guarded([&] {
    require(path != nullptr && hex_out != nullptr, "null argument");
    write_hex(hex_out, febias::sha256_file_hex(path));
  });
}

febias_status febias_buffer_sha256(const void* data, size_t len,
                                   char* hex_out) {
  return guarded([&] {
    require((data != nullptr || len == 0) && hex_out != nullptr,
            "null argument");
    write_hex(hex_out, febias::sha256_hex(std::string_view(
                           static_cast<const char*>(data), len)));
  });
}

}  // extern "C"
