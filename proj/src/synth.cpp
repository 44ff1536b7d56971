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

#include "febias/synth.hpp"

#include <cmath>

#include "febias/association.hpp"
#include "febias/error.hpp"
#include "febias/rng.hpp"

namespace febias {

namespace {

std::vector<std::vector<double>> random_orthonormal_anchors(
    std::size_t count, std::size_t dim, PhiloxStream& rng) {
  if (count > dim) {
    throw_invalid("cannot orthonormalize " + std::to_string(count) +
                  " anchors in dimension " + std::to_string(dim) +
                  "; supply explicit anchors or raise dim");
  }
  std::vector<std::vector<double>> anchors;
  anchors.reserve(count);
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.next_gaussian();
    // Gram-Schmidt against the accepted anchors.
    for (const auto& prev : anchors) {
      double proj = dot(v, prev);
      for (std::size_t j = 0; j < dim; ++j) v[j] -= proj * prev[j];
    }
    double norm = std::sqrt(dot(v, v));
    if (norm < 1e-8) {
      throw_stat("anchor orthonormalization degenerated; retry with another seed");
    }
    for (double& x : v) x /= norm;
    anchors.push_back(std::move(v));
  }
  return anchors;
}

void check_explicit_anchors(const std::vector<std::vector<double>>& anchors,
                            std::size_t count, std::size_t dim,
                            const char* what) {
  if (anchors.size() != count) {
    throw_invalid(std::string(what) + " anchor count does not match");
  }
  for (const auto& a : anchors) {
    if (a.size() != dim) {
      throw_invalid(std::string(what) + " anchor dimension does not match");
    }
    double norm = std::sqrt(dot(a, a));
    if (std::abs(norm - 1.0) > 1e-6) {
      throw_invalid(std::string(what) + " anchors must be unit vectors");
    }
  }
}

std::vector<double> pairwise_cosines(
    const std::vector<std::vector<double>>& anchors) {
  std::vector<double> out;
  out.reserve(anchors.size() * anchors.size());
  for (const auto& a : anchors) {
    for (const auto& b : anchors) out.push_back(dot(a, b));
  }
  return out;
}

void append_sample(EmbeddingSet& set, const std::string& id,
                   const std::vector<double>& vec,
                   const std::vector<std::string>& label_values) {
  set.ids.push_back(id);
  set.values.insert(set.values.end(), vec.begin(), vec.end());
  for (std::size_t k = 0; k < label_values.size(); ++k) {
    set.labels[k].push_back(label_values[k]);
  }
}

std::vector<double> noisy_point(const std::vector<double>& anchor,
                                double noise_scale, PhiloxStream& rng) {
  std::vector<double> v(anchor.size());
  for (std::size_t j = 0; j < anchor.size(); ++j) {
    v[j] = anchor[j] + noise_scale * rng.next_gaussian();
  }
  return v;
}

struct GenInputs {
  std::size_t dim;
  const std::vector<std::string>& expressions;
  std::string attribute_name;
  const std::vector<std::string>& groups;
  std::size_t test_per_expression;
  std::size_t probe_per_group;
  std::size_t predictions_per_cell;
  double noise_scale;
  std::uint64_t seed;
};

void check_common(const GenInputs& in) {
  if (in.dim == 0) throw_invalid("dim must be positive");
  if (in.expressions.empty()) throw_invalid("need at least one expression");
  if (in.groups.size() < 2) throw_invalid("need at least two groups");
  if (in.test_per_expression == 0 || in.probe_per_group == 0 ||
      in.predictions_per_cell == 0) {
    throw_invalid("sample counts must be positive");
  }
  if (!(in.noise_scale > 0.0)) throw_invalid("noise_scale must be positive");
}

// Shared generation body; `group_anchor(g)` and `accuracy(e, g)` carry the
// scenario-specific structure, `group_lean(g)` the planted tilt.
template <class GroupAnchor, class GroupLean, class Accuracy>
SynthScenario generate(const GenInputs& in,
                       const std::vector<std::vector<double>>& expr_anchors,
                       GroupAnchor group_anchor, GroupLean group_lean,
                       Accuracy accuracy,
                       std::vector<double> anchor_cosines) {
  SynthScenario out;
  out.anchor_cosines = std::move(anchor_cosines);

  PhiloxStream rng(derive_stream_key(in.seed, "synth|samples"), 0);

  out.test.dim = in.dim;
  out.test.label_keys = {"expression"};
  out.test.labels.resize(1);
  for (std::size_t e = 0; e < in.expressions.size(); ++e) {
    for (std::size_t i = 0; i < in.test_per_expression; ++i) {
      auto v = noisy_point(expr_anchors[e], in.noise_scale, rng);
      append_sample(out.test, "t_" + in.expressions[e] + "_" + std::to_string(i),
                    v, {in.expressions[e]});
    }
  }

  out.probe.dim = in.dim;
  out.probe.label_keys = {in.attribute_name};
  out.probe.labels.resize(1);
  for (std::size_t g = 0; g < in.groups.size(); ++g) {
    std::vector<double> lean = group_lean(g);
    for (std::size_t i = 0; i < in.probe_per_group; ++i) {
      std::vector<double> v = noisy_point(group_anchor(g), in.noise_scale, rng);
      for (std::size_t j = 0; j < in.dim; ++j) v[j] += lean[j];
      append_sample(out.probe, "p_" + in.groups[g] + "_" + std::to_string(i), v,
                    {in.groups[g]});
    }
  }

  out.predictions.class_vocabulary = in.expressions;
  out.predictions.attribute_keys = {in.attribute_name};
  out.predictions.attribute_labels.resize(1);
  for (std::size_t e = 0; e < in.expressions.size(); ++e) {
    for (std::size_t g = 0; g < in.groups.size(); ++g) {
      double acc = accuracy(e, g);
      for (std::size_t i = 0; i < in.predictions_per_cell; ++i) {
        bool correct = rng.next_unit() < acc;
        std::uint32_t pred = static_cast<std::uint32_t>(e);
        if (!correct && in.expressions.size() > 1) {
          // uniform over the other classes
          std::uint32_t other =
              rng.below(static_cast<std::uint32_t>(in.expressions.size() - 1));
          pred = other >= e ? other + 1 : other;
        }
        out.predictions.ids.push_back("q_" + in.expressions[e] + "_" +
                                      in.groups[g] + "_" + std::to_string(i));
        out.predictions.true_class.push_back(static_cast<std::uint32_t>(e));
        out.predictions.predicted_class.push_back(pred);
        out.predictions.attribute_labels[0].push_back(in.groups[g]);
      }
    }
  }

  out.test.validate();
  out.probe.validate();
  return out;
}

}  // namespace

SynthScenario gen_biased(const ScenarioSpec& spec) {
  GenInputs in{spec.dim,
               spec.expressions,
               spec.attribute_name,
               spec.groups,
               spec.test_per_expression,
               spec.probe_per_group,
               spec.predictions_per_cell,
               spec.noise_scale,
               spec.seed};
  check_common(in);
  if (spec.tilt < 0.0) throw_invalid("tilt must be >= 0");
  if (spec.tilted_group >= spec.groups.size()) {
    throw_invalid("tilted_group out of range");
  }
  if (spec.target_expression >= spec.expressions.size()) {
    throw_invalid("target_expression out of range");
  }
  if (!(spec.base_accuracy >= 0.0 && spec.base_accuracy <= 1.0) ||
      !(spec.base_accuracy + spec.accuracy_boost >= 0.0 &&
        spec.base_accuracy + spec.accuracy_boost <= 1.0)) {
    throw_invalid("accuracies must stay within [0, 1]");
  }

  PhiloxStream anchor_rng(derive_stream_key(spec.seed, "synth|anchors"), 0);
  std::vector<std::vector<double>> expr_anchors;
  std::vector<std::vector<double>> grp_anchors;
  if (!spec.expression_anchors.empty() || !spec.group_anchors.empty()) {
    check_explicit_anchors(spec.expression_anchors, spec.expressions.size(),
                           spec.dim, "expression");
    check_explicit_anchors(spec.group_anchors, spec.groups.size(), spec.dim,
                           "group");
    expr_anchors = spec.expression_anchors;
    grp_anchors = spec.group_anchors;
  } else {
    auto all = random_orthonormal_anchors(
        spec.expressions.size() + spec.groups.size(), spec.dim, anchor_rng);
    expr_anchors.assign(all.begin(),
                        all.begin() + static_cast<std::ptrdiff_t>(spec.expressions.size()));
    grp_anchors.assign(all.begin() + static_cast<std::ptrdiff_t>(spec.expressions.size()),
                       all.end());
  }

  std::vector<std::vector<double>> combined = expr_anchors;
  combined.insert(combined.end(), grp_anchors.begin(), grp_anchors.end());

  std::vector<double> zero(spec.dim, 0.0);
  std::vector<double> tilt_vec(spec.dim, 0.0);
  for (std::size_t j = 0; j < spec.dim; ++j) {
    tilt_vec[j] = spec.tilt * expr_anchors[spec.target_expression][j];
  }

  return generate(
      in, expr_anchors,
      [&](std::size_t g) -> const std::vector<double>& { return grp_anchors[g]; },
      [&](std::size_t g) -> const std::vector<double>& {
        return g == spec.tilted_group ? tilt_vec : zero;
      },
      [&](std::size_t e, std::size_t g) {
        return e == spec.target_expression && g == spec.tilted_group
                   ? spec.base_accuracy + spec.accuracy_boost
                   : spec.base_accuracy;
      },
      pairwise_cosines(combined));
}

SynthScenario gen_null(const NullSpec& spec) {
  GenInputs in{spec.dim,
               spec.expressions,
               spec.attribute_name,
               spec.groups,
               spec.test_per_expression,
               spec.probe_per_group,
               spec.predictions_per_cell,
               spec.noise_scale,
               spec.seed};
  check_common(in);
  if (!(spec.accuracy >= 0.0 && spec.accuracy <= 1.0)) {
    throw_invalid("accuracy must lie in [0, 1]");
  }

  PhiloxStream anchor_rng(derive_stream_key(spec.seed, "synth|anchors"), 0);
  // One extra anchor: the shared distribution all probe groups draw from.
  auto all = random_orthonormal_anchors(spec.expressions.size() + 1, spec.dim,
                                        anchor_rng);
  std::vector<std::vector<double>> expr_anchors(
      all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.expressions.size()));
  const std::vector<double> shared = all.back();
  std::vector<double> zero(spec.dim, 0.0);

  return generate(
      in, expr_anchors,
      [&](std::size_t) -> const std::vector<double>& { return shared; },
      [&](std::size_t) -> const std::vector<double>& { return zero; },
      [&](std::size_t, std::size_t) { return spec.accuracy; },
      pairwise_cosines(all));
}

}  // namespace febias
