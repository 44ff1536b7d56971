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

#include "febias/error.hpp"
#include "febias/eval_compare.hpp"

using namespace febias;

namespace {

BiasEntry entry(const std::string& group, double observed, double p,
                double alpha = 0.05) {
  BiasEntry e;
  e.group = group;
  e.result.observed = observed;
  e.result.p = p;
  e.result.validated = validate_value(observed, p, alpha);
  e.result.method = TestMethod::exact;
  e.result.b_used = 100;
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

TEST_CASE("l1_compare: identity, worked example, reference mismatch") {
  auto truth = finding("anger", "gender", "M",
                       {entry("F", 0.10, 0.001), entry("X", 0.20, 0.001)});
  CHECK(l1_compare(truth, truth).l1 == 0.0);
  CHECK(l1_compare(truth, truth).reference_match);

  auto method = finding("anger", "gender", "M",
                        {entry("F", 0.12, 0.001), entry("X", 0.16, 0.001)});
  auto row = l1_compare(method, truth);
  CHECK(row.reference_match);
  CHECK(row.l1 == doctest::Approx(0.03).epsilon(1e-12));

  auto swapped = finding("anger", "gender", "F",
                         {entry("M", 0.12, 0.001), entry("X", 0.16, 0.001)});
  auto nan_row = l1_compare(swapped, truth);
  CHECK_FALSE(nan_row.reference_match);
  CHECK(std::isnan(nan_row.l1));
}

TEST_CASE("l1_compare is symmetric when references agree") {
  auto a = finding("e", "race", "W",
                   {entry("B", 0.30, 0.01), entry("A", 0.05, 0.5)});
  auto b = finding("e", "race", "W",
                   {entry("B", 0.10, 0.02), entry("A", 0.25, 0.001)});
  CHECK(l1_compare(a, b).l1 == doctest::Approx(l1_compare(b, a).l1));
}

TEST_CASE("l1_compare rejects mismatched identities and group sets") {
  auto a = finding("e", "race", "W", {entry("B", 0.1, 0.01)});
  auto c = finding("e2", "race", "W", {entry("B", 0.1, 0.01)});
  CHECK_THROWS_AS(l1_compare(a, c), Error);
  auto d = finding("e", "race", "W", {entry("A", 0.1, 0.01)});
  CHECK_THROWS_AS(l1_compare(a, d), Error);
}

TEST_CASE("l1 stays within [0,1] whenever defined") {
  auto truth = finding("e", "g", "r", {entry("x", 1.0, 0.001)});
  auto method = finding("e", "g", "r", {entry("x", 0.0, 0.9)});
  auto row = l1_compare(method, truth);
  CHECK(row.l1 >= 0.0);
  CHECK(row.l1 <= 1.0);
}

TEST_CASE("avg_bias: zeros, simple mean, mixed-n per-attribute weighting") {
  std::vector<BiasFinding> zeros{
      finding("e0", "gender", "F", {entry("M", 0.3, 0.9)}),
      finding("e1", "gender", "F", {entry("M", 0.2, 0.8)})};
  auto rz = avg_bias(zeros, 0.05);
  CHECK(rz.value == 0.0);
  CHECK(rz.included_entries == 2);
  CHECK(rz.excluded_nan == 0);

  std::vector<BiasFinding> simple{
      finding("e0", "gender", "F",
              {entry("M", 0.2, 0.001)}),
      finding("e1", "gender", "F",
              {entry("M", 0.4, 0.001)})};
  CHECK(avg_bias(simple, 0.05).value == doctest::Approx(0.3).epsilon(1e-12));

  // Two attributes with n=2 and n=4: each attribute is normalized by its
  // own (n-1)|E| before averaging across attributes.
  std::vector<BiasFinding> mixed{
      finding("e0", "gender", "F", {entry("M", 0.4, 0.001)}),
      finding("e0", "race", "W",
              {entry("B", 0.0, 0.9), entry("A", 0.0, 0.9),
               entry("I", 0.0, 0.9)})};
  // gender mean = 0.4; race mean = 0; AvgBias = (0.4 + 0)/2 = 0.2
  CHECK(avg_bias(mixed, 0.05).value == doctest::Approx(0.2).epsilon(1e-12));

  std::vector<BiasFinding> empty;
  CHECK_THROWS_AS(avg_bias(empty, 0.05), Error);
}

TEST_CASE("avg_bias excludes reference-mismatch entries and reports counts") {
  std::vector<BiasFinding> truth{
      finding("e0", "gender", "F", {entry("M", 0.2, 0.001)}),
      finding("e1", "gender", "M", {entry("F", 0.4, 0.001)})};
  std::vector<BiasFinding> method{
      finding("e0", "gender", "F", {entry("M", 0.3, 0.001)}),
      finding("e1", "gender", "F", {entry("M", 0.5, 0.001)})};  // wrong ref
  auto r = avg_bias(method, 0.05, &truth);
  CHECK(r.included_entries == 1);
  CHECK(r.excluded_nan == 1);
  CHECK(r.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("avg_bias is invariant to finding order") {
  std::vector<BiasFinding> a{
      finding("e0", "gender", "F", {entry("M", 0.2, 0.001)}),
      finding("e0", "race", "W", {entry("B", 0.6, 0.001), entry("A", 0.1, 0.9)}),
  };
  std::vector<BiasFinding> b{a[1], a[0]};
  CHECK(avg_bias(a, 0.05).value == avg_bias(b, 0.05).value);
}

TEST_CASE("alpha sweep: flat curves at the extremes") {
  std::vector<BiasFinding> always{
      finding("e0", "gender", "F", {entry("M", 0.25, 0.005)}),
      finding("e1", "gender", "F", {entry("M", 0.35, 0.005)})};
  auto sweep = alpha_sweep(always, default_alpha_grid());
  REQUIRE(sweep.alphas.size() == 10);
  CHECK(sweep.alphas.front() == doctest::Approx(0.01));
  CHECK(sweep.alphas.back() == doctest::Approx(0.10));
  for (const auto& r : sweep.curve) {
    CHECK(r.value == doctest::Approx(0.3).epsilon(1e-12));
  }

  std::vector<BiasFinding> never{
      finding("e0", "gender", "F", {entry("M", 0.25, 0.5)})};
  for (const auto& r : alpha_sweep(never, default_alpha_grid()).curve) {
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("alpha sweep: staircase steps exactly at the p-values") {
  // p in {0.02, 0.045, 0.08}: entries switch on strictly after alpha passes p.
  std::vector<BiasFinding> f{
      finding("e0", "g", "r", {entry("x", 0.3, 0.02)}),
      finding("e1", "g", "r", {entry("x", 0.3, 0.045)}),
      finding("e2", "g", "r", {entry("x", 0.3, 0.08)})};
  auto sweep = alpha_sweep(f, default_alpha_grid());
  std::vector<double> expect;
  for (double alpha : sweep.alphas) {
    int on = 0;
    for (double p : {0.02, 0.045, 0.08}) on += p < alpha ? 1 : 0;
    expect.push_back(0.3 * on / 3.0);
  }
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(sweep.curve[i].value == doctest::Approx(expect[i]).epsilon(1e-12));
  }
  // alpha == p exactly keeps the entry off (strict threshold): at alpha=0.02
  // the first entry is still zero; it turns on at 0.03.
  CHECK(sweep.curve[1].value == 0.0);
  CHECK(sweep.curve[2].value == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("alpha sweep is non-decreasing") {
  std::vector<BiasFinding> f{
      finding("e0", "g", "r",
              {entry("x", 0.2, 0.013), entry("y", 0.5, 0.061)}),
      finding("e1", "g", "r",
              {entry("x", 0.1, 0.034), entry("y", 0.4, 0.095)})};
  auto sweep = alpha_sweep(f, default_alpha_grid());
  for (std::size_t i = 1; i < sweep.curve.size(); ++i) {
    CHECK(sweep.curve[i].value >= sweep.curve[i - 1].value);
  }
}

TEST_CASE("multi-run comparison: identical runs, monotone dominance, shape") {
  std::vector<BiasFinding> run{
      finding("e0", "gender", "F", {entry("M", 0.2, 0.001)}),
      finding("e1", "gender", "F", {entry("M", 0.1, 0.5)})};
  std::vector<BiasFinding> bigger{
      finding("e0", "gender", "F", {entry("M", 0.5, 0.001)}),
      finding("e1", "gender", "F", {entry("M", 0.1, 0.5)})};

  auto rows = multi_run_compare({{"a", run}, {"b", run}}, 0.05);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].result.value == rows[1].result.value);

  auto rows2 = multi_run_compare({{"small", run}, {"large", bigger}}, 0.05);
  CHECK(rows2[1].result.value > rows2[0].result.value);

  std::vector<std::pair<std::string, std::vector<BiasFinding>>> eight;
  for (int i = 0; i < 8; ++i) eight.push_back({"arch" + std::to_string(i), run});
  CHECK(multi_run_compare(eight, 0.05).size() == 8);

  std::vector<BiasFinding> other_vocab{
      finding("e0", "gender", "F", {entry("X", 0.2, 0.001)}),
      finding("e1", "gender", "F", {entry("X", 0.1, 0.5)})};
  CHECK_THROWS_AS(multi_run_compare({{"a", run}, {"b", other_vocab}}, 0.05), Error);
}
