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

#include <set>
#include <vector>

#include "febias/rng.hpp"

using namespace febias;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (kat_vectors).
  {
    auto out = Philox4x32::block(0, 0, 0);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    auto out = Philox4x32::block(0xffffffffffffffffull, 0xffffffffffffffffull,
                                 0xffffffffffffffffull);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    // ctr = 243f6a8885a308d3 13198a2e03707344, key = a4093822299f31d0
    auto out = Philox4x32::block(0x299f31d0a4093822ull, 0x0370734413198a2eull,
                                 0x85a308d3243f6a88ull);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("streams are deterministic and lane-independent") {
  PhiloxStream a(derive_stream_key(7, "dia|gender|anger|M|F"), 3);
  PhiloxStream b(derive_stream_key(7, "dia|gender|anger|M|F"), 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());

  PhiloxStream c(derive_stream_key(7, "dia|gender|anger|M|F"), 4);
  PhiloxStream d(derive_stream_key(7, "dia|gender|fear|M|F"), 3);
  PhiloxStream e(derive_stream_key(8, "dia|gender|anger|M|F"), 3);
  std::vector<std::uint32_t> ref;
  PhiloxStream a2(derive_stream_key(7, "dia|gender|anger|M|F"), 3);
  for (int i = 0; i < 16; ++i) ref.push_back(a2.next_u32());
  int same_c = 0, same_d = 0, same_e = 0;
  for (int i = 0; i < 16; ++i) {
    same_c += c.next_u32() == ref[i];
    same_d += d.next_u32() == ref[i];
    same_e += e.next_u32() == ref[i];
  }
  CHECK(same_c < 4);
  CHECK(same_d < 4);
  CHECK(same_e < 4);
}

TEST_CASE("bounded draws stay in range and cover it") {
  PhiloxStream s(derive_stream_key(1, "bounds"), 0);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 2000; ++i) {
    std::uint32_t v = s.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  for (int i = 0; i < 100; ++i) CHECK(s.below(1) == 0);
}

TEST_CASE("unit doubles live strictly inside (0,1)") {
  PhiloxStream s(derive_stream_key(2, "unit"), 0);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = s.next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
  }
  mean /= n;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("gaussians have roughly standard moments") {
  PhiloxStream s(derive_stream_key(3, "gauss"), 0);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = s.next_gaussian();
    sum += g;
    sq += g * g;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}
