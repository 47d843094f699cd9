// Copyright 2026 The sparsesim Authors.
//
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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sparsesim/circuit.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/rng.hpp"

namespace sparsesim {
namespace {

using namespace std::complex_literals;

TEST(Fsim, ZeroAnglesIsIdentity) {
  Matrix4 f = fsim_matrix({0.0, 0.0});
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(f[r * 4 + c] - (r == c ? 1.0 : 0.0)), 0.0, 1e-15);
  }
}

TEST(Fsim, HalfPiEntries) {
  const double phi = std::numbers::pi / 6;
  Matrix4 f = fsim_matrix({std::numbers::pi / 2, phi});
  EXPECT_NEAR(std::abs(f[5]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f[10]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f[6] - (-1i)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f[9] - (-1i)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f[15] - std::exp(-1i * phi)), 0.0, 1e-15);
  EXPECT_EQ(f[0], cdouble(1.0));
}

TEST(Fsim, RandomAnglesAreUnitary) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    Matrix4 f = fsim_matrix({uniform01(rng) * 7 - 3.5, uniform01(rng) * 7 - 3.5});
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        cdouble s = 0.0;
        for (int k = 0; k < 4; ++k) s += std::conj(f[k * 4 + r]) * f[k * 4 + c];
        worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
      }
    }
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(Parse, SingleQubitHadamard) {
  const char* text = R"({"qubits":[{"id":0,"row":0,"col":0}],
    "cycles":[[{"type":"single","target":0,
      "matrix":[[0.7071067811865476,0],[0.7071067811865476,0],[0.7071067811865476,0],[-0.7071067811865476,0]]}]]})";
  Circuit c = parse_circuit(text);
  EXPECT_EQ(c.num_qubits(), 1);
  EXPECT_EQ(c.num_moments(), 1);
}

TEST(Parse, NonAdjacentFsimIsRejected) {
  const char* text = R"({"qubits":[{"id":0,"row":0,"col":0},{"id":1,"row":0,"col":1},{"id":2,"row":0,"col":2}],
    "cycles":[[{"type":"fsim","targets":[0,2],"theta":1.5,"phi":0.5}]]})";
  EXPECT_THROW(parse_circuit(text), ValidationError);
}

TEST(Parse, DuplicateTargetIsRejected) {
  const char* text = R"({"qubits":[{"id":0,"row":0,"col":0},{"id":1,"row":0,"col":1}],
    "cycles":[[{"type":"fsim","targets":[0,1],"theta":1.5,"phi":0.5},
               {"type":"single","target":1,"matrix":[[1,0],[0,0],[0,0],[1,0]]}]]})";
  EXPECT_THROW(parse_circuit(text), ValidationError);
}

TEST(Parse, SyntaxErrorCarriesLocation) {
  try {
    parse_circuit("{\n\"qubits\": [\n  {\"id\": 0,, }\n]}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parse, MissingFieldIsParseError) {
  EXPECT_THROW(parse_circuit(R"({"qubits":[]})"), ParseError);
}

TEST(Generate, SmallestCase) {
  Circuit c = generate_random_circuit(1, 2, 1, "A", 7);
  ASSERT_EQ(c.num_moments(), 2);
  EXPECT_EQ(c.moments[0].size(), 2u);
  ASSERT_EQ(c.moments[1].size(), 1u);
  EXPECT_TRUE(is_fsim(c.moments[1][0]));
}

TEST(Generate, DeterministicAndRoundTrips) {
  Circuit a = generate_random_circuit(3, 4, 8, "EFGH", 11);
  Circuit b = generate_random_circuit(3, 4, 8, "EFGH", 11);
  EXPECT_EQ(serialize_circuit(a), serialize_circuit(b));
  Circuit back = parse_circuit(serialize_circuit(a));
  EXPECT_EQ(back, a);
  EXPECT_NE(serialize_circuit(generate_random_circuit(3, 4, 8, "EFGH", 12)), serialize_circuit(a));
}

TEST(Generate, ValidationScaleCircuit) {
  Circuit c = generate_random_circuit(5, 6, 14, "EFGH", 3);
  EXPECT_EQ(c.num_qubits(), 30);
  EXPECT_EQ(c.num_moments(), 28);
  EXPECT_NO_THROW(c.validate());
}

TEST(Generate, NoImmediateRepeatAndAnglesInRange) {
  Circuit c = generate_random_circuit(3, 3, 10, "ABCDCDAB", 9);
  for (int m = 2; m < c.num_moments(); m += 2) {
    for (std::size_t g = 0; g < c.moments[m].size(); ++g) {
      const auto& now = std::get<SingleGate>(c.moments[m][g]);
      const auto& before = std::get<SingleGate>(c.moments[m - 2][g]);
      EXPECT_EQ(now.target, before.target);
      EXPECT_NE(now.matrix, before.matrix);
    }
  }
  for (const Moment& moment : c.moments) {
    for (const Gate& g : moment) {
      if (auto* f = std::get_if<FsimGate>(&g)) {
        EXPECT_LE(std::abs(f->params.theta - std::numbers::pi / 2), 0.15);
        EXPECT_LE(std::abs(f->params.phi - std::numbers::pi / 6), 0.15);
      }
    }
  }
}

TEST(Generate, UnknownLetterFails) {
  EXPECT_THROW(generate_random_circuit(2, 2, 2, "AZ", 1), ValidationError);
}

TEST(Couplers, PatternsAreDisjoint) {
  for (char letter : std::string("ABCDEFGH")) {
    auto couplers = coupler_pattern(4, 5, letter);
    std::vector<int> seen(20, 0);
    for (auto [a, b] : couplers) {
      EXPECT_EQ(++seen[a], 1);
      EXPECT_EQ(++seen[b], 1);
    }
  }
}

}  // namespace
}  // namespace sparsesim
