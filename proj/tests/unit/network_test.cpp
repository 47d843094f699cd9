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

#include "../common.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/oracle.hpp"

namespace sparsesim {
namespace {

using testing::max_abs_diff;

std::vector<cdouble> dense(const TensorNetwork& tn) {
  auto t = contract_network(tn);
  return {t.data().begin(), t.data().end()};
}

TEST(Network, ExactContractionMatchesOracle) {
  Circuit c = generate_random_circuit(2, 3, 4, "ABCDCDAB", 1);
  TensorNetwork tn = build_network(c);
  auto psi = statevector(c);
  EXPECT_LT(max_abs_diff(dense(tn), psi), 1e-12);
  simplify(tn);
  EXPECT_LT(max_abs_diff(dense(tn), psi), 1e-12);
  for (int comp : tn.alive_composites()) EXPECT_GT(tn.external_labels(comp).size(), 2u);
}

TEST(Network, SimplifyKeepsLayersAndConnectivity) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 2);
  TensorNetwork tn = build_network(c);
  simplify(tn);
  EXPECT_TRUE(tn.connected());
  for (int comp : tn.alive_composites()) {
    int lo = tn.num_moments + 1;
    for (int r : tn.composites[comp].raws) lo = std::min(lo, tn.raws[r].moment);
    EXPECT_EQ(tn.composites[comp].layer, lo);
  }
}

TEST(Network, EdgeBreakMatchesLedgerOracle) {
  Circuit c = generate_random_circuit(3, 3, 5, "ABCDCDAB", 3);
  NetworkRecipe recipe;
  recipe.breaks = testing::random_breaks(c, 2, 9, 3, c.num_moments());
  recipe.broken_companions = false;
  TensorNetwork tn = prepare_network(c, recipe);
  EXPECT_EQ(tn.budget.k_broken_edges, 2);
  EXPECT_EQ(tn.ledger.size(), 2u);
  EXPECT_LT(max_abs_diff(dense(tn), statevector_with_ledger(c, tn.ledger)), 1e-12);
}

TEST(Network, BoundaryEdgeCannotBreak) {
  Circuit c = generate_random_circuit(2, 2, 2, "AC", 3);
  TensorNetwork tn = build_network(c);
  EXPECT_THROW(break_edge(tn, tn.output_labels[0]), ValidationError);
}

TEST(Network, HoleMatchesLedgerOracle) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 4);
  TensorNetwork tn = build_network(c);
  simplify(tn);
  auto refs = gate_index(c);
  int gate = -1;
  for (int g = 0; g < static_cast<int>(refs.size()); ++g) {
    if (testing::fsim_at(c, refs[g]) && refs[g].moment == 5) gate = g;
  }
  ASSERT_GE(gate, 0);
  drill_hole(tn, gate);
  simplify(tn);
  EXPECT_EQ(tn.budget.k_broken_edges, 2);
  EXPECT_DOUBLE_EQ(tn.budget.estimate(), 0.25);
  EXPECT_LT(max_abs_diff(dense(tn), statevector_with_ledger(c, tn.ledger)), 1e-12);
  EXPECT_THROW(drill_hole(tn, gate), ValidationError);
}

TEST(Network, HoleOnLastMomentMakesBoundaryVectors) {
  Circuit c = generate_random_circuit(2, 2, 3, "ACAC", 5);
  TensorNetwork tn = build_network(c);
  simplify(tn);
  auto refs = gate_index(c);
  int gate = -1;
  for (int g = 0; g < static_cast<int>(refs.size()); ++g) {
    if (testing::fsim_at(c, refs[g]) && refs[g].moment == c.num_moments() - 1) gate = g;
  }
  ASSERT_GE(gate, 0);
  drill_hole(tn, gate);
  EXPECT_LT(max_abs_diff(dense(tn), statevector_with_ledger(c, tn.ledger)), 1e-12);
}

TEST(Network, PinnedCompanionMatchesLedgerOracle) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 10 + seed);
    NetworkRecipe recipe;
    recipe.breaks = testing::random_breaks(c, 3, seed, 3, c.num_moments() - 2);
    TensorNetwork tn = prepare_network(c, recipe);
    int companions = 0;
    double product = 1.0;
    for (const Approximation& a : tn.ledger) {
      if (a.kind != ApproxKind::kCompanion) continue;
      ++companions;
      auto ref = gate_index(c)[a.gate];
      double s = std::sin(testing::fsim_at(c, ref)->params.theta);
      product *= (1 + s * s) / 2;
    }
    EXPECT_GT(companions, 0);
    EXPECT_NEAR(tn.budget.estimate(), std::ldexp(product, -3), 1e-15);
    EXPECT_LT(max_abs_diff(dense(tn), statevector_with_ledger(c, tn.ledger)), 1e-12);
  }
}

TEST(Network, InsertedMatrixActsOnTheWire) {
  Circuit c = generate_random_circuit(2, 3, 4, "ABCD", 6);
  auto refs = gate_index(c);
  int gate = -1;
  for (int g = 0; g < static_cast<int>(refs.size()); ++g) {
    if (!testing::fsim_at(c, refs[g]) && refs[g].moment == 4) gate = g;
  }
  ASSERT_GE(gate, 0);
  const double h = std::sqrt(0.5);
  const Matrix2 m{cdouble(h, 0.0), cdouble(0.0, h), cdouble(0.0, h), cdouble(h, 0.0)};
  TensorNetwork tn = build_network(c);
  insert_matrix_on_edge(tn, gate_input_label(tn, gate, 0), m);

  // Same thing at gate level: U -> U * m.
  Circuit d = c;
  auto& single = std::get<SingleGate>(d.moments[refs[gate].moment][refs[gate].index]);
  Matrix2 u = single.matrix, um{};
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < 2; ++k) um[r * 2 + k] = u[r * 2] * m[k] + u[r * 2 + 1] * m[2 + k];
  }
  single.matrix = um;
  EXPECT_LT(max_abs_diff(dense(tn), statevector(d)), 1e-12);
}

TEST(Budget, EstimateAndCombine) {
  FidelityBudget a{2, {0.9}};
  FidelityBudget b{1, {0.8, 0.5}};
  EXPECT_DOUBLE_EQ(estimate_fidelity(a), 0.25 * 0.9);
  FidelityBudget ab = combine(a, b);
  EXPECT_EQ(ab.k_broken_edges, 3);
  EXPECT_DOUBLE_EQ(estimate_fidelity(ab), 0.125 * 0.9 * 0.8 * 0.5);
  EXPECT_DOUBLE_EQ(estimate_fidelity({}), 1.0);
}

}  // namespace
}  // namespace sparsesim
