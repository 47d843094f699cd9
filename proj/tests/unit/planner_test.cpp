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
#include "sparsesim/sampling.hpp"

namespace sparsesim {
namespace {

using testing::max_abs_diff;

TensorNetwork exact(const Circuit& c) {
  NetworkRecipe recipe;
  return prepare_network(c, recipe);
}

TEST(Planner, GreedyOrderReducesToOneTensor) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 1);
  TensorNetwork tn = exact(c);
  ContractionOrder order = find_order_greedy(tn, 1, 3);
  EXPECT_EQ(order.steps.size(), static_cast<std::size_t>(tn.num_alive() - 1));
  EXPECT_NO_THROW(validate_plan(tn, plan_from_order(order)));
  EXPECT_EQ(order, find_order_greedy(tn, 1, 3));
}

TEST(Planner, SplitSeparatesLayers) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 2);
  TensorNetwork tn = exact(c);
  HeadTailSplit split = split_head_tail(tn, 6);
  for (int h : split.head) EXPECT_LT(tn.composites[h].layer, 6);
  for (int t : split.tail) EXPECT_GE(tn.composites[t].layer, 6);
  for (Label l : split.interface) {
    bool up = tn.composites[tn.owner[tn.labels[l].upstream]].layer < 6;
    bool down = tn.composites[tn.owner[tn.labels[l].downstream]].layer < 6;
    EXPECT_NE(up, down);
  }
  EXPECT_FALSE(split.interface.empty());
  EXPECT_THROW(split_head_tail(tn, tn.num_moments + 1), Error);
}

TEST(Planner, MakePlanIsValidAndExact) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Circuit c = generate_random_circuit(3, 4, 6, "ABCDCDAB", 20 + seed);
    TensorNetwork tn = exact(c);
    auto req = SparseStateRequest::full(c.num_qubits());
    ContractionPlan plan = testing::quick_plan(tn, req, seed);
    EXPECT_NO_THROW(validate_plan(tn, plan));
    auto s = run_subtasks(tn, plan, req, 1.0);
    EXPECT_LT(max_abs_diff(s.amplitudes, statevector(c)), 1e-12);
  }
}

TEST(Planner, BudgetIsRespected) {
  Circuit c = generate_random_circuit(3, 4, 8, "EFGH", 3);
  TensorNetwork tn = exact(c);
  auto req = make_request(12, std::vector<int>{10, 11}, 64, 5);
  RowTables rows(req.fixed_mask(), req.groups);
  ContractionPlan free_plan = testing::quick_plan(tn, req, 1);
  ComplexityReport free_report = complexity(tn, free_plan, rows);
  const std::uint64_t budget = std::max<std::uint64_t>(free_report.space / 8, 1 << 8);
  ContractionPlan plan = testing::quick_plan(tn, req, 1, 0, budget);
  ComplexityReport report = complexity(tn, plan, rows);
  EXPECT_LE(report.space, budget);
  EXPECT_FALSE(plan.slicing.all().empty());
  auto s = run_subtasks(tn, plan, req, 1.0);
  auto psi = statevector(c);
  for (std::size_t g = 0; g < req.num_groups(); ++g) {
    for (int mu = 0; mu < req.group_size(); ++mu) {
      EXPECT_NEAR(std::abs(s.amplitude(g, mu) - psi[pattern_index(req.bitstring(g, mu), 12)]), 0.0,
                  1e-12);
    }
  }
}

TEST(Planner, ImpossibleBudgetIsInfeasible) {
  Circuit c = generate_random_circuit(3, 3, 4, "EFGH", 4);
  TensorNetwork tn = exact(c);
  EXPECT_THROW(testing::quick_plan(tn, SparseStateRequest::full(9), 1, 0, 4), InfeasiblePlanError);
}

TEST(Planner, ComplexityFormula) {
  Circuit c = generate_random_circuit(3, 4, 8, "EFGH", 5);
  TensorNetwork tn = exact(c);
  auto req = SparseStateRequest::full(12);
  RowTables rows(req.fixed_mask(), req.groups);
  ContractionPlan plan = testing::quick_plan(tn, req, 2, 3, 0, 8);
  ComplexityReport r = complexity(tn, plan, rows);
  EXPECT_EQ(r.subtasks, 8u);
  EXPECT_EQ(r.overall_time, r.subtasks * (r.time_per_subtask_head + r.time_per_subtask_tail));
  EXPECT_NEAR(r.log2_overall_time, std::log2(static_cast<double>(r.overall_time)), 1e-9);
}

TEST(Planner, ZigzagOrderIsValid) {
  Circuit c = generate_random_circuit(4, 4, 8, "EFGH", 6);
  TensorNetwork tn = exact(c);
  HeadTailSplit split = split_head_tail(tn, 8);
  ContractionPlan plan;
  plan.split_cycle = 8;
  plan.order = head_order(tn, split, 1, 2);
  plan.head_steps = static_cast<int>(plan.order.steps.size());
  ContractionOrder tail = zigzag_order(tn, split, head_result_id(split, plan));
  plan.order.steps.insert(plan.order.steps.end(), tail.steps.begin(), tail.steps.end());
  EXPECT_NO_THROW(validate_plan(tn, plan));
  auto s = run_subtasks(tn, plan, SparseStateRequest::full(16), 1.0);
  EXPECT_LT(max_abs_diff(s.amplitudes, statevector(c)), 1e-12);
}

TEST(Planner, RejectsBrokenPlans) {
  Circuit c = generate_random_circuit(3, 3, 4, "EFGH", 7);
  TensorNetwork tn = exact(c);
  ContractionPlan plan = plan_from_order(find_order_greedy(tn, 0, 1));
  plan.order.steps.pop_back();
  EXPECT_THROW(validate_plan(tn, plan), ValidationError);
  plan = plan_from_order(find_order_greedy(tn, 0, 1));
  plan.slicing.global_edges.push_back(tn.output_labels[0]);
  EXPECT_THROW(validate_plan(tn, plan), ValidationError);
}

// Companion cuts placed by the slicer are exact rank-one truncations: the
// engine result equals the gate-level replay of the ledger.
TEST(Planner, SlicedCompanionsMatchLedgerOracle) {
  int total = 0;
  for (std::uint64_t seed = 0; seed < 12 && total < 3; ++seed) {
    Circuit c = generate_random_circuit(3, 4, 8, "EFGH", 40 + seed);
    TensorNetwork tn = exact(c);
    auto req = SparseStateRequest::full(12);
    ContractionPlan plan = testing::quick_plan(tn, req, seed, 4, 0, -1, true);
    if (plan.slicing.companions.empty()) continue;
    total += static_cast<int>(plan.slicing.companions.size());
    double product = 1.0;
    for (const auto& comp : plan.slicing.companions) product *= comp.factor;
    EXPECT_NEAR(tn.budget.estimate(), product, 1e-15);
    auto s = run_subtasks(tn, plan, req, 1.0);
    EXPECT_LT(max_abs_diff(s.amplitudes, statevector_with_ledger(c, tn.ledger)), 1e-12);

    // Replay from scratch reaches the same network.
    TensorNetwork again = exact(c);
    replay_companions(again, plan);
    EXPECT_EQ(again.ledger, tn.ledger);
    EXPECT_EQ(again.ties, tn.ties);
  }
  EXPECT_GT(total, 0) << "no companion cut was accepted on any network";
}

TEST(Planner, HolesAreChosenAndCounted) {
  Circuit c = generate_random_circuit(3, 4, 8, "EFGH", 8);
  NetworkRecipe recipe;
  recipe.auto_holes = 2;
  TensorNetwork tn = prepare_network(c, recipe);
  EXPECT_EQ(recipe.holes.size(), 2u);
  EXPECT_EQ(recipe.auto_holes, 0);
  EXPECT_GE(tn.budget.k_broken_edges, 4);
  NetworkRecipe replay = recipe;
  TensorNetwork again = prepare_network(c, replay);
  EXPECT_EQ(again.ledger, tn.ledger);
  auto s = run_subtasks(tn, plan_from_order(find_order_greedy(tn, 0, 1)), SparseStateRequest::full(12), 1.0);
  EXPECT_LT(max_abs_diff(s.amplitudes, statevector_with_ledger(c, tn.ledger)), 1e-12);
}

}  // namespace
}  // namespace sparsesim
