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

#include "../common.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/oracle.hpp"
#include "sparsesim/sampling.hpp"

namespace sparsesim {
namespace {

using testing::max_abs_diff;

struct Fixture {
  Circuit c;
  TensorNetwork tn;
  StateVector psi;
  ContractionOrder order;
};

Fixture make(int rows, int cols, int cycles, std::uint64_t seed) {
  Fixture f;
  f.c = generate_random_circuit(rows, cols, cycles, "EFGH", seed);
  NetworkRecipe recipe;
  f.tn = prepare_network(f.c, recipe);
  f.psi = statevector(f.c);
  f.order = find_order_greedy(f.tn, seed, 2);
  return f;
}

TEST(Engine, FullStateMatchesOracle) {
  Fixture f = make(3, 3, 5, 1);
  EXPECT_LT(max_abs_diff(contract_full(f.tn, f.order), f.psi), 1e-12);
  EngineOptions single;
  single.dtype = Dtype::kComplex64;
  EXPECT_LT(max_abs_diff(contract_full(f.tn, f.order, single), f.psi), 1e-5);
}

TEST(Engine, SingleAmplitude) {
  Fixture f = make(3, 3, 5, 2);
  for (Pattern bits : {Pattern{0}, Pattern{0b101010101}, Pattern{0b111111111}}) {
    cdouble a = contract_single(f.tn, f.order, bits);
    EXPECT_NEAR(std::abs(a - f.psi[pattern_index(bits, 9)]), 0.0, 1e-12);
  }
}

TEST(Engine, BatchOverOpenQubits) {
  Fixture f = make(3, 3, 5, 3);
  std::vector<std::pair<int, int>> fixed{{0, 1}, {1, 0}, {2, 1}, {3, 1}, {5, 0}, {7, 0}};
  std::vector<int> open{4, 6, 8};
  auto amps = contract_batch(f.tn, f.order, fixed, open);
  ASSERT_EQ(amps.size(), 8u);
  for (int mu = 0; mu < 8; ++mu) {
    Pattern p = qubit_bit(0) | qubit_bit(2) | qubit_bit(3);
    if (mu & 4) p |= qubit_bit(4);
    if (mu & 2) p |= qubit_bit(6);
    if (mu & 1) p |= qubit_bit(8);
    EXPECT_NEAR(std::abs(amps[mu] - f.psi[pattern_index(p, 9)]), 0.0, 1e-12);
  }
}

TEST(Engine, SparseStateWithDuplicateGroups) {
  Fixture f = make(3, 4, 6, 4);
  SparseStateRequest req;
  req.num_qubits = 12;
  req.open_qubits = {3, 9};
  Pattern mask = (Pattern{1} << 12) - 1 - qubit_bit(3) - qubit_bit(9);
  req.groups = {0b000000000001 & mask, 0b110000110000 & mask, 0b000000000001 & mask};
  ContractionPlan plan = testing::quick_plan(f.tn, req, 1);
  SparseState s = contract_sparse(f.tn, plan, req);
  ASSERT_EQ(s.request.num_groups(), 3u);
  EXPECT_EQ(s.rows.size(), 2u);
  for (std::size_t g = 0; g < 3; ++g) {
    for (int mu = 0; mu < 4; ++mu) {
      EXPECT_NEAR(std::abs(s.amplitude(g, mu) - f.psi[pattern_index(req.bitstring(g, mu), 12)]), 0.0,
                  1e-12);
    }
  }
}

TEST(Engine, WorkerCountDoesNotChangeBits) {
  Fixture f = make(3, 4, 8, 5);
  auto req = make_request(12, std::vector<int>{8, 9, 10, 11}, 32, 3);
  ContractionPlan plan = testing::quick_plan(f.tn, req, 2, 3);
  EngineOptions one, four;
  four.workers = 4;
  auto a = run_subtasks(f.tn, plan, req, 1.0, one);
  auto b = run_subtasks(f.tn, plan, req, 1.0, four);
  EXPECT_EQ(a.amplitudes, b.amplitudes);
  EXPECT_EQ(a.subtasks_total, 8u);
}

TEST(Engine, PartialPathFraction) {
  Fixture f = make(3, 4, 8, 6);
  auto req = SparseStateRequest::full(12);
  ContractionPlan plan = testing::quick_plan(f.tn, req, 2, 2);
  auto quarter = run_subtasks(f.tn, plan, req, 0.25);
  EXPECT_EQ(quarter.subtasks_summed, 1u);
  EXPECT_DOUBLE_EQ(quarter.path_fraction, 0.25);
  auto half = run_subtasks(f.tn, plan, req, 0.3);
  EXPECT_EQ(half.subtasks_summed, 2u);
  EXPECT_DOUBLE_EQ(half.path_fraction, 0.5);
  EXPECT_THROW(run_subtasks(f.tn, plan, req, 0.0), ValidationError);
  EXPECT_THROW(run_subtasks(f.tn, plan, req, 1.5), ValidationError);
}

TEST(Engine, PartialCallbackSeesEveryPrefix) {
  Fixture f = make(3, 4, 8, 7);
  auto req = make_request(12, std::vector<int>{9, 10, 11}, 16, 4);
  ContractionPlan plan = testing::quick_plan(f.tn, req, 3, 2);
  std::vector<std::vector<cdouble>> prefixes;
  EngineOptions opts;
  opts.workers = 2;
  opts.on_partial = [&](const SparseState& s) {
    EXPECT_EQ(s.subtasks_summed, prefixes.size() + 1);
    prefixes.push_back(s.amplitudes);
  };
  auto full = run_subtasks(f.tn, plan, req, 1.0, opts);
  ASSERT_EQ(prefixes.size(), full.subtasks_total);
  for (std::size_t k = 1; k <= prefixes.size(); ++k) {
    auto part = run_subtasks(f.tn, plan, req, double(k) / double(full.subtasks_total));
    EXPECT_EQ(part.amplitudes, prefixes[k - 1]);
  }
}

TEST(Engine, InstrumentedCountMatchesPlanner) {
  Fixture f = make(3, 4, 6, 7);
  auto req = make_request(12, std::vector<int>{10, 11}, 20, 9);
  ContractionPlan plan = testing::quick_plan(f.tn, req, 3, 2, 1 << 7);
  RowTables rows(req.fixed_mask(), req.groups);
  ComplexityReport r = complexity(f.tn, plan, rows);
  ExecStats stats;
  EngineOptions opts;
  opts.stats = &stats;
  run_subtasks(f.tn, plan, req, 1.0, opts);
  EXPECT_EQ(stats.madds.value(), r.overall_time);
  EXPECT_LE(stats.peak_extent.load(), r.space);
}

TEST(Engine, FullStateCap) {
  Fixture f = make(2, 3, 3, 8);
  EngineOptions opts;
  opts.full_state_cap = 4;
  EXPECT_THROW(contract_full(f.tn, f.order, opts), ValidationError);
}

}  // namespace
}  // namespace sparsesim
