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

#pragma once

#include <cstdint>
#include <vector>

#include "sparsesim/network.hpp"
#include "sparsesim/request.hpp"

namespace sparsesim {

// Contract composites i and j; the result takes id i.
struct Step {
  int i = 0;
  int j = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct ContractionOrder {
  std::vector<Step> steps;

  friend bool operator==(const ContractionOrder&, const ContractionOrder&) = default;
};

// Head = composites whose layer is below the cut; it contains no output.
struct HeadTailSplit {
  int cut = 0;
  std::vector<int> head;
  std::vector<int> tail;
  std::vector<Label> interface;  // labels joining head and tail, ascending
};

struct CompanionRecord {
  Label edge = -1;    // the cut fSim output, tied to `source`
  int gate = -1;
  int input = 0;      // pinned fSim input
  Label source = -1;  // the sliced input label
  double factor = 1.0;

  friend bool operator==(const CompanionRecord&, const CompanionRecord&) = default;
};

struct SlicingPlan {
  std::vector<Label> global_edges;
  std::vector<Label> local_head_edges;
  std::vector<Label> local_tail_edges;
  std::vector<CompanionRecord> companions;

  std::vector<Label> all() const;
  friend bool operator==(const SlicingPlan&, const SlicingPlan&) = default;
};

struct ContractionPlan {
  int split_cycle = 0;
  ContractionOrder order;  // head steps first
  int head_steps = 0;
  SlicingPlan slicing;
  std::uint64_t space_budget = 0;  // max tensor extent; 0 = unbounded

  friend bool operator==(const ContractionPlan&, const ContractionPlan&) = default;
};

// Multiply-add counts; saturate at UINT64_MAX. The log2 fields are exact
// enough for reporting plans far beyond 64 bits.
struct ComplexityReport {
  std::uint64_t time_per_subtask_head = 0;
  std::uint64_t time_per_subtask_tail = 0;
  std::uint64_t overall_time = 0;
  std::uint64_t space = 0;
  std::uint64_t subtasks = 1;
  double log2_overall_time = 0.0;
  double log2_space = 0.0;
};

HeadTailSplit split_head_tail(const TensorNetwork& tn, int cut);

// Composite holding the head's contraction result, or -1 for an empty head.
int head_result_id(const HeadTailSplit& split, const ContractionPlan& plan);

// Best of `trials` greedy runs (the first deterministic, the rest sampled)
// by (space, time). Throws ValidationError on a disconnected network.
ContractionOrder find_order_greedy(const TensorNetwork& tn, std::uint64_t seed, int trials,
                                   const RowTables& rows = {});

// Greedy order over the head composites; outer products allowed.
ContractionOrder head_order(const TensorNetwork& tn, const HeadTailSplit& split,
                            std::uint64_t seed, int trials);

// Tail order that grows one accumulator from the head result (or the earliest
// tail tensor), sweeping toward later layers and turning back whenever no
// neighbor lies ahead. `head_result` is -1 for an empty head.
ContractionOrder zigzag_order(const TensorNetwork& tn, const HeadTailSplit& split,
                              int head_result, const RowTables& rows = {});

// Greedy over the tail (plus head result).
ContractionOrder tail_order_greedy(const TensorNetwork& tn, const HeadTailSplit& split,
                                   int head_result, std::uint64_t seed, int trials,
                                   const RowTables& rows = {});

struct SliceOptions {
  int min_global = 0;
  bool companions = true;
};

// Greedy slicing until every tensor extent is within the budget, then
// companion cuts the cost model accepts (applied to `tn`). Throws
// InfeasiblePlanError when the budget cannot be met.
SlicingPlan choose_slices(TensorNetwork& tn, const ContractionPlan& plan, RowTables& rows,
                          std::uint64_t space_budget, const SliceOptions& options = {});

ComplexityReport complexity(const TensorNetwork& tn, const ContractionPlan& plan,
                            RowTables& rows);

// Throws ValidationError describing the first inconsistency.
void validate_plan(const TensorNetwork& tn, const ContractionPlan& plan);

struct PlanOptions {
  int split_cycle = -1;  // -1: scan all cuts
  bool zigzag = true;
  std::uint64_t seed = 0;
  int trials = 4;
  std::uint64_t space_budget = 0;
  SliceOptions slices;
};

ContractionPlan make_plan(TensorNetwork& tn, RowTables& rows, const PlanOptions& options);

// Drill `count` holes one at a time, each at the fSim whose removal gives the
// cheapest greedy plan. `tn` must be simplified; it stays simplified.
std::vector<int> choose_holes(TensorNetwork& tn, int count);

// Companion cut for every fSim with exactly one broken input; returns gates.
std::vector<int> apply_broken_companions(TensorNetwork& tn);

}  // namespace sparsesim
