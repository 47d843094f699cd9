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

#include <atomic>
#include <functional>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sparsesim/network.hpp"
#include "sparsesim/planner.hpp"
#include "sparsesim/request.hpp"

namespace sparsesim {

enum class Dtype : std::uint8_t { kComplex64, kComplex128 };

// Execution instrumentation, shared by all workers.
struct ExecStats {
  MaddCounter madds;
  std::atomic<std::uint64_t> peak_extent{0};

  void observe(std::uint64_t extent) {
    std::uint64_t cur = peak_extent.load(std::memory_order_relaxed);
    while (extent > cur && !peak_extent.compare_exchange_weak(cur, extent)) {
    }
  }
};

struct SparseState;

struct EngineOptions {
  Dtype dtype = Dtype::kComplex128;
  int workers = 1;
  ExecStats* stats = nullptr;
  int full_state_cap = 26;  // contract_full refuses larger n
  // Called after each subtask is added, in summation order, with the running
  // state; subtasks_summed and path_fraction describe the prefix so far.
  std::function<void(const SparseState&)> on_partial;
};

struct SparseState {
  SparseStateRequest request;
  std::vector<Pattern> rows;              // distinct group patterns, ascending
  std::vector<std::uint32_t> group_row;   // group -> row
  std::vector<cdouble> amplitudes;        // rows x group_size
  double path_fraction = 1.0;
  std::uint64_t subtasks_summed = 1;
  std::uint64_t subtasks_total = 1;
  FidelityBudget budget;

  std::span<const cdouble> group(std::size_t g) const;
  cdouble amplitude(std::size_t g, int mu) const { return group(g)[mu]; }
};

// A plan that only carries an order: no split, no slicing.
ContractionPlan plan_from_order(const ContractionOrder& order);

// 2^n amplitudes, qubit 0 most significant.
std::vector<cdouble> contract_full(const TensorNetwork& tn, const ContractionOrder& order,
                                   const EngineOptions& options = {});
cdouble contract_single(const TensorNetwork& tn, const ContractionOrder& order, Pattern bits,
                        const EngineOptions& options = {});
// `fixed` holds (qubit, bit); `open` must be ascending. Amplitudes are indexed
// by the open bits, the first open qubit most significant.
std::vector<cdouble> contract_batch(const TensorNetwork& tn, const ContractionOrder& order,
                                    std::span<const std::pair<int, int>> fixed,
                                    std::span<const int> open, const EngineOptions& options = {});

SparseState contract_sparse(const TensorNetwork& tn, const ContractionPlan& plan,
                            const SparseStateRequest& request, const EngineOptions& options = {});

// Sums the first ceil(fraction * 2^|global|) subtasks in ascending order of
// the global-slice bit pattern (first global edge most significant).
SparseState run_subtasks(const TensorNetwork& tn, const ContractionPlan& plan,
                         const SparseStateRequest& request, double fraction,
                         const EngineOptions& options = {});

}  // namespace sparsesim
