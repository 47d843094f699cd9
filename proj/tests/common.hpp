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

// Helpers shared by the unit tests and the acceptance runner.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/engine.hpp"
#include "sparsesim/network.hpp"
#include "sparsesim/pipeline.hpp"
#include "sparsesim/planner.hpp"
#include "sparsesim/request.hpp"
#include "sparsesim/rng.hpp"

namespace sparsesim::testing {

inline double max_abs_diff(std::span<const cdouble> a, std::span<const cdouble> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(std::span<const cdouble> a) {
  double m = 0.0;
  for (const cdouble& v : a) m = std::max(m, std::abs(v));
  return m;
}

inline const FsimGate* fsim_at(const Circuit& c, const GateRef& ref) {
  return std::get_if<FsimGate>(&c.moments[ref.moment][ref.index]);
}

// K distinct fSim gates from moments [lo, hi), one random input broken on each.
inline std::vector<std::pair<int, int>> random_breaks(const Circuit& c, int k, std::uint64_t seed,
                                                      int lo, int hi) {
  std::vector<int> pool;
  auto refs = gate_index(c);
  for (int g = 0; g < static_cast<int>(refs.size()); ++g) {
    if (fsim_at(c, refs[g]) && refs[g].moment >= lo && refs[g].moment < hi) pool.push_back(g);
  }
  SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < k && !pool.empty(); ++i) {
    auto at = uniform_index(rng, pool.size());
    out.emplace_back(pool[at], static_cast<int>(rng() >> 63));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
  }
  return out;
}

// Plan for `request` on a prepared network. Sliced companion cuts are off
// by default so the plan is exact.
inline ContractionPlan quick_plan(TensorNetwork& tn, const SparseStateRequest& request,
                                  std::uint64_t seed, int min_global = 0,
                                  std::uint64_t space_budget = 0, int split_cycle = -1,
                                  bool companions = false) {
  RowTables rows(request.fixed_mask(), request.groups);
  PlanOptions opts;
  opts.seed = seed;
  opts.trials = 2;
  opts.split_cycle = split_cycle;
  opts.space_budget = space_budget;
  opts.slices.min_global = min_global;
  opts.slices.companions = companions;
  return make_plan(tn, rows, opts);
}

// Full 2^n state of a prepared network through planner and engine.
inline std::vector<cdouble> engine_state(TensorNetwork& tn, std::uint64_t seed,
                                         const EngineOptions& opts = {}) {
  auto request = SparseStateRequest::full(tn.num_qubits);
  ContractionPlan plan = quick_plan(tn, request, seed);
  SparseState s = run_subtasks(tn, plan, request, 1.0, opts);
  return s.amplitudes;
}

}  // namespace sparsesim::testing
