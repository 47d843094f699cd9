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

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/network.hpp"
#include "sparsesim/planner.hpp"
#include "sparsesim/request.hpp"

namespace sparsesim {

// Everything needed to rebuild an approximated network from its circuit, so
// that planning and execution can run in separate processes.
struct NetworkRecipe {
  std::vector<int> holes;                   // fSim gate ids, drilled in order
  int auto_holes = 0;                       // extra holes picked by choose_holes
  std::vector<std::pair<int, int>> breaks;  // (gate, input)
  bool broken_companions = true;            // truncate fSims left with one broken input
};

// build -> simplify -> holes -> breaks -> broken companions. Auto holes are
// resolved and appended to recipe.holes (auto_holes is reset to 0), so the
// returned recipe replays without search.
TensorNetwork prepare_network(const Circuit& circuit, NetworkRecipe& recipe);

// Re-applies the plan's sliced companion cuts to a freshly prepared network.
void replay_companions(TensorNetwork& tn, const ContractionPlan& plan);

struct RequestSpec {
  std::vector<int> open_qubits;  // ascending
  std::size_t num_groups = 1;
  std::uint64_t seed = 0;
};

SparseStateRequest make_request(int n, const RequestSpec& spec);

}  // namespace sparsesim
