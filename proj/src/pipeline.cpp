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

#include "sparsesim/pipeline.hpp"

#include "sparsesim/error.hpp"
#include "sparsesim/sampling.hpp"

namespace sparsesim {

TensorNetwork prepare_network(const Circuit& circuit, NetworkRecipe& recipe) {
  TensorNetwork tn = build_network(circuit);
  simplify(tn);
  for (int gate : recipe.holes) {
    if (gate < 0 || gate >= circuit.num_gates()) {
      throw ValidationError("hole gate " + std::to_string(gate) + " out of range");
    }
    drill_hole(tn, gate);
    simplify(tn);
  }
  if (recipe.auto_holes > 0) {
    auto chosen = choose_holes(tn, recipe.auto_holes);
    recipe.holes.insert(recipe.holes.end(), chosen.begin(), chosen.end());
    recipe.auto_holes = 0;
  }
  for (auto [gate, input] : recipe.breaks) {
    if (gate < 0 || gate >= circuit.num_gates() || input < 0 || input > 1) {
      throw ValidationError("bad edge break " + std::to_string(gate) + ":" + std::to_string(input));
    }
    Label l = gate_input_label(tn, gate, input);
    if (l < 0) throw ValidationError("gate " + std::to_string(gate) + " input is not internal");
    break_edge(tn, l);
    simplify(tn);
  }
  if (recipe.broken_companions) {
    apply_broken_companions(tn);
    simplify(tn);
  }
  if (!tn.connected()) throw ValidationError("approximations disconnect the network");
  return tn;
}

void replay_companions(TensorNetwork& tn, const ContractionPlan& plan) {
  const auto sliced = plan.slicing.all();
  for (const CompanionRecord& c : plan.slicing.companions) {
    if (c.input < 0 || c.input > 1) throw ValidationError("plan: bad companion input");
    companion_rank_one(tn, c.gate, static_cast<PinnedInput>(c.input), sliced);
  }
}

SparseStateRequest make_request(int n, const RequestSpec& spec) {
  return make_request(n, spec.open_qubits, spec.num_groups, spec.seed);
}

}  // namespace sparsesim
