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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/tensor.hpp"

namespace sparsesim {

// State of a gate input wire. kInitial: fixed to |0> exactly (circuit input,
// or the far side of a drilled hole); kBroken: pinned to |0> by an edge break.
enum class InputState : std::uint8_t { kInitial, kLive, kBroken };

enum class PinnedInput : std::uint8_t { kFirst = 0, kSecond = 1 };

// One tensor per gate, never merged; the source of truth for composite data.
struct RawTensor {
  int gate = -1;  // circuit gate id; -1 for boundary vectors and inserted tensors
  int moment = 0;
  bool fsim = false;
  FsimParams params;
  std::array<int, 2> qubits{-1, -1};
  std::array<Label, 2> inputs{-1, -1};  // -1: the circuit's |0> input
  std::array<Label, 2> outputs{-1, -1};
  std::array<InputState, 2> input_state{InputState::kInitial, InputState::kInitial};
  Tensor<cdouble> data;
  bool alive = true;
};

// A wire segment. Every live label joins two raw tensors, except network
// outputs (downstream == -1).
struct LabelInfo {
  int qubit = -1;
  int upstream = -1;
  int downstream = -1;
  bool alive = true;
};

// A set of raw tensors contracted into one node of the network.
struct Composite {
  std::vector<int> raws;  // ascending
  Tensor<cdouble> data;   // labels ascending
  int layer = 0;          // earliest moment among its raws
  bool alive = true;
};

struct FidelityBudget {
  int k_broken_edges = 0;
  std::vector<double> companion_factors;

  double estimate() const;
  friend bool operator==(const FidelityBudget&, const FidelityBudget&) = default;
};

// 2^-K * prod(factors).
double estimate_fidelity(const FidelityBudget& budget);
FidelityBudget combine(const FidelityBudget& a, const FidelityBudget& b);

// Gate-level record of every approximation, replayable on a state vector.
enum class ApproxKind : std::uint8_t { kEdgeBreak, kHoleDrill, kCompanion };
struct Approximation {
  ApproxKind kind = ApproxKind::kEdgeBreak;
  int gate = -1;
  int input = 0;  // which gate input (break: the broken one; companion: the pinned one)

  friend bool operator==(const Approximation&, const Approximation&) = default;
};

// A companion edge whose value follows a sliced source label.
struct Tie {
  Label source = -1;
  Label target = -1;
  int gate = -1;

  friend bool operator==(const Tie&, const Tie&) = default;
};

struct Hole {
  int gate = -1;
  int moment = 0;
  std::array<Label, 2> broken{-1, -1};
};

struct TensorNetwork {
  int num_qubits = 0;
  int num_moments = 0;
  std::vector<RawTensor> raws;
  std::vector<LabelInfo> labels;
  std::vector<Composite> composites;
  std::vector<int> owner;           // raw id -> composite id
  std::vector<Label> output_labels;  // per qubit
  FidelityBudget budget;
  std::vector<Approximation> ledger;
  std::vector<Hole> holes;
  std::vector<Tie> ties;

  std::vector<int> alive_composites() const;
  int num_alive() const;
  // Live labels of composite c that leave it, ascending.
  std::vector<Label> external_labels(int c) const;
  bool is_output(Label l) const { return labels[l].alive && labels[l].downstream < 0; }
  // Composites across the labels of c (excluding network outputs), ascending.
  std::vector<int> neighbors(int c) const;
  // Composite on the other side of label l from composite c, or -1.
  int across(int c, Label l) const;
  bool connected() const;
};

TensorNetwork build_network(const Circuit& circuit);

// Merge composites of rank <= 2 into neighbors until none remain: inputs merge
// into their producer, output-only tensors into their consumer, isolated ones
// into the latest-layer composite. Exact.
void simplify(TensorNetwork& tn);

// Pins both endpoints of an internal label to |0>. K += 1.
void break_edge(TensorNetwork& tn, Label edge);

// Label feeding input `which` of a gate (-1 for a circuit input).
Label gate_input_label(const TensorNetwork& tn, int gate, int which);

// Breaks both inputs of an fSim and replaces it by |0>|0> on its outputs.
void drill_hole(TensorNetwork& tn, int gate);

// Where a companion cut on `gate` would land: `edge` is the fSim output wire,
// `external` the composite-graph edge carrying it (differs when the single
// gate after the fSim sits in the fSim's composite and must move downstream).
struct CompanionCandidate {
  Label edge = -1;
  Label external = -1;
  int move_raw = -1;
  double factor = 1.0;
};
std::optional<CompanionCandidate> companion_candidate(const TensorNetwork& tn, int gate,
                                                      PinnedInput pinned);

// Rank-one truncation of a partially pinned fSim. The pinned input is either
// broken, or live and listed in `sliced` (then a tie is recorded and the
// companion edge must be sliced with the same value). Returns the fidelity
// factor (1 + sin^2 theta) / 2.
double companion_rank_one(TensorNetwork& tn, int gate, PinnedInput pinned,
                          std::span<const Label> sliced = {});

// Splits `edge` and places the 2x2 matrix m on it (m acts on the wire).
void insert_matrix_on_edge(TensorNetwork& tn, Label edge, const Matrix2& m);

// Naive contraction of all composites; labels are the output labels in qubit
// order. For small networks and tests.
Tensor<cdouble> contract_network(const TensorNetwork& tn);

}  // namespace sparsesim
