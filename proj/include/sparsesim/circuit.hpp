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
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sparsesim {

using cdouble = std::complex<double>;
using Matrix2 = std::array<cdouble, 4>;   // row-major
using Matrix4 = std::array<cdouble, 16>;  // row-major, basis |ab>, a = first target

struct Qubit {
  int id = 0;
  int row = 0;
  int col = 0;

  friend bool operator==(const Qubit&, const Qubit&) = default;
};

struct FsimParams {
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const FsimParams&, const FsimParams&) = default;
};

struct SingleGate {
  Matrix2 matrix{};
  int target = 0;

  friend bool operator==(const SingleGate&, const SingleGate&) = default;
};

struct FsimGate {
  FsimParams params;
  std::array<int, 2> targets{};

  friend bool operator==(const FsimGate&, const FsimGate&) = default;
};

using Gate = std::variant<SingleGate, FsimGate>;
using Moment = std::vector<Gate>;

// A grid circuit. Qubit ids are 0..n-1 and `qubits[i].id == i`. Every gate in
// the circuit has a global id: its position in moment-major order.
struct Circuit {
  std::vector<Qubit> qubits;
  std::vector<Moment> moments;
  std::string sequence;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  int num_moments() const { return static_cast<int>(moments.size()); }
  int num_gates() const;

  // Throws ValidationError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Location of a gate by global id.
struct GateRef {
  int moment = 0;
  int index = 0;
};
std::vector<GateRef> gate_index(const Circuit& circuit);

inline bool is_fsim(const Gate& g) { return std::holds_alternative<FsimGate>(g); }

Matrix4 fsim_matrix(const FsimParams& params);

// sqrt(X), sqrt(Y), sqrt(W) with W = (X + Y) / sqrt(2).
const std::array<Matrix2, 3>& sycamore_single_qubit_gates();

Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& circuit);

// Couplers activated by a pattern letter on a rows x cols grid, as qubit-id
// pairs (lower id first). Letters:
//   A/B  horizontal couplers with even/odd left column
//   C/D  vertical couplers with even/odd top row
//   E/F  horizontal couplers with even/odd (row + left column)
//   G/H  vertical couplers with even/odd (top row + column)
// Throws ValidationError for any other letter.
std::vector<std::pair<int, int>> coupler_pattern(int rows, int cols, char letter);

struct GeneratorOptions {
  double theta_center = 1.5707963267948966;  // pi/2
  double phi_center = 0.5235987755982988;    // pi/6
  double jitter = 0.15;
};

// One cycle = a moment of single-qubit gates followed by a moment of fSim
// gates on the couplers of pattern[cycle % pattern.size()].
Circuit generate_random_circuit(int rows, int cols, int cycles,
                                std::string_view pattern, std::uint64_t seed,
                                const GeneratorOptions& options = {});

}  // namespace sparsesim
