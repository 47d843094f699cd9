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
#include <span>
#include <utility>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/network.hpp"
#include "sparsesim/request.hpp"

namespace sparsesim {

// 2^n amplitudes, qubit 0 most significant.
using StateVector = std::vector<cdouble>;

struct OracleOptions {
  int cap = 26;
  int threads = 1;
  bool reference = false;  // serial kernels from sparsesim::reference
};

StateVector statevector(const Circuit& circuit, const OracleOptions& options = {});

// The unnormalized state the approximated network represents: the circuit
// with every ledger entry replayed at gate level (edge break: |0><0| before
// the gate; hole: |00><00| before the fSim; companion: the truncated fSim).
StateVector statevector_with_ledger(const Circuit& circuit,
                                    std::span<const Approximation> ledger,
                                    const OracleOptions& options = {});

// Index of a bitstring pattern in a state vector.
std::uint64_t pattern_index(Pattern p, int n);

// |<psi|psi_hat>|^2 / (<psi|psi> <psi_hat|psi_hat>).
double fidelity(std::span<const cdouble> psi, std::span<const cdouble> psi_hat);

// (2^n / L) sum P(s_i) - 1 with P = |psi|^2.
double linear_xeb(std::span<const Pattern> samples, std::span<const cdouble> psi, int n);
// <ln(2^n P(s_i))> + Euler's gamma.
// Standard error of linear_xeb: sample standard deviation of 2^n P(s) over sqrt(L).
double linear_xeb_stderr(std::span<const Pattern> samples, std::span<const cdouble> psi, int n);
double log_xeb(std::span<const Pattern> samples, std::span<const cdouble> psi, int n);

struct PorterThomasStats {
  std::vector<double> bin_edges;  // over Np
  std::vector<std::uint64_t> counts;
  double ks = 0.0;  // against Exp(1)
};
PorterThomasStats porter_thomas_stats(std::span<const double> probabilities, int n,
                                      int bins = 50, double max_np = 10.0);

// (entropy_sampled, entropy_true): -<ln p(s_i)> over samples and -sum p ln p.
std::pair<double, double> entropy_pair(std::span<const Pattern> samples,
                                       std::span<const double> distribution, int n);

std::vector<double> probabilities(std::span<const cdouble> psi);

struct StatsReport {
  double fidelity = 0.0;
  double linear_xeb = 0.0;
  double linear_xeb_stderr = 0.0;
  double log_xeb = 0.0;
  double entropy_true = 0.0;
  double entropy_sampled = 0.0;
  PorterThomasStats porter_thomas;
  // Context.
  double estimate = 1.0;
  double path_fraction = 1.0;
  double sparse_norm = 0.0;
  int num_samples = 0;
  int num_qubits = 0;
};

}  // namespace sparsesim
