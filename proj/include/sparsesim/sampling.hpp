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
#include <string>
#include <vector>

#include "sparsesim/engine.hpp"
#include "sparsesim/rng.hpp"

namespace sparsesim {

struct GroupSpec {
  Pattern fixed_bits = 0;
  std::size_t group_index = 0;
};

// One fair coin per fixed qubit (ascending ids) per group, from a seeded
// mt19937_64. Duplicates are kept.
std::vector<GroupSpec> generate_groups(int n, std::span<const int> open_qubits, std::size_t L,
                                       std::uint64_t seed);
SparseStateRequest make_request(int n, std::span<const int> open_qubits, std::size_t L,
                                std::uint64_t seed);

struct NormEstimate {
  double sparse_norm = 0.0;    // sum over groups of sum_mu |amp|^2
  double normalization = 0.0;  // 2^n / (L l) * sparse_norm
};
NormEstimate estimate_norm(const SparseState& state);

// Exact categorical draw proportional to |amp|^2.
int frugal_sample(std::span<const cdouble> amps, SplitMix64& rng);

// Uniform-proposal Metropolis chain of `steps` moves from a uniform start;
// returns the final state. Requires steps > burn_in >= 0.
int metropolis_sample(std::span<const cdouble> amps, int steps, int burn_in, SplitMix64& rng);

enum class Sampler : std::uint8_t { kFrugal, kMetropolis };
const char* sampler_name(Sampler s);
Sampler sampler_from_name(const std::string& name);

struct SampleSet {
  int num_qubits = 0;
  std::vector<Pattern> bitstrings;  // one per group
  std::uint64_t seed = 0;
  Sampler sampler = Sampler::kFrugal;
  std::string source_digest;
  double path_fraction = 1.0;
  FidelityBudget budget;
};

struct SampleOptions {
  Sampler sampler = Sampler::kFrugal;
  int steps = 200;
  int burn_in = 100;
  int workers = 1;
};

// One draw per group from the stream derive_seed(seed, group).
SampleSet sample_set(const SparseState& state, std::uint64_t seed,
                     const SampleOptions& options = {});

}  // namespace sparsesim
