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

#include "sparsesim/sampling.hpp"

#include <cmath>
#include <exception>
#include <random>

#include "sparsesim/error.hpp"

namespace sparsesim {

std::vector<GroupSpec> generate_groups(int n, std::span<const int> open_qubits, std::size_t L,
                                       std::uint64_t seed) {
  if (L < 1) throw ValidationError("generate_groups: L must be positive");
  std::vector<char> open(n, 0);
  for (int q : open_qubits) {
    if (q < 0 || q >= n) throw ValidationError("generate_groups: unknown open qubit");
    open[q] = 1;
  }
  std::mt19937_64 rng(seed);
  std::vector<GroupSpec> groups(L);
  for (std::size_t g = 0; g < L; ++g) {
    Pattern p = 0;
    for (int q = 0; q < n; ++q) {
      if (!open[q] && (rng() >> 63)) p |= qubit_bit(q);
    }
    groups[g] = {p, g};
  }
  return groups;
}

SparseStateRequest make_request(int n, std::span<const int> open_qubits, std::size_t L,
                                std::uint64_t seed) {
  SparseStateRequest req;
  req.num_qubits = n;
  req.open_qubits.assign(open_qubits.begin(), open_qubits.end());
  for (const GroupSpec& g : generate_groups(n, open_qubits, L, seed)) {
    req.groups.push_back(g.fixed_bits);
  }
  req.validate();
  return req;
}

NormEstimate estimate_norm(const SparseState& state) {
  if (state.request.groups.empty()) throw ValidationError("estimate_norm: empty state");
  NormEstimate e;
  for (std::size_t g = 0; g < state.request.num_groups(); ++g) {
    for (const cdouble& a : state.group(g)) e.sparse_norm += std::norm(a);
  }
  const double L = static_cast<double>(state.request.num_groups());
  const double l = state.request.group_size();
  e.normalization = std::ldexp(1.0, state.request.num_qubits) / (L * l) * e.sparse_norm;
  return e;
}

int frugal_sample(std::span<const cdouble> amps, SplitMix64& rng) {
  double total = 0.0;
  for (const cdouble& a : amps) total += std::norm(a);
  if (!(total > 0.0)) throw ValidationError("frugal_sample: all amplitudes are zero");
  double u = uniform01(rng) * total;
  int last = 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    double p = std::norm(amps[i]);
    if (p <= 0.0) continue;
    last = static_cast<int>(i);
    if (u < p) return last;
    u -= p;
  }
  return last;  // rounding at the upper edge
}

int metropolis_sample(std::span<const cdouble> amps, int steps, int burn_in, SplitMix64& rng) {
  if (!(steps > burn_in && burn_in >= 0)) {
    throw ValidationError("metropolis_sample: need steps > burn_in >= 0");
  }
  bool any = false;
  for (const cdouble& a : amps) any = any || std::norm(a) > 0.0;
  if (!any) throw ValidationError("metropolis_sample: all amplitudes are zero");
  const auto l = static_cast<std::uint64_t>(amps.size());
  auto x = static_cast<int>(uniform_index(rng, l));
  double px = std::norm(amps[x]);
  for (int s = 0; s < steps; ++s) {
    auto y = static_cast<int>(uniform_index(rng, l));
    double py = std::norm(amps[y]);
    double u = uniform01(rng);
    if (py >= px || u * px < py) {
      x = y;
      px = py;
    }
  }
  return x;
}

const char* sampler_name(Sampler s) { return s == Sampler::kFrugal ? "frugal" : "metropolis"; }

Sampler sampler_from_name(const std::string& name) {
  if (name == "frugal") return Sampler::kFrugal;
  if (name == "metropolis") return Sampler::kMetropolis;
  throw ValidationError("unknown sampler '" + name + "'");
}

SampleSet sample_set(const SparseState& state, std::uint64_t seed, const SampleOptions& options) {
  const std::size_t L = state.request.num_groups();
  SampleSet out;
  out.num_qubits = state.request.num_qubits;
  out.seed = seed;
  out.sampler = options.sampler;
  out.path_fraction = state.path_fraction;
  out.budget = state.budget;
  out.bitstrings.resize(L);
  long long bad_group = -1;
  std::exception_ptr error;
#pragma omp parallel for num_threads(std::max(options.workers, 1)) schedule(static)
  for (long long g = 0; g < static_cast<long long>(L); ++g) {
    try {
      SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(g)));
      auto amps = state.group(g);
      int mu = options.sampler == Sampler::kFrugal
                   ? frugal_sample(amps, rng)
                   : metropolis_sample(amps, options.steps, options.burn_in, rng);
      out.bitstrings[g] = state.request.bitstring(g, mu);
    } catch (...) {
#pragma omp critical
      {
        if (!error || g < bad_group) {
          error = std::current_exception();
          bad_group = g;
        }
      }
    }
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const Error& e) {
      throw ValidationError("group " + std::to_string(bad_group) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sparsesim
