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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "../common.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/sampling.hpp"

namespace sparsesim {
namespace {

// Expected-count chi-square against |amps|^2.
double chi_square(const std::vector<cdouble>& amps, const std::vector<int>& counts, int draws) {
  double z = 0.0;
  for (auto& a : amps) z += std::norm(a);
  double chi = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    double e = draws * std::norm(amps[i]) / z;
    chi += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi;
}

const std::vector<cdouble> kAmps{{0.1, 0.2}, {0.5, 0.0}, {0.0, -0.3}, {0.05, 0.05},
                                 {0.4, 0.1}, {0.2, 0.2}, {0.0, 0.6},  {0.1, -0.1}};

TEST(Sampling, FrugalFollowsWeights) {
  SplitMix64 rng(1);
  std::vector<int> counts(8, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[frugal_sample(kAmps, rng)];
  EXPECT_LT(chi_square(kAmps, counts, draws), 24.3);  // 7 dof, p = 0.001
}

TEST(Sampling, MetropolisFollowsWeights) {
  SplitMix64 rng(2);
  std::vector<int> counts(8, 0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) ++counts[metropolis_sample(kAmps, 60, 30, rng)];
  EXPECT_LT(chi_square(kAmps, counts, draws), 24.3);
}

TEST(Sampling, ZeroWeightsFail) {
  SplitMix64 rng(3);
  std::vector<cdouble> zeros(4, 0.0);
  EXPECT_THROW(frugal_sample(zeros, rng), ValidationError);
  EXPECT_THROW(metropolis_sample(kAmps, 10, 10, rng), ValidationError);
}

TEST(Sampling, GroupsAreDeterministic) {
  std::vector<int> open{1, 4};
  auto a = generate_groups(6, open, 100, 9);
  auto b = generate_groups(6, open, 100, 9);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].fixed_bits, b[i].fixed_bits);
    EXPECT_EQ(a[i].fixed_bits & (qubit_bit(1) | qubit_bit(4)), 0u);
  }
  auto req = make_request(6, open, 100, 9);
  EXPECT_NO_THROW(req.validate());
  EXPECT_EQ(req.group_size(), 4);
}

SparseState tiny_state(std::uint64_t seed, std::size_t groups, std::vector<int> open) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", seed);
  NetworkRecipe recipe;
  TensorNetwork tn = prepare_network(c, recipe);
  auto req = make_request(9, open, groups, seed);
  return contract_sparse(tn, testing::quick_plan(tn, req, seed), req);
}

TEST(Sampling, SampleSetIsSeededAndWorkerInvariant) {
  SparseState s = tiny_state(4, 500, {6, 7, 8});
  SampleOptions one, four;
  four.workers = 4;
  auto a = sample_set(s, 77, one);
  auto b = sample_set(s, 77, four);
  EXPECT_EQ(a.bitstrings, b.bitstrings);
  EXPECT_EQ(a.bitstrings.size(), 500u);
  EXPECT_NE(sample_set(s, 78, one).bitstrings, a.bitstrings);
  for (std::size_t g = 0; g < a.bitstrings.size(); ++g) {
    EXPECT_EQ(a.bitstrings[g] & s.request.fixed_mask(), s.request.groups[g]);
  }
  SampleOptions mh;
  mh.sampler = Sampler::kMetropolis;
  EXPECT_EQ(sample_set(s, 5, mh).bitstrings, sample_set(s, 5, mh).bitstrings);
}

TEST(Sampling, SingleBitstringGroupsAreFixed) {
  SparseState s = tiny_state(5, 20, {});
  auto set = sample_set(s, 1);
  for (std::size_t g = 0; g < 20; ++g) EXPECT_EQ(set.bitstrings[g], s.request.groups[g]);
}

TEST(Sampling, NormOfExactFullStateIsOne) {
  SparseState s = tiny_state(6, 1, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  NormEstimate e = estimate_norm(s);
  EXPECT_NEAR(e.sparse_norm, 1.0, 1e-12);
  EXPECT_NEAR(e.normalization, 1.0, 1e-12);
}

TEST(Sampling, NormScalesWithCoverage) {
  SparseState s = tiny_state(7, 64, {7, 8});
  NormEstimate e = estimate_norm(s);
  double direct = 0.0;
  for (std::size_t g = 0; g < 64; ++g) {
    for (auto a : s.group(g)) direct += std::norm(a);
  }
  EXPECT_NEAR(e.sparse_norm, direct, 1e-12);
  EXPECT_NEAR(e.normalization, direct * 512.0 / (64 * 4), 1e-12);
}

TEST(Sampling, SamplerNames) {
  EXPECT_EQ(sampler_from_name("frugal"), Sampler::kFrugal);
  EXPECT_EQ(sampler_from_name(sampler_name(Sampler::kMetropolis)), Sampler::kMetropolis);
  EXPECT_THROW(sampler_from_name("gibbs"), ValidationError);
}

}  // namespace
}  // namespace sparsesim
