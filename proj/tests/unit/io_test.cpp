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

#include "../common.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/io.hpp"

namespace sparsesim {
namespace {

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

SparseState sample_state() {
  Circuit c = generate_random_circuit(2, 3, 4, "EFGH", 1);
  NetworkRecipe recipe;
  recipe.breaks = testing::random_breaks(c, 1, 3, 2, c.num_moments());
  TensorNetwork tn = prepare_network(c, recipe);
  auto req = make_request(6, std::vector<int>{4, 5}, 9, 2);
  SparseState s = contract_sparse(tn, testing::quick_plan(tn, req, 1), req);
  s.budget = tn.budget;
  return s;
}

TEST(Io, AmplitudeFileRoundTrip) {
  SparseState s = sample_state();
  nlohmann::json header{{"seed", 5}};
  std::string bytes = encode_amplitudes(s, header);
  EXPECT_EQ(bytes.substr(0, 8), "SPAMP001");
  nlohmann::json back_header;
  SparseState back = decode_amplitudes(bytes, &back_header);
  EXPECT_EQ(back_header["seed"], 5);
  EXPECT_EQ(back.request.groups, s.request.groups);
  EXPECT_EQ(back.request.open_qubits, s.request.open_qubits);
  EXPECT_EQ(back.budget, s.budget);
  for (std::size_t g = 0; g < s.request.num_groups(); ++g) {
    for (int mu = 0; mu < s.request.group_size(); ++mu) EXPECT_EQ(back.amplitude(g, mu), s.amplitude(g, mu));
  }
  EXPECT_EQ(encode_amplitudes(back, back_header), bytes);
  EXPECT_THROW(decode_amplitudes(bytes.substr(0, bytes.size() - 3)), ParseError);
  EXPECT_THROW(decode_amplitudes("NOTAMPS0........"), ParseError);
  EXPECT_NE(amplitudes_csv(s).find("group,mu,bitstring,re,im"), std::string::npos);
}

TEST(Io, SamplesFileRoundTrip) {
  SampleSet set;
  set.num_qubits = 5;
  set.bitstrings = {0, qubit_bit(0), qubit_bit(4) | qubit_bit(2)};
  set.seed = 11;
  set.sampler = Sampler::kMetropolis;
  set.budget = {3, {0.9}};
  set.path_fraction = 0.5;
  std::string text = encode_samples(set, {});
  EXPECT_NE(text.find("\n00000\n10000\n00101\n"), std::string::npos);
  SampleSet back = decode_samples(text);
  EXPECT_EQ(back.bitstrings, set.bitstrings);
  EXPECT_EQ(back.seed, 11u);
  EXPECT_EQ(back.sampler, Sampler::kMetropolis);
  EXPECT_EQ(back.budget, set.budget);
  EXPECT_THROW(decode_samples("#{\"num_qubits\":3}\n0101\n"), ParseError);
  EXPECT_THROW(decode_samples("#{\"num_qubits\":3}\n01x\n"), ParseError);
  EXPECT_THROW(decode_samples("010\n"), ParseError);
}

TEST(Io, PlanJsonRoundTrip) {
  Circuit c = generate_random_circuit(3, 3, 6, "EFGH", 4);
  NetworkRecipe recipe;
  TensorNetwork tn = prepare_network(c, recipe);
  ContractionPlan plan = testing::quick_plan(tn, SparseStateRequest::full(9), 1, 2, 0, -1, true);
  auto j = plan_to_json(plan);
  for (const char* key : {"order", "split_cycle", "global_slices", "local_head", "local_tail",
                          "companions", "space_budget"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(plan_from_json(nlohmann::json::parse(j.dump())), plan);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse("{\"order\": 3}")), ParseError);
}

TEST(Io, StatsJsonHasContractFields) {
  StatsReport s;
  s.fidelity = 0.5;
  s.linear_xeb = 0.4;
  s.linear_xeb_stderr = 0.01;
  s.porter_thomas.bin_edges = {0, 1};
  s.porter_thomas.counts = {3};
  auto j = stats_to_json(s);
  for (const char* key : {"fidelity", "linear_xeb", "log_xeb", "entropy_true", "entropy_sampled",
                          "pt_histogram", "pt_ks"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  StatsReport back = stats_from_json(j);
  EXPECT_EQ(back.fidelity, 0.5);
  EXPECT_EQ(back.linear_xeb_stderr, 0.01);
  EXPECT_EQ(back.porter_thomas.counts, s.porter_thomas.counts);
}

TEST(Io, NetworkDumpListsTensorsAndEdges) {
  Circuit c = generate_random_circuit(2, 2, 3, "AC", 5);
  NetworkRecipe recipe;
  TensorNetwork tn = prepare_network(c, recipe);
  auto j = network_to_json(tn, true);
  EXPECT_EQ(j["tensors"].size(), static_cast<std::size_t>(tn.num_alive()));
  EXPECT_TRUE(j["tensors"][0].contains("data"));
  EXPECT_EQ(j["output_labels"].size(), 4u);
}

}  // namespace
}  // namespace sparsesim
