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

#include <string>
#include <string_view>

#include "json.hpp"
#include "sparsesim/engine.hpp"
#include "sparsesim/network.hpp"
#include "sparsesim/oracle.hpp"
#include "sparsesim/pipeline.hpp"
#include "sparsesim/planner.hpp"
#include "sparsesim/sampling.hpp"

namespace sparsesim {

inline constexpr const char* kToolVersion = "sparsesim 0.1.0";

std::string sha256_hex(std::string_view data);
// Throws ValidationError when the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

nlohmann::json budget_to_json(const FidelityBudget& b);
FidelityBudget budget_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const ContractionPlan& plan);
// Reads the plan fields; unknown keys are ignored.
ContractionPlan plan_from_json(const nlohmann::json& j);

nlohmann::json recipe_to_json(const NetworkRecipe& r);
NetworkRecipe recipe_from_json(const nlohmann::json& j);
nlohmann::json request_spec_to_json(const RequestSpec& r);
RequestSpec request_spec_from_json(const nlohmann::json& j);

nlohmann::json complexity_to_json(const ComplexityReport& r);
nlohmann::json network_to_json(const TensorNetwork& tn, bool with_data = false);

nlohmann::json stats_to_json(const StatsReport& s);
StatsReport stats_from_json(const nlohmann::json& j);

// Amplitude file: "SPAMP001", uint64 header length, JSON header, L uint64
// group patterns, then L * l (re, im) float64 pairs; all little-endian.
std::string encode_amplitudes(const SparseState& state, const nlohmann::json& header);
SparseState decode_amplitudes(std::string_view bytes, nlohmann::json* header = nullptr);
std::string amplitudes_csv(const SparseState& state);

// Samples file: '#' + JSON header line, then one 0/1 line per sample.
std::string encode_samples(const SampleSet& samples, const nlohmann::json& header);
SampleSet decode_samples(std::string_view text, nlohmann::json* header = nullptr);

}  // namespace sparsesim
