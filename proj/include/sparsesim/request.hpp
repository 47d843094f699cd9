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
#include <string>
#include <unordered_map>
#include <vector>

namespace sparsesim {

// Bit patterns over qubits: bit q of a pattern is the value of qubit q. Only
// used for masks and group bookkeeping; full-state indices put qubit 0 in the
// most significant position instead.
using Pattern = std::uint64_t;

inline Pattern qubit_bit(int q) { return Pattern{1} << q; }

// L groups of l = 2^|open_qubits| bitstrings: each group fixes every qubit
// outside open_qubits. Duplicate groups are allowed.
struct SparseStateRequest {
  int num_qubits = 0;
  std::vector<int> open_qubits;  // ascending; the first is the most significant in-group bit
  std::vector<Pattern> groups;   // values of the fixed qubits; open bits are zero

  Pattern fixed_mask() const;
  int group_size() const { return 1 << open_qubits.size(); }
  std::size_t num_groups() const { return groups.size(); }
  // Full bit pattern of bitstring mu in group g.
  Pattern bitstring(std::size_t g, int mu) const;
  // Throws ValidationError on unknown qubits, overlap, unsorted open qubits or
  // stray bits in a group.
  void validate() const;

  // Degenerate requests used by the single/batch/full modes.
  static SparseStateRequest full(int n);
  static SparseStateRequest single(int n, Pattern bits);
};

// '0'/'1' string with qubit 0 first.
std::string pattern_to_string(Pattern p, int n);
Pattern pattern_from_string(const std::string& s);

// Distinct projections of the request's groups onto subsets of the fixed
// qubits. table() is safe to call concurrently once every mask was prepared.
class RowTables {
 public:
  RowTables() : RowTables(0, {}) {}
  RowTables(Pattern fixed_mask, const std::vector<Pattern>& groups);
  explicit RowTables(const SparseStateRequest& request)
      : RowTables(request.fixed_mask(), request.groups) {}

  Pattern fixed_mask() const { return fixed_mask_; }
  void prepare(Pattern mask);
  // Sorted distinct values of (group & mask); mask must be prepared.
  const std::vector<Pattern>& table(Pattern mask) const;
  std::uint64_t rows(Pattern mask);
  // min(L, 2^popcount(mask)), the planner's cheap estimate.
  double estimate(Pattern mask) const;

 private:
  Pattern fixed_mask_ = 0;
  std::vector<Pattern> groups_;  // distinct, sorted
  std::unordered_map<Pattern, std::vector<Pattern>> tables_;
};

}  // namespace sparsesim
