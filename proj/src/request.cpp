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

#include "sparsesim/request.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sparsesim/error.hpp"

namespace sparsesim {

Pattern SparseStateRequest::fixed_mask() const {
  Pattern all = num_qubits >= 64 ? ~Pattern{0} : (Pattern{1} << num_qubits) - 1;
  for (int q : open_qubits) all &= ~qubit_bit(q);
  return all;
}

Pattern SparseStateRequest::bitstring(std::size_t g, int mu) const {
  Pattern p = groups[g];
  const int k = static_cast<int>(open_qubits.size());
  for (int i = 0; i < k; ++i) {
    if ((mu >> (k - 1 - i)) & 1) p |= qubit_bit(open_qubits[i]);
  }
  return p;
}

void SparseStateRequest::validate() const {
  if (num_qubits < 1 || num_qubits > 64) {
    throw ValidationError("request: qubit count must be in 1..64");
  }
  for (std::size_t i = 0; i < open_qubits.size(); ++i) {
    if (open_qubits[i] < 0 || open_qubits[i] >= num_qubits) {
      throw ValidationError("request: unknown open qubit " + std::to_string(open_qubits[i]));
    }
    if (i > 0 && open_qubits[i] <= open_qubits[i - 1]) {
      throw ValidationError("request: open qubits must be ascending and distinct");
    }
  }
  if (open_qubits.size() > 30) throw ValidationError("request: group size too large");
  if (groups.empty()) throw ValidationError("request: no groups");
  const Pattern mask = fixed_mask();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] & ~mask) {
      throw ValidationError("request: group " + std::to_string(g) +
                            " sets bits outside the fixed qubits");
    }
  }
}

SparseStateRequest SparseStateRequest::full(int n) {
  SparseStateRequest r;
  r.num_qubits = n;
  for (int q = 0; q < n; ++q) r.open_qubits.push_back(q);
  r.groups = {0};
  return r;
}

SparseStateRequest SparseStateRequest::single(int n, Pattern bits) {
  SparseStateRequest r;
  r.num_qubits = n;
  r.groups = {bits};
  return r;
}

std::string pattern_to_string(Pattern p, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q) {
    if (p & qubit_bit(q)) s[q] = '1';
  }
  return s;
}

Pattern pattern_from_string(const std::string& s) {
  if (s.size() > 64) throw ValidationError("bitstring longer than 64 qubits");
  Pattern p = 0;
  for (std::size_t q = 0; q < s.size(); ++q) {
    if (s[q] == '1') {
      p |= qubit_bit(static_cast<int>(q));
    } else if (s[q] != '0') {
      throw ValidationError("bitstring must contain only 0 and 1");
    }
  }
  return p;
}

RowTables::RowTables(Pattern fixed_mask, const std::vector<Pattern>& groups)
    : fixed_mask_(fixed_mask), groups_(groups) {
  if (groups_.empty()) groups_.push_back(0);
  std::sort(groups_.begin(), groups_.end());
  groups_.erase(std::unique(groups_.begin(), groups_.end()), groups_.end());
}

void RowTables::prepare(Pattern mask) {
  if (tables_.count(mask)) return;
  std::vector<Pattern> t;
  t.reserve(groups_.size());
  for (Pattern g : groups_) t.push_back(g & mask);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  tables_.emplace(mask, std::move(t));
}

const std::vector<Pattern>& RowTables::table(Pattern mask) const {
  auto it = tables_.find(mask);
  if (it == tables_.end()) throw ValidationError("row table not prepared");
  return it->second;
}

std::uint64_t RowTables::rows(Pattern mask) {
  prepare(mask);
  return table(mask).size();
}

double RowTables::estimate(Pattern mask) const {
  int bits = std::popcount(mask);
  return std::min(static_cast<double>(groups_.size()), std::ldexp(1.0, bits));
}

}  // namespace sparsesim
