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

// Serial reference implementations. They index by label through generic
// multi-index loops and share no code with the OpenMP kernels; tests and the
// benchmark compare the two.

#include <span>

#include "sparsesim/circuit.hpp"
#include "sparsesim/tensor.hpp"

namespace sparsesim::reference {

// Same label convention as sparsesim::contract_pair.
template <typename T>
Tensor<T> contract_pair(const Tensor<T>& a, const Tensor<T>& b);

// psi has 2^n entries, qubit 0 is the most significant bit.
void apply_single(std::span<cdouble> psi, int n, int q, const Matrix2& m);
void apply_two(std::span<cdouble> psi, int n, int qa, int qb, const Matrix4& m);

}  // namespace sparsesim::reference
