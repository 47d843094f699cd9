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

// OpenMP kernels. Every output element is produced by exactly one thread with
// a fixed summation order, so results are bit-identical for any thread count.

#include <span>

#include "sparsesim/tensor.hpp"

namespace sparsesim::kernels {

struct RowPair {
  Index a = 0;
  Index b = 0;
};

// out has dims dims[perm[0]], dims[perm[1]], ...; out[j...] = in[i...] where
// axis d of out is axis perm[d] of in.
template <typename T>
void permute(const T* in, std::span<const Index> dims, std::span<const int> perm,
             T* out, int threads);

// For every r: c[r] = a[pairs[r].a] * b[pairs[r].b] with a blocks m x k and b
// blocks k x n, all row-major and contiguous.
template <typename T>
void gemm_batched(const T* a, const T* b, T* c, Index m, Index k, Index n,
                  std::span<const RowPair> pairs, int threads);

// c (m x n) = a (m x k) * b (k x n).
template <typename T>
void gemm(const T* a, const T* b, T* c, Index m, Index k, Index n, int threads);

// Threads to use for a region of `work` scalar operations; 1 when nested.
int effective_threads(int requested, double work);

}  // namespace sparsesim::kernels
