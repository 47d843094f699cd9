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

#include "sparsesim/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace sparsesim::kernels {

int effective_threads(int requested, double work) {
  if (requested <= 1 || omp_in_parallel()) return 1;
  // Below ~32k scalar ops the fork/join dominates.
  if (work < 32768.0) return 1;
  return requested;
}

template <typename T>
void permute(const T* in, std::span<const Index> dims, std::span<const int> perm, T* out,
             int threads) {
  const int rank = static_cast<int>(dims.size());
  Index total = 1;
  for (Index d : dims) total *= d;
  if (rank == 0) {
    out[0] = in[0];
    return;
  }
  // Input stride of each output axis.
  std::vector<Index> in_stride(rank), stride_of_out(rank), out_dims(rank);
  Index s = 1;
  for (int d = rank - 1; d >= 0; --d) {
    in_stride[d] = s;
    s *= dims[d];
  }
  for (int d = 0; d < rank; ++d) {
    out_dims[d] = dims[perm[d]];
    stride_of_out[d] = in_stride[perm[d]];
  }
  const Index inner = out_dims[rank - 1];
  const Index inner_stride = stride_of_out[rank - 1];
  const Index outer = total / inner;
  const int nt = effective_threads(threads, static_cast<double>(total));

#pragma omp parallel for num_threads(nt) schedule(static)
  for (Index o = 0; o < outer; ++o) {
    Index rem = o, offset = 0;
    for (int d = rank - 2; d >= 0; --d) {
      offset += (rem % out_dims[d]) * stride_of_out[d];
      rem /= out_dims[d];
    }
    T* dst = out + o * inner;
    if (inner_stride == 1) {
      std::copy(in + offset, in + offset + inner, dst);
    } else {
      for (Index i = 0; i < inner; ++i) dst[i] = in[offset + i * inner_stride];
    }
  }
}

namespace {

// c (m x n) = a (m x k) * b (k x n); complex arithmetic spelled out on the
// interleaved real/imaginary parts so the inner loop vectorizes.
template <typename T>
inline void gemm_rows(const T* a, const T* b, T* c, Index row_begin, Index row_end, Index k,
                      Index n) {
  using R = typename T::value_type;
  for (Index i = row_begin; i < row_end; ++i) {
    R* cr = reinterpret_cast<R*>(c + i * n);
    std::fill(cr, cr + 2 * n, R(0));
    for (Index p = 0; p < k; ++p) {
      const R ar = a[i * k + p].real();
      const R ai = a[i * k + p].imag();
      const R* br = reinterpret_cast<const R*>(b + p * n);
#pragma omp simd
      for (Index j = 0; j < n; ++j) {
        const R xr = br[2 * j], xi = br[2 * j + 1];
        cr[2 * j] += ar * xr - ai * xi;
        cr[2 * j + 1] += ar * xi + ai * xr;
      }
    }
  }
}

}  // namespace

template <typename T>
void gemm(const T* a, const T* b, T* c, Index m, Index k, Index n, int threads) {
  const int nt = effective_threads(threads, 4.0 * m * k * n);
  if (nt <= 1 || m == 1) {
    gemm_rows(a, b, c, 0, m, k, n);
    return;
  }
#pragma omp parallel for num_threads(nt) schedule(static)
  for (Index i = 0; i < m; ++i) gemm_rows(a, b, c, i, i + 1, k, n);
}

template <typename T>
void gemm_batched(const T* a, const T* b, T* c, Index m, Index k, Index n,
                  std::span<const RowPair> pairs, int threads) {
  const Index rows = static_cast<Index>(pairs.size());
  const Index items = rows * m;
  const int nt = effective_threads(threads, 4.0 * static_cast<double>(items) * k * n);
#pragma omp parallel for num_threads(nt) schedule(static)
  for (Index it = 0; it < items; ++it) {
    const Index r = it / m, i = it % m;
    gemm_rows(a + pairs[r].a * m * k, b + pairs[r].b * k * n, c + r * m * n, i, i + 1, k, n);
  }
}

template void permute(const cfloat*, std::span<const Index>, std::span<const int>, cfloat*, int);
template void permute(const cdouble*, std::span<const Index>, std::span<const int>, cdouble*,
                      int);
template void gemm(const cfloat*, const cfloat*, cfloat*, Index, Index, Index, int);
template void gemm(const cdouble*, const cdouble*, cdouble*, Index, Index, Index, int);
template void gemm_batched(const cfloat*, const cfloat*, cfloat*, Index, Index, Index,
                           std::span<const RowPair>, int);
template void gemm_batched(const cdouble*, const cdouble*, cdouble*, Index, Index, Index,
                           std::span<const RowPair>, int);

}  // namespace sparsesim::kernels
