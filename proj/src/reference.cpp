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

#include "sparsesim/reference.hpp"

#include <string>

#include "sparsesim/error.hpp"

namespace sparsesim::reference {

namespace {

// Odometer increment; false after the last index.
bool next(std::vector<Index>& idx, const std::vector<Index>& dims) {
  for (int d = static_cast<int>(idx.size()) - 1; d >= 0; --d) {
    if (++idx[d] < dims[d]) return true;
    idx[d] = 0;
  }
  return false;
}

}  // namespace

template <typename T>
Tensor<T> contract_pair(const Tensor<T>& a, const Tensor<T>& b) {
  std::vector<Label> out_labels, shared;
  std::vector<Index> out_dims, shared_dims;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    Label l = a.labels()[i];
    if (b.has_label(l)) {
      if (b.dim_of(l) != a.dims()[i]) throw ValidationError("reference: dim mismatch");
      shared.push_back(l);
      shared_dims.push_back(a.dims()[i]);
    } else {
      out_labels.push_back(l);
      out_dims.push_back(a.dims()[i]);
    }
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    Label l = b.labels()[i];
    if (!a.has_label(l)) {
      out_labels.push_back(l);
      out_dims.push_back(b.dims()[i]);
    }
  }
  Index total = 1;
  for (Index d : out_dims) total *= d;
  std::vector<T> data;
  data.reserve(static_cast<std::size_t>(total));

  auto value_of = [](Label l, const std::vector<Label>& labels, const std::vector<Index>& idx) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == l) return idx[i];
    }
    return Index{-1};
  };
  auto gather = [&](const Tensor<T>& t, const std::vector<Index>& out_idx,
                    const std::vector<Index>& shared_idx) {
    std::vector<Index> idx(t.rank());
    for (std::size_t i = 0; i < t.rank(); ++i) {
      Label l = t.labels()[i];
      Index v = value_of(l, out_labels, out_idx);
      idx[i] = v >= 0 ? v : value_of(l, shared, shared_idx);
    }
    return t.at(idx);
  };

  std::vector<Index> out_idx(out_dims.size(), 0);
  do {
    T sum{};
    std::vector<Index> shared_idx(shared.size(), 0);
    do {
      sum += gather(a, out_idx, shared_idx) * gather(b, out_idx, shared_idx);
    } while (next(shared_idx, shared_dims));
    data.push_back(sum);
  } while (next(out_idx, out_dims));
  return Tensor<T>(std::move(out_labels), std::move(out_dims), std::move(data));
}

template Tensor<cfloat> contract_pair(const Tensor<cfloat>&, const Tensor<cfloat>&);
template Tensor<cdouble> contract_pair(const Tensor<cdouble>&, const Tensor<cdouble>&);

void apply_single(std::span<cdouble> psi, int n, int q, const Matrix2& m) {
  const std::size_t bit = std::size_t{1} << (n - 1 - q);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    cdouble x0 = psi[i], x1 = psi[i | bit];
    psi[i] = m[0] * x0 + m[1] * x1;
    psi[i | bit] = m[2] * x0 + m[3] * x1;
  }
}

void apply_two(std::span<cdouble> psi, int n, int qa, int qb, const Matrix4& m) {
  const std::size_t ba = std::size_t{1} << (n - 1 - qa);
  const std::size_t bb = std::size_t{1} << (n - 1 - qb);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if ((i & ba) || (i & bb)) continue;
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    cdouble x[4];
    for (int r = 0; r < 4; ++r) x[r] = psi[idx[r]];
    for (int r = 0; r < 4; ++r) {
      cdouble sum = 0.0;
      for (int c = 0; c < 4; ++c) sum += m[r * 4 + c] * x[c];
      psi[idx[r]] = sum;
    }
  }
}

}  // namespace sparsesim::reference
