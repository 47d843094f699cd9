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

#include "sparsesim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparsesim/error.hpp"
#include "sparsesim/kernels.hpp"

namespace sparsesim {

template <typename T>
Tensor<T>::Tensor(std::vector<Label> labels, std::vector<Index> dims, std::vector<T> data)
    : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
  if (labels_.size() != dims_.size()) {
    throw ValidationError("tensor: labels and dims differ in length");
  }
  Index size = 1;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] <= 0) throw ValidationError("tensor: non-positive dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) {
        throw ValidationError("tensor: duplicate label " + std::to_string(labels_[i]));
      }
    }
    size *= dims_[i];
  }
  if (static_cast<Index>(data_.size()) != size) {
    throw ValidationError("tensor: data size " + std::to_string(data_.size()) +
                          " does not match dims (" + std::to_string(size) + ")");
  }
}

template <typename T>
bool Tensor<T>::has_label(Label label) const {
  return position(label) >= 0;
}

template <typename T>
int Tensor<T>::position(Label label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

template <typename T>
Index Tensor<T>::dim_of(Label label) const {
  int p = position(label);
  if (p < 0) throw ValidationError("tensor: no label " + std::to_string(label));
  return dims_[p];
}

template <typename T>
const T& Tensor<T>::at(std::span<const Index> index) const {
  if (index.size() != dims_.size()) throw ValidationError("tensor: index rank mismatch");
  Index offset = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (index[i] < 0 || index[i] >= dims_[i]) throw ValidationError("tensor: index out of range");
    offset = offset * dims_[i] + index[i];
  }
  return data_[offset];
}

template <typename T>
Tensor<T> Tensor<T>::permuted(std::span<const Label> order) const {
  if (order.size() != labels_.size()) throw ValidationError("tensor: bad permutation");
  std::vector<int> perm(order.size());
  std::vector<Index> dims(order.size());
  bool identity = true;
  for (std::size_t d = 0; d < order.size(); ++d) {
    int p = position(order[d]);
    if (p < 0) throw ValidationError("tensor: bad permutation");
    perm[d] = p;
    dims[d] = dims_[p];
    identity = identity && p == static_cast<int>(d);
  }
  if (identity) return *this;
  std::vector<T> out(data_.size());
  kernels::permute(data_.data(), std::span<const Index>(dims_), std::span<const int>(perm),
                   out.data(), 1);
  return Tensor(std::vector<Label>(order.begin(), order.end()), std::move(dims), std::move(out));
}

template <typename T>
Tensor<T> Tensor<T>::relabeled(Label from, Label to) const {
  Tensor out = *this;
  int p = position(from);
  if (p < 0) throw ValidationError("tensor: no label " + std::to_string(from));
  if (from != to && has_label(to)) throw ValidationError("tensor: relabel collides");
  out.labels_[p] = to;
  return out;
}

template <typename T>
Tensor<T> Tensor<T>::scaled(T factor) const {
  Tensor out = *this;
  for (auto& v : out.data_) v *= factor;
  return out;
}

template class Tensor<cfloat>;
template class Tensor<cdouble>;

template <typename T>
Tensor<T> contract_pair(const Tensor<T>& a, const Tensor<T>& b, const KernelOptions& options) {
  std::vector<Label> free_a, shared, free_b;
  for (Label l : a.labels()) {
    if (b.has_label(l)) {
      if (a.dim_of(l) != b.dim_of(l)) {
        throw ValidationError("contract_pair: dimension mismatch on label " + std::to_string(l));
      }
      shared.push_back(l);
    } else {
      free_a.push_back(l);
    }
  }
  for (Label l : b.labels()) {
    if (!a.has_label(l)) free_b.push_back(l);
  }
  Index m = 1, k = 1, n = 1;
  std::vector<Label> out_labels;
  std::vector<Index> out_dims;
  for (Label l : free_a) {
    m *= a.dim_of(l);
    out_labels.push_back(l);
    out_dims.push_back(a.dim_of(l));
  }
  for (Label l : shared) k *= a.dim_of(l);
  for (Label l : free_b) {
    n *= b.dim_of(l);
    out_labels.push_back(l);
    out_dims.push_back(b.dim_of(l));
  }

  std::vector<Label> order_a = free_a;
  order_a.insert(order_a.end(), shared.begin(), shared.end());
  std::vector<Label> order_b = shared;
  order_b.insert(order_b.end(), free_b.begin(), free_b.end());
  Tensor<T> pa = a.permuted(order_a);
  Tensor<T> pb = b.permuted(order_b);

  std::vector<T> out(static_cast<std::size_t>(m * n));
  kernels::gemm(pa.data().data(), pb.data().data(), out.data(), m, k, n, options.threads);
  if (options.counter) options.counter->add(static_cast<std::uint64_t>(m * n * k));
  return Tensor<T>(std::move(out_labels), std::move(out_dims), std::move(out));
}

template <typename T>
Tensor<T> slice_index(const Tensor<T>& t, Label label, Index value) {
  int p = t.position(label);
  if (p < 0) throw ValidationError("slice_index: no label " + std::to_string(label));
  auto dims = t.dims();
  if (value < 0 || value >= dims[p]) throw ValidationError("slice_index: value out of range");
  Index outer = 1, inner = 1;
  for (int i = 0; i < p; ++i) outer *= dims[i];
  for (std::size_t i = p + 1; i < dims.size(); ++i) inner *= dims[i];
  std::vector<T> out(static_cast<std::size_t>(outer * inner));
  auto data = t.data();
  for (Index o = 0; o < outer; ++o) {
    const T* src = data.data() + (o * dims[p] + value) * inner;
    std::copy(src, src + inner, out.begin() + o * inner);
  }
  std::vector<Label> labels(t.labels().begin(), t.labels().end());
  std::vector<Index> new_dims(dims.begin(), dims.end());
  labels.erase(labels.begin() + p);
  new_dims.erase(new_dims.begin() + p);
  return Tensor<T>(std::move(labels), std::move(new_dims), std::move(out));
}

template Tensor<cfloat> contract_pair(const Tensor<cfloat>&, const Tensor<cfloat>&,
                                      const KernelOptions&);
template Tensor<cdouble> contract_pair(const Tensor<cdouble>&, const Tensor<cdouble>&,
                                       const KernelOptions&);
template Tensor<cfloat> slice_index(const Tensor<cfloat>&, Label, Index);
template Tensor<cdouble> slice_index(const Tensor<cdouble>&, Label, Index);

namespace {

// Cyclic Jacobi on a Hermitian matrix; returns its eigenvalues.
std::vector<double> hermitian_eigenvalues(std::vector<cdouble> h, int n) {
  auto at = [&](int i, int j) -> cdouble& { return h[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = std::norm(at(i, j));
        total += v;
        if (i != j) off += v;
      }
    }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cdouble hpq = at(p, q);
        double abs_pq = std::abs(hpq);
        if (abs_pq < 1e-300) continue;
        // Unitary rotation in the (p, q) plane zeroing h(p, q).
        cdouble phase = hpq / abs_pq;
        double app = at(p, p).real(), aqq = at(q, q).real();
        double tau = (aqq - app) / (2.0 * abs_pq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        // Columns: h <- h J, J = [[c, s*phase], [-s*conj(phase), c]] acting on p, q.
        for (int k = 0; k < n; ++k) {
          cdouble hkp = at(k, p), hkq = at(k, q);
          at(k, p) = c * hkp - s * std::conj(phase) * hkq;
          at(k, q) = s * phase * hkp + c * hkq;
        }
        for (int k = 0; k < n; ++k) {
          cdouble hpk = at(p, k), hqk = at(q, k);
          at(p, k) = c * hpk - s * phase * hqk;
          at(q, k) = s * std::conj(phase) * hpk + c * hqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = at(i, i).real();
  return values;
}

}  // namespace

std::vector<double> squared_singular_values(std::span<const cdouble> m, int rows, int cols) {
  if (rows <= 0 || cols <= 0 || static_cast<Index>(m.size()) != Index{rows} * cols) {
    throw ValidationError("squared_singular_values: bad shape");
  }
  // Gram matrix on the smaller side.
  const bool right = cols <= rows;
  const int g = right ? cols : rows;
  std::vector<cdouble> gram(static_cast<std::size_t>(g) * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      cdouble sum = 0.0;
      if (right) {
        for (int r = 0; r < rows; ++r) sum += std::conj(m[r * cols + i]) * m[r * cols + j];
      } else {
        for (int c = 0; c < cols; ++c) sum += m[i * cols + c] * std::conj(m[j * cols + c]);
      }
      gram[i * g + j] = sum;
    }
  }
  std::vector<double> values;
  if (g == 1) {
    values = {gram[0].real()};
  } else if (g == 2) {
    double a = gram[0].real(), d = gram[3].real();
    double mean = 0.5 * (a + d);
    double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(gram[1]));
    values = {mean + rad, mean - rad};
  } else {
    values = hermitian_eigenvalues(std::move(gram), g);
  }
  for (auto& v : values) v = std::max(v, 0.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

}  // namespace sparsesim
