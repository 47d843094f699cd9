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

#include <atomic>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sparsesim {

using Label = std::int32_t;
using Index = std::int64_t;
using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

// Dense complex tensor over labeled indices, row-major in label order.
// Value type: copies are deep, there is no shared state.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  // Rank-0 tensor holding 1.
  Tensor() : data_{T(1)} {}
  Tensor(std::vector<Label> labels, std::vector<Index> dims, std::vector<T> data);

  static Tensor scalar(T value) {
    Tensor t;
    t.data_[0] = value;
    return t;
  }

  std::span<const Label> labels() const { return labels_; }
  std::span<const Index> dims() const { return dims_; }
  std::span<const T> data() const { return data_; }
  std::size_t rank() const { return labels_.size(); }
  Index size() const { return static_cast<Index>(data_.size()); }

  bool has_label(Label label) const;
  // Position of `label` in labels(), or -1.
  int position(Label label) const;
  Index dim_of(Label label) const;

  const T& at(std::span<const Index> index) const;

  // Same tensor with labels reordered to `order` (a permutation of labels()).
  Tensor permuted(std::span<const Label> order) const;
  Tensor relabeled(Label from, Label to) const;
  Tensor scaled(T factor) const;

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
    return Tensor<U>(labels_, dims_, std::move(out));
  }

 private:
  std::vector<Label> labels_;
  std::vector<Index> dims_;
  std::vector<T> data_;
};

// Thread-safe multiply-add accumulator for contraction instrumentation.
class MaddCounter {
 public:
  void add(std::uint64_t n) { value_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return value_.load(std::memory_order_relaxed); }
  void reset() { value_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> value_{0};
};

struct KernelOptions {
  int threads = 1;
  MaddCounter* counter = nullptr;
};

// Sum over shared labels. Result labels: free labels of `a` in a's order, then
// free labels of `b` in b's order. Adds prod(out dims) * prod(shared dims) to
// the counter. Throws ValidationError on a shared-label dim mismatch.
template <typename T>
Tensor<T> contract_pair(const Tensor<T>& a, const Tensor<T>& b,
                        const KernelOptions& options = {});

// Fix `label` to `value` and drop it. Throws ValidationError when the label is
// absent or the value is out of range.
template <typename T>
Tensor<T> slice_index(const Tensor<T>& t, Label label, Index value);

// Eigenvalues of m^H m for a row-major rows x cols matrix, descending; the
// min(rows, cols) values of the nonzero spectrum. Closed form for a 2x2 Gram
// matrix, cyclic Jacobi otherwise.
std::vector<double> squared_singular_values(std::span<const cdouble> m, int rows,
                                            int cols);

extern template class Tensor<cfloat>;
extern template class Tensor<cdouble>;

}  // namespace sparsesim
