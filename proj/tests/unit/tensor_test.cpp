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

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "../common.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/kernels.hpp"
#include "sparsesim/reference.hpp"
#include "sparsesim/rng.hpp"
#include "sparsesim/tensor.hpp"

namespace sparsesim {
namespace {

Tensor<cdouble> random_tensor(std::vector<Label> labels, std::vector<Index> dims, SplitMix64& rng) {
  Index size = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  std::vector<cdouble> data(static_cast<std::size_t>(size));
  for (auto& v : data) v = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
  return Tensor<cdouble>(std::move(labels), std::move(dims), std::move(data));
}

TEST(Tensor, DefaultIsScalarOne) {
  Tensor<cdouble> t;
  EXPECT_EQ(t.rank(), 0u);
  EXPECT_EQ(t.data()[0], cdouble(1.0));
}

TEST(Tensor, RejectsSizeMismatch) {
  EXPECT_THROW(Tensor<cdouble>({0, 1}, {2, 2}, std::vector<cdouble>(3)), ValidationError);
}

TEST(Tensor, PermuteThenBack) {
  SplitMix64 rng(1);
  auto t = random_tensor({3, 1, 7}, {2, 3, 4}, rng);
  std::vector<Label> order{7, 3, 1};
  auto p = t.permuted(order);
  EXPECT_EQ(p.dim_of(7), 4);
  std::vector<Label> back{3, 1, 7};
  auto q = p.permuted(back);
  ASSERT_EQ(q.size(), t.size());
  for (Index i = 0; i < t.size(); ++i) EXPECT_EQ(q.data()[i], t.data()[i]);
  std::vector<Index> idx{1, 2, 3};
  std::vector<Index> pidx{3, 1, 2};
  EXPECT_EQ(t.at(idx), p.at(pidx));
}

TEST(Tensor, SliceIndex) {
  Tensor<cdouble> t({0, 1}, {2, 2}, {1.0, 2.0, 3.0, 4.0});
  auto s = slice_index(t, 0, 1);
  ASSERT_EQ(s.rank(), 1u);
  EXPECT_EQ(s.data()[0], cdouble(3.0));
  EXPECT_EQ(s.data()[1], cdouble(4.0));
  EXPECT_THROW(slice_index(t, 5, 0), ValidationError);
  EXPECT_THROW(slice_index(t, 0, 2), ValidationError);
}

TEST(Contract, IdentityMatmulCountsEight) {
  MaddCounter counter;
  KernelOptions opts;
  opts.counter = &counter;
  Tensor<cdouble> a({0, 1}, {2, 2}, {1.0, 0.0, 0.0, 1.0});
  Tensor<cdouble> b({1, 2}, {2, 2}, {1.0, 0.0, 0.0, 1.0});
  auto c = contract_pair(a, b, opts);
  EXPECT_EQ(counter.value(), 8u);
  EXPECT_EQ(c.data()[0], cdouble(1.0));
  EXPECT_EQ(c.data()[1], cdouble(0.0));
}

TEST(Contract, MatchesSerialReference) {
  SplitMix64 rng(2);
  for (int t = 0; t < 40; ++t) {
    // Random labels from a pool of 8, dims 1..3, some shared.
    std::vector<Label> la, lb;
    std::vector<Index> da, db;
    std::vector<Index> dim(8);
    for (auto& d : dim) d = 1 + static_cast<Index>(uniform_index(rng, 3));
    for (Label l = 0; l < 8; ++l) {
      auto r = uniform_index(rng, 4);
      if (r == 1 || r == 3) {
        la.push_back(l);
        da.push_back(dim[l]);
      }
      if (r == 2 || r == 3) {
        lb.push_back(l);
        db.push_back(dim[l]);
      }
    }
    std::shuffle(la.begin(), la.end(), rng);
    auto ta = random_tensor(la, [&] {
      std::vector<Index> d;
      for (Label l : la) d.push_back(dim[l]);
      return d;
    }(), rng);
    auto tb = random_tensor(lb, db, rng);
    auto fast = contract_pair(ta, tb);
    auto slow = reference::contract_pair(ta, tb);
    ASSERT_EQ(std::vector<Label>(fast.labels().begin(), fast.labels().end()),
              std::vector<Label>(slow.labels().begin(), slow.labels().end()));
    EXPECT_LT(testing::max_abs_diff(fast.data(), slow.data()), 1e-13);
    auto fast32 = contract_pair(ta.cast<cfloat>(), tb.cast<cfloat>()).cast<cdouble>();
    EXPECT_LT(testing::max_abs_diff(fast32.data(), slow.data()), 1e-5);
  }
}

TEST(Contract, DimMismatchThrows) {
  Tensor<cdouble> a({0}, {2}, {1.0, 1.0});
  Tensor<cdouble> b({0}, {3}, {1.0, 1.0, 1.0});
  EXPECT_THROW(contract_pair(a, b), ValidationError);
}

TEST(Kernels, ThreadCountDoesNotChangeBits) {
  SplitMix64 rng(3);
  const Index m = 37, k = 64, n = 29, rows = 40;
  std::vector<cdouble> a(rows * m * k), b(rows * k * n);
  for (auto& v : a) v = {uniform01(rng), uniform01(rng)};
  for (auto& v : b) v = {uniform01(rng), uniform01(rng)};
  std::vector<kernels::RowPair> pairs;
  for (Index r = 0; r < rows; ++r) pairs.push_back({r, rows - 1 - r});
  std::vector<cdouble> c1(rows * m * n), c4(rows * m * n);
  kernels::gemm_batched(a.data(), b.data(), c1.data(), m, k, n, pairs, 1);
  kernels::gemm_batched(a.data(), b.data(), c4.data(), m, k, n, pairs, 4);
  EXPECT_EQ(c1, c4);
}

TEST(Svd, MatchesEigen) {
  SplitMix64 rng(4);
  for (auto [r, c] : {std::pair{4, 2}, {2, 4}, {3, 3}, {6, 5}, {1, 4}, {8, 8}}) {
    std::vector<cdouble> m(static_cast<std::size_t>(r * c));
    for (auto& v : m) v = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    auto ours = squared_singular_values(m, r, c);
    Eigen::MatrixXcd em(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) em(i, j) = m[i * c + j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(em);
    auto sv = svd.singularValues();
    ASSERT_EQ(ours.size(), static_cast<std::size_t>(sv.size()));
    for (int i = 0; i < sv.size(); ++i) EXPECT_NEAR(ours[i], sv(i) * sv(i), 1e-12);
  }
}

}  // namespace
}  // namespace sparsesim
