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

#include "sparsesim/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <string>

#include "sparsesim/error.hpp"
#include "sparsesim/kernels.hpp"

namespace sparsesim {

std::span<const cdouble> SparseState::group(std::size_t g) const {
  const std::size_t l = static_cast<std::size_t>(request.group_size());
  return std::span<const cdouble>(amplitudes).subspan(group_row.at(g) * l, l);
}

ContractionPlan plan_from_order(const ContractionOrder& order) {
  ContractionPlan plan;
  plan.order = order;
  return plan;
}

namespace {

// Dense labels plus a row dimension over the fixed output qubits in qmask.
template <typename T>
struct ExecTensor {
  std::vector<Label> labels;
  std::vector<Index> dims;
  Pattern qmask = 0;
  const std::vector<Pattern>* rows = nullptr;
  std::vector<T> data;

  Index dense() const {
    Index d = 1;
    for (Index x : dims) d *= x;
    return d;
  }
  Index num_rows() const { return static_cast<Index>(rows->size()); }
};

template <typename T>
class Executor {
 public:
  Executor(const TensorNetwork& tn, const ContractionPlan& plan, const SparseStateRequest& req,
           ExecStats* stats, int threads)
      : tn_(tn), plan_(plan), req_(req), tables_(req), stats_(stats), threads_(threads) {
    validate_plan(tn, plan);
    split_ = split_head_tail(tn, plan.split_cycle);
    head_result_ = head_result_id(split_, plan);
    fixed_mask_ = req.fixed_mask();

    // Row tables for every mask the order produces.
    std::map<int, Pattern> masks;
    for (int c : tn.alive_composites()) {
      Pattern m = 0;
      for (Label l : tn.external_labels(c)) {
        if (tn.is_output(l) && (fixed_mask_ & qubit_bit(tn.labels[l].qubit))) {
          m |= qubit_bit(tn.labels[l].qubit);
        }
      }
      masks[c] = m;
      tables_.prepare(m);
    }
    for (const Step& s : plan.order.steps) {
      masks[s.i] |= masks[s.j];
      tables_.prepare(masks[s.i]);
    }
    tables_.prepare(fixed_mask_);
    for (int c : tn.alive_composites()) base_[c] = make_base(c);

    const auto& sl = plan.slicing;
    value_.assign(tn.labels.size(), -1);
    global_ = sl.global_edges;
    head_ = sl.local_head_edges;
    tail_ = sl.local_tail_edges;
    final_order_.clear();
    for (int q : req.open_qubits) final_order_.push_back(tn.output_labels[q]);
  }

  std::uint64_t num_subtasks() const { return std::uint64_t{1} << global_.size(); }
  const std::vector<Pattern>& final_rows() const { return tables_.table(fixed_mask_); }

  // Amplitudes of one subtask, rows x group size, in T.
  std::vector<T> subtask(std::uint64_t g) const {
    std::vector<std::int8_t> value(tn_.labels.size(), -1);
    assign(value, global_, g);
    ExecTensor<T> vhead;
    bool have_head = head_result_ >= 0;
    if (have_head) {
      const std::uint64_t nh = std::uint64_t{1} << head_.size();
      for (std::uint64_t h = 0; h < nh; ++h) {
        assign(value, head_, h);
        ExecTensor<T> part = run(split_.head, 0, plan_.head_steps, value, nullptr);
        if (h == 0) {
          vhead = std::move(part);
        } else {
          for (std::size_t i = 0; i < vhead.data.size(); ++i) vhead.data[i] += part.data[i];
        }
      }
    }
    std::vector<T> out;
    const std::uint64_t nt = std::uint64_t{1} << tail_.size();
    for (std::uint64_t t = 0; t < nt; ++t) {
      assign(value, tail_, t);
      ExecTensor<T> r = run(split_.tail, plan_.head_steps,
                            static_cast<int>(plan_.order.steps.size()), value,
                            have_head ? &vhead : nullptr);
      std::vector<T> amps = finalize(std::move(r));
      if (t == 0) {
        out = std::move(amps);
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += amps[i];
      }
    }
    return out;
  }

 private:
  // Sets the labels in `ls` from the bits of `config` (first label most
  // significant) and propagates ties.
  void assign(std::vector<std::int8_t>& value, const std::vector<Label>& ls,
              std::uint64_t config) const {
    const std::size_t k = ls.size();
    for (std::size_t i = 0; i < k; ++i) {
      value[ls[i]] = static_cast<std::int8_t>((config >> (k - 1 - i)) & 1);
    }
    for (const Tie& t : tn_.ties) {
      if (value[t.source] >= 0) value[t.target] = value[t.source];
    }
  }

  ExecTensor<T> make_base(int c) {
    const Tensor<cdouble>& t = tn_.composites[c].data;
    std::vector<Label> fixed, dense;
    for (Label l : t.labels()) {
      bool f = tn_.is_output(l) && (fixed_mask_ & qubit_bit(tn_.labels[l].qubit));
      (f ? fixed : dense).push_back(l);
    }
    std::vector<Label> order = fixed;
    order.insert(order.end(), dense.begin(), dense.end());
    Tensor<cdouble> p = t.permuted(order);
    ExecTensor<T> e;
    e.labels = dense;
    for (Label l : dense) e.dims.push_back(t.dim_of(l));
    for (Label l : fixed) e.qmask |= qubit_bit(tn_.labels[l].qubit);
    e.rows = &tables_.table(e.qmask);
    const Index d = e.dense();
    e.data.resize(static_cast<std::size_t>(e.num_rows() * d));
    for (Index r = 0; r < e.num_rows(); ++r) {
      Pattern pat = (*e.rows)[r];
      Index block = 0;
      for (Label l : fixed) block = block * 2 + ((pat & qubit_bit(tn_.labels[l].qubit)) ? 1 : 0);
      for (Index i = 0; i < d; ++i) {
        e.data[r * d + i] = static_cast<T>(p.data()[block * d + i]);
      }
    }
    return e;
  }

  static ExecTensor<T> slice(const ExecTensor<T>& x, int pos, Index v) {
    ExecTensor<T> out;
    out.qmask = x.qmask;
    out.rows = x.rows;
    out.labels = x.labels;
    out.dims = x.dims;
    out.labels.erase(out.labels.begin() + pos);
    out.dims.erase(out.dims.begin() + pos);
    Index outer = x.num_rows(), inner = 1;
    for (int i = 0; i < pos; ++i) outer *= x.dims[i];
    for (std::size_t i = pos + 1; i < x.dims.size(); ++i) inner *= x.dims[i];
    out.data.resize(static_cast<std::size_t>(outer * inner));
    for (Index o = 0; o < outer; ++o) {
      const T* src = x.data.data() + (o * x.dims[pos] + v) * inner;
      std::copy(src, src + inner, out.data.begin() + o * inner);
    }
    return out;
  }

  ExecTensor<T> sliced_base(int c, const std::vector<std::int8_t>& value) const {
    ExecTensor<T> x = base_.at(c);
    for (int pos = static_cast<int>(x.labels.size()) - 1; pos >= 0; --pos) {
      std::int8_t v = value[x.labels[pos]];
      if (v >= 0) x = slice(x, pos, v);
    }
    observe(x);
    return x;
  }

  void observe(const ExecTensor<T>& x) const {
    if (stats_) stats_->observe(static_cast<std::uint64_t>(x.data.size()));
  }

  // Permute [row][labels...] into [row][order...].
  ExecTensor<T> arrange(const ExecTensor<T>& x, const std::vector<Label>& order) const {
    std::vector<int> perm{0};
    bool identity = true;
    for (std::size_t d = 0; d < order.size(); ++d) {
      int p = static_cast<int>(std::find(x.labels.begin(), x.labels.end(), order[d]) -
                               x.labels.begin());
      perm.push_back(p + 1);
      identity = identity && p == static_cast<int>(d);
    }
    if (identity) return x;
    std::vector<Index> dims{x.num_rows()};
    dims.insert(dims.end(), x.dims.begin(), x.dims.end());
    ExecTensor<T> out;
    out.qmask = x.qmask;
    out.rows = x.rows;
    out.labels = order;
    for (Label l : order) {
      out.dims.push_back(x.dims[std::find(x.labels.begin(), x.labels.end(), l) - x.labels.begin()]);
    }
    out.data.resize(x.data.size());
    kernels::permute(x.data.data(), std::span<const Index>(dims), std::span<const int>(perm),
                     out.data.data(), threads_);
    return out;
  }

  ExecTensor<T> contract(const ExecTensor<T>& a, const ExecTensor<T>& b) const {
    std::vector<Label> free_a, shared, free_b;
    std::vector<Index> out_dims;
    Index m = 1, k = 1, n = 1;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      bool in_b = std::find(b.labels.begin(), b.labels.end(), a.labels[i]) != b.labels.end();
      if (in_b) {
        shared.push_back(a.labels[i]);
        k *= a.dims[i];
      } else {
        free_a.push_back(a.labels[i]);
        out_dims.push_back(a.dims[i]);
        m *= a.dims[i];
      }
    }
    for (std::size_t i = 0; i < b.labels.size(); ++i) {
      if (std::find(a.labels.begin(), a.labels.end(), b.labels[i]) == a.labels.end()) {
        free_b.push_back(b.labels[i]);
        out_dims.push_back(b.dims[i]);
        n *= b.dims[i];
      }
    }
    std::vector<Label> order_a = free_a, order_b = shared;
    order_a.insert(order_a.end(), shared.begin(), shared.end());
    order_b.insert(order_b.end(), free_b.begin(), free_b.end());
    ExecTensor<T> pa = arrange(a, order_a);
    ExecTensor<T> pb = arrange(b, order_b);

    ExecTensor<T> out;
    out.qmask = a.qmask | b.qmask;
    out.rows = &tables_.table(out.qmask);
    out.labels = free_a;
    out.labels.insert(out.labels.end(), free_b.begin(), free_b.end());
    out.dims = out_dims;
    const Index rows = out.num_rows();
    std::vector<kernels::RowPair> pairs(static_cast<std::size_t>(rows));
    for (Index r = 0; r < rows; ++r) {
      Pattern pat = (*out.rows)[r];
      auto find = [&](const ExecTensor<T>& x) {
        auto it = std::lower_bound(x.rows->begin(), x.rows->end(), pat & x.qmask);
        return static_cast<Index>(it - x.rows->begin());
      };
      pairs[r] = {find(pa), find(pb)};
    }
    out.data.resize(static_cast<std::size_t>(rows * m * n));
    kernels::gemm_batched(pa.data.data(), pb.data.data(), out.data.data(), m, k, n,
                          std::span<const kernels::RowPair>(pairs), threads_);
    if (stats_) stats_->madds.add(static_cast<std::uint64_t>(rows * m * k * n));
    observe(out);
    return out;
  }

  ExecTensor<T> run(const std::vector<int>& ids, int begin, int end,
                    const std::vector<std::int8_t>& value, const ExecTensor<T>* vhead) const {
    std::map<int, ExecTensor<T>> nodes;
    for (int c : ids) nodes.emplace(c, sliced_base(c, value));
    if (vhead) nodes.emplace(head_result_, *vhead);
    for (int s = begin; s < end; ++s) {
      auto [i, j] = plan_.order.steps[s];
      ExecTensor<T> r = contract(nodes.at(i), nodes.at(j));
      nodes.erase(j);
      nodes.at(i) = std::move(r);
    }
    if (nodes.size() != 1) throw ValidationError("plan leaves more than one tensor");
    return std::move(nodes.begin()->second);
  }

  std::vector<T> finalize(ExecTensor<T> r) const {
    if (r.qmask != fixed_mask_) throw ValidationError("result does not cover the fixed qubits");
    std::vector<Label> sorted_have = r.labels, sorted_want = final_order_;
    std::sort(sorted_have.begin(), sorted_have.end());
    std::sort(sorted_want.begin(), sorted_want.end());
    if (sorted_have != sorted_want) throw ValidationError("result labels are not the open outputs");
    return arrange(r, final_order_).data;
  }

  const TensorNetwork& tn_;
  const ContractionPlan& plan_;
  const SparseStateRequest& req_;
  RowTables tables_;
  ExecStats* stats_;
  int threads_;
  HeadTailSplit split_;
  int head_result_ = -1;
  Pattern fixed_mask_ = 0;
  std::map<int, ExecTensor<T>> base_;
  std::vector<std::int8_t> value_;
  std::vector<Label> global_, head_, tail_, final_order_;
};

template <typename T>
SparseState execute(const TensorNetwork& tn, const ContractionPlan& plan,
                    const SparseStateRequest& req, double fraction, const EngineOptions& opt) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ValidationError("path fraction must be in (0, 1]");
  }
  const int workers = std::max(opt.workers, 1);
  const std::uint64_t total = std::uint64_t{1} << plan.slicing.global_edges.size();
  const auto count = static_cast<std::uint64_t>(
      std::ceil(fraction * static_cast<double>(total) - 1e-9));
  if (count == 0) throw ValidationError("path fraction selects zero subtasks");
  const int kernel_threads = count >= static_cast<std::uint64_t>(workers) ? 1 : workers;
  Executor<T> ex(tn, plan, req, opt.stats, kernel_threads);

  SparseState out;
  out.request = req;
  out.rows = ex.final_rows();
  out.budget = tn.budget;
  out.subtasks_total = total;
  out.subtasks_summed = count;
  out.path_fraction = static_cast<double>(count) / static_cast<double>(total);
  const std::size_t size = out.rows.size() * static_cast<std::size_t>(req.group_size());
  out.amplitudes.assign(size, cdouble(0.0));
  for (Pattern g : req.groups) {
    auto it = std::lower_bound(out.rows.begin(), out.rows.end(), g);
    out.group_row.push_back(static_cast<std::uint32_t>(it - out.rows.begin()));
  }

  for (std::uint64_t start = 0; start < count; start += workers) {
    const int nb = static_cast<int>(std::min<std::uint64_t>(workers, count - start));
    std::vector<std::vector<T>> results(nb);
    std::exception_ptr error;
#pragma omp parallel for num_threads(nb) schedule(static, 1) if (nb > 1)
    for (int b = 0; b < nb; ++b) {
      try {
        results[b] = ex.subtask(start + b);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    for (int b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < size; ++i) out.amplitudes[i] += static_cast<cdouble>(results[b][i]);
      if (opt.on_partial) {
        out.subtasks_summed = start + b + 1;
        out.path_fraction = static_cast<double>(out.subtasks_summed) / static_cast<double>(total);
        opt.on_partial(out);
      }
    }
  }
  for (const cdouble& a : out.amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw NumericalError("non-finite amplitude in contraction result");
    }
  }
  return out;
}

}  // namespace

SparseState run_subtasks(const TensorNetwork& tn, const ContractionPlan& plan,
                         const SparseStateRequest& request, double fraction,
                         const EngineOptions& options) {
  request.validate();
  if (request.num_qubits != tn.num_qubits) {
    throw ValidationError("request qubit count does not match the network");
  }
  if (options.dtype == Dtype::kComplex64) {
    return execute<cfloat>(tn, plan, request, fraction, options);
  }
  return execute<cdouble>(tn, plan, request, fraction, options);
}

SparseState contract_sparse(const TensorNetwork& tn, const ContractionPlan& plan,
                            const SparseStateRequest& request, const EngineOptions& options) {
  return run_subtasks(tn, plan, request, 1.0, options);
}

std::vector<cdouble> contract_full(const TensorNetwork& tn, const ContractionOrder& order,
                                   const EngineOptions& options) {
  if (tn.num_qubits > options.full_state_cap) {
    throw ValidationError("contract_full: " + std::to_string(tn.num_qubits) +
                          " qubits exceed the cap of " + std::to_string(options.full_state_cap));
  }
  return run_subtasks(tn, plan_from_order(order), SparseStateRequest::full(tn.num_qubits), 1.0,
                      options)
      .amplitudes;
}

cdouble contract_single(const TensorNetwork& tn, const ContractionOrder& order, Pattern bits,
                        const EngineOptions& options) {
  auto req = SparseStateRequest::single(tn.num_qubits, bits);
  return run_subtasks(tn, plan_from_order(order), req, 1.0, options).amplitudes.at(0);
}

std::vector<cdouble> contract_batch(const TensorNetwork& tn, const ContractionOrder& order,
                                    std::span<const std::pair<int, int>> fixed,
                                    std::span<const int> open, const EngineOptions& options) {
  SparseStateRequest req;
  req.num_qubits = tn.num_qubits;
  req.open_qubits.assign(open.begin(), open.end());
  std::vector<int> seen(tn.num_qubits, 0);
  for (int q : open) {
    if (q < 0 || q >= tn.num_qubits) throw ValidationError("batch: unknown qubit");
    ++seen[q];
  }
  Pattern bits = 0;
  for (auto [q, b] : fixed) {
    if (q < 0 || q >= tn.num_qubits) throw ValidationError("batch: unknown qubit");
    if (++seen[q] > 1) throw ValidationError("batch: qubit " + std::to_string(q) + " is both fixed and open");
    if (b) bits |= qubit_bit(q);
  }
  for (int q = 0; q < tn.num_qubits; ++q) {
    if (!seen[q]) throw ValidationError("batch: qubit " + std::to_string(q) + " is neither fixed nor open");
  }
  req.groups = {bits};
  return run_subtasks(tn, plan_from_order(order), req, 1.0, options).amplitudes;
}

}  // namespace sparsesim
