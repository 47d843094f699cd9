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

#include "sparsesim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sparsesim/error.hpp"
#include "sparsesim/kernels.hpp"
#include "sparsesim/reference.hpp"

namespace sparsesim {

namespace {

void apply_single(std::span<cdouble> psi, int n, int q, const Matrix2& m, int threads) {
  const std::int64_t half = static_cast<std::int64_t>(psi.size() / 2);
  const int shift = n - 1 - q;
  const std::int64_t low_mask = (std::int64_t{1} << shift) - 1;
  const int nt = kernels::effective_threads(threads, 8.0 * half);
  cdouble* const v = psi.data();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::int64_t i0 = ((k & ~low_mask) << 1) | (k & low_mask);
    const std::int64_t i1 = i0 | (std::int64_t{1} << shift);
    const cdouble x0 = v[i0], x1 = v[i1];
    v[i0] = m[0] * x0 + m[1] * x1;
    v[i1] = m[2] * x0 + m[3] * x1;
  }
}

void apply_two(std::span<cdouble> psi, int n, int qa, int qb, const Matrix4& m, int threads) {
  const std::int64_t quarter = static_cast<std::int64_t>(psi.size() / 4);
  const int sa = n - 1 - qa, sb = n - 1 - qb;
  const int lo = std::min(sa, sb), hi = std::max(sa, sb);
  const int nt = kernels::effective_threads(threads, 32.0 * quarter);
  cdouble* const v = psi.data();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    // Insert zero bits at positions lo and hi.
    std::int64_t i = k;
    i = ((i >> lo) << (lo + 1)) | (i & ((std::int64_t{1} << lo) - 1));
    i = ((i >> hi) << (hi + 1)) | (i & ((std::int64_t{1} << hi) - 1));
    const std::int64_t ba = std::int64_t{1} << sa, bb = std::int64_t{1} << sb;
    const std::int64_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    cdouble x[4];
    for (int r = 0; r < 4; ++r) x[r] = v[idx[r]];
    for (int r = 0; r < 4; ++r) {
      v[idx[r]] = m[r * 4] * x[0] + m[r * 4 + 1] * x[1] + m[r * 4 + 2] * x[2] + m[r * 4 + 3] * x[3];
    }
  }
}

const Matrix2 kProjector0{1.0, 0.0, 0.0, 0.0};

}  // namespace

StateVector statevector_with_ledger(const Circuit& circuit,
                                    std::span<const Approximation> ledger,
                                    const OracleOptions& options) {
  circuit.validate();
  const int n = circuit.num_qubits();
  if (n > options.cap) {
    throw ValidationError("statevector: " + std::to_string(n) + " qubits exceed the cap of " +
                          std::to_string(options.cap));
  }
  StateVector psi(std::size_t{1} << n, cdouble(0.0));
  psi[0] = 1.0;
  auto single = [&](int q, const Matrix2& m) {
    if (options.reference) {
      reference::apply_single(psi, n, q, m);
    } else {
      apply_single(psi, n, q, m, options.threads);
    }
  };
  auto two = [&](int a, int b, const Matrix4& m) {
    if (options.reference) {
      reference::apply_two(psi, n, a, b, m);
    } else {
      apply_two(psi, n, a, b, m, options.threads);
    }
  };
  int gate = 0;
  for (const Moment& moment : circuit.moments) {
    for (const Gate& g : moment) {
      std::vector<int> targets;
      if (const auto* f = std::get_if<FsimGate>(&g)) {
        targets = {f->targets[0], f->targets[1]};
      } else {
        targets = {std::get<SingleGate>(g).target};
      }
      int companion = -1;
      for (const Approximation& a : ledger) {
        if (a.gate != gate) continue;
        switch (a.kind) {
          case ApproxKind::kEdgeBreak:
            single(targets.at(a.input), kProjector0);
            break;
          case ApproxKind::kHoleDrill:
            for (int q : targets) single(q, kProjector0);
            break;
          case ApproxKind::kCompanion:
            companion = a.input;
            break;
        }
      }
      if (const auto* f = std::get_if<FsimGate>(&g)) {
        Matrix4 m = fsim_matrix(f->params);
        if (companion >= 0) {
          const int p = companion, o = 1 - p;
          for (int in = 0; in < 4; ++in)
            for (int out = 0; out < 4; ++out) {
              int in_p = p == 0 ? in >> 1 : in & 1;
              int out_o = o == 0 ? out >> 1 : out & 1;
              if (in_p != out_o) m[out * 4 + in] = 0.0;
            }
        }
        two(f->targets[0], f->targets[1], m);
      } else {
        const auto& s = std::get<SingleGate>(g);
        single(s.target, s.matrix);
      }
      ++gate;
    }
  }
  return psi;
}

StateVector statevector(const Circuit& circuit, const OracleOptions& options) {
  return statevector_with_ledger(circuit, {}, options);
}

std::uint64_t pattern_index(Pattern p, int n) {
  std::uint64_t idx = 0;
  for (int q = 0; q < n; ++q) idx = (idx << 1) | ((p >> q) & 1);
  return idx;
}

double fidelity(std::span<const cdouble> psi, std::span<const cdouble> psi_hat) {
  if (psi.size() != psi_hat.size()) throw ValidationError("fidelity: dimension mismatch");
  cdouble overlap = 0.0;
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    overlap += std::conj(psi[i]) * psi_hat[i];
    na += std::norm(psi[i]);
    nb += std::norm(psi_hat[i]);
  }
  if (!(nb > 0.0) || !(na > 0.0)) throw ValidationError("fidelity: zero-norm state");
  return std::norm(overlap) / (na * nb);
}

double linear_xeb(std::span<const Pattern> samples, std::span<const cdouble> psi, int n) {
  if (samples.empty()) throw ValidationError("linear_xeb: no samples");
  double sum = 0.0;
  for (Pattern s : samples) sum += std::norm(psi[pattern_index(s, n)]);
  return std::ldexp(1.0, n) / static_cast<double>(samples.size()) * sum - 1.0;
}

double linear_xeb_stderr(std::span<const Pattern> samples, std::span<const cdouble> psi, int n) {
  if (samples.size() < 2) throw ValidationError("linear_xeb_stderr: need at least two samples");
  const double mean = linear_xeb(samples, psi, n) + 1.0;
  double ss = 0.0;
  for (Pattern s : samples) {
    const double d = std::ldexp(std::norm(psi[pattern_index(s, n)]), n) - mean;
    ss += d * d;
  }
  const double m = static_cast<double>(samples.size());
  return std::sqrt(ss / (m - 1.0) / m);
}

double log_xeb(std::span<const Pattern> samples, std::span<const cdouble> psi, int n) {
  if (samples.empty()) throw ValidationError("log_xeb: no samples");
  double sum = 0.0;
  for (Pattern s : samples) {
    double p = std::norm(psi[pattern_index(s, n)]);
    if (!(p > 0.0)) {
      throw ValidationError("log_xeb: sample " + pattern_to_string(s, n) + " has zero probability");
    }
    sum += std::log(std::ldexp(p, n));
  }
  return sum / static_cast<double>(samples.size()) + std::numbers::egamma;
}

PorterThomasStats porter_thomas_stats(std::span<const double> probabilities, int n, int bins,
                                      double max_np) {
  if (bins < 1 || !(max_np > 0.0)) throw ValidationError("porter_thomas_stats: bad binning");
  PorterThomasStats st;
  const double N = std::ldexp(1.0, n);
  std::vector<double> x;
  x.reserve(probabilities.size());
  for (double p : probabilities) {
    if (p < 0.0) throw ValidationError("porter_thomas_stats: negative probability");
    x.push_back(N * p);
  }
  for (int b = 0; b <= bins; ++b) st.bin_edges.push_back(max_np * b / bins);
  st.counts.assign(bins, 0);
  for (double v : x) {
    if (v < max_np) ++st.counts[static_cast<int>(v / max_np * bins)];
  }
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = -std::expm1(-x[i]);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  st.ks = std::min(d, 1.0);
  return st;
}

std::pair<double, double> entropy_pair(std::span<const Pattern> samples,
                                       std::span<const double> distribution, int n) {
  double truth = 0.0;
  for (double p : distribution) {
    if (p > 0.0) truth -= p * std::log(p);
  }
  double sampled = 0.0;
  for (Pattern s : samples) {
    double p = distribution[pattern_index(s, n)];
    if (!(p > 0.0)) {
      throw ValidationError("entropy: sample " + pattern_to_string(s, n) + " has zero probability");
    }
    sampled -= std::log(p);
  }
  if (!samples.empty()) sampled /= static_cast<double>(samples.size());
  return {sampled, truth};
}

std::vector<double> probabilities(std::span<const cdouble> psi) {
  std::vector<double> p(psi.size());
  double total = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) total += p[i] = std::norm(psi[i]);
  if (!(total > 0.0)) throw ValidationError("probabilities: zero-norm state");
  for (double& v : p) v /= total;
  return p;
}

}  // namespace sparsesim
