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

#include "sparsesim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "sparsesim/error.hpp"
#include "sparsesim/rng.hpp"

namespace sparsesim {

std::vector<Label> SlicingPlan::all() const {
  std::vector<Label> out = global_edges;
  out.insert(out.end(), local_head_edges.begin(), local_head_edges.end());
  out.insert(out.end(), local_tail_edges.begin(), local_tail_edges.end());
  return out;
}

namespace {

using Real = long double;  // exact for integer counts below 2^64

struct SymNode {
  std::vector<Label> labels;  // ascending
  Pattern qmask = 0;
};
using NodeMap = std::map<int, SymNode>;

struct Merged {
  SymNode node;
  int shared = 0;
  int free_a = 0;
  int free_b = 0;
};

Merged merge(const SymNode& a, const SymNode& b) {
  Merged m;
  std::size_t i = 0, j = 0;
  while (i < a.labels.size() || j < b.labels.size()) {
    if (j == b.labels.size() || (i < a.labels.size() && a.labels[i] < b.labels[j])) {
      m.node.labels.push_back(a.labels[i++]);
      ++m.free_a;
    } else if (i == a.labels.size() || b.labels[j] < a.labels[i]) {
      m.node.labels.push_back(b.labels[j++]);
      ++m.free_b;
    } else {
      ++m.shared;
      ++i;
      ++j;
    }
  }
  m.node.qmask = a.qmask | b.qmask;
  return m;
}

bool shares_label(const SymNode& a, const SymNode& b) {
  std::size_t i = 0, j = 0;
  while (i < a.labels.size() && j < b.labels.size()) {
    if (a.labels[i] == b.labels[j]) return true;
    if (a.labels[i] < b.labels[j]) ++i; else ++j;
  }
  return false;
}

std::vector<char> label_flags(const TensorNetwork& tn, const std::vector<Label>& ls) {
  std::vector<char> flags(tn.labels.size(), 0);
  for (Label l : ls) flags[l] = 1;
  return flags;
}

// Sliced labels plus companions tied to a sliced source.
std::vector<char> effective_sliced(const TensorNetwork& tn, const std::vector<Label>& sliced) {
  auto flags = label_flags(tn, sliced);
  for (const Tie& t : tn.ties) {
    if (flags[t.source]) flags[t.target] = 1;
  }
  return flags;
}

SymNode make_node(const TensorNetwork& tn, int c, Pattern fixed_mask,
                  const std::vector<char>* sliced) {
  SymNode n;
  for (Label l : tn.external_labels(c)) {
    if (sliced && (*sliced)[l]) continue;
    if (tn.is_output(l) && (fixed_mask & qubit_bit(tn.labels[l].qubit))) {
      n.qmask |= qubit_bit(tn.labels[l].qubit);
    } else {
      n.labels.push_back(l);
    }
  }
  return n;
}

NodeMap make_nodes(const TensorNetwork& tn, const std::vector<int>& ids, Pattern fixed_mask,
                   const std::vector<char>* sliced) {
  NodeMap nodes;
  for (int c : ids) nodes[c] = make_node(tn, c, fixed_mask, sliced);
  return nodes;
}

struct GreedyResult {
  ContractionOrder order;
  double space = 0.0;
  double time = 0.0;
};

double estimate_extent(const SymNode& n, const RowTables& rows) {
  return rows.estimate(n.qmask) * std::ldexp(1.0, static_cast<int>(n.labels.size()));
}

GreedyResult greedy_run(NodeMap nodes, const RowTables& rows, std::mt19937_64* rng,
                        bool allow_outer) {
  GreedyResult out;
  for (const auto& [id, n] : nodes) out.space = std::max(out.space, estimate_extent(n, rows));
  struct Cand {
    int i, j;
    double log_extent, log_madds;
    Merged merged;
  };
  while (nodes.size() > 1) {
    std::unordered_map<Label, std::vector<int>> by_label;
    for (const auto& [id, n] : nodes) {
      for (Label l : n.labels) by_label[l].push_back(id);
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& [l, ids] : by_label) {
      if (ids.size() == 2) pairs.insert({std::min(ids[0], ids[1]), std::max(ids[0], ids[1])});
    }
    if (pairs.empty()) {
      if (!allow_outer) throw ValidationError("contraction order: network is disconnected");
      // Outer product of the two smallest tensors.
      std::vector<std::pair<double, int>> sizes;
      for (const auto& [id, n] : nodes) sizes.push_back({estimate_extent(n, rows), id});
      std::sort(sizes.begin(), sizes.end());
      pairs.insert({std::min(sizes[0].second, sizes[1].second),
                    std::max(sizes[0].second, sizes[1].second)});
    }
    std::vector<Cand> cands;
    cands.reserve(pairs.size());
    for (auto [i, j] : pairs) {
      Merged m = merge(nodes[i], nodes[j]);
      double lr = std::log2(rows.estimate(m.node.qmask));
      double le = lr + static_cast<double>(m.node.labels.size());
      double lm = lr + m.free_a + m.free_b + m.shared;
      cands.push_back({i, j, le, lm, std::move(m)});
    }
    std::size_t pick = 0;
    for (std::size_t k = 1; k < cands.size(); ++k) {
      const Cand& a = cands[k];
      const Cand& b = cands[pick];
      if (std::tie(a.log_extent, a.log_madds, a.i, a.j) <
          std::tie(b.log_extent, b.log_madds, b.i, b.j)) {
        pick = k;
      }
    }
    if (rng) {
      const double best = cands[pick].log_extent;
      std::vector<double> w;
      double total = 0.0;
      for (const Cand& c : cands) {
        w.push_back(std::exp2(-(c.log_extent - best)));
        total += w.back();
      }
      double u = uniform01(*rng) * total;
      for (std::size_t k = 0; k < cands.size(); ++k) {
        u -= w[k];
        if (u <= 0.0 || k + 1 == cands.size()) {
          pick = k;
          break;
        }
      }
    }
    Cand& c = cands[pick];
    out.space = std::max(out.space, std::exp2(c.log_extent));
    out.time += std::exp2(c.log_madds);
    out.order.steps.push_back({c.i, c.j});
    nodes[c.i] = std::move(c.merged.node);
    nodes.erase(c.j);
  }
  return out;
}

ContractionOrder best_greedy(const NodeMap& nodes, const RowTables& rows, std::uint64_t seed,
                             int trials, bool allow_outer) {
  GreedyResult best = greedy_run(nodes, rows, nullptr, allow_outer);
  for (int t = 1; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    GreedyResult r = greedy_run(nodes, rows, &rng, allow_outer);
    if (std::tie(r.space, r.time) < std::tie(best.space, best.time)) best = std::move(r);
  }
  return best.order;
}

struct SimResult {
  Real head = 0;  // per local-head configuration
  Real tail = 0;  // per local-tail configuration
  Real space = 0;
  Real over_mass = 0;  // total extent of tensors above the budget
  std::vector<std::vector<Label>> over;
};

Real rows_times_pow2(std::uint64_t rows, std::size_t k) {
  return static_cast<Real>(rows) * std::ldexp(static_cast<Real>(1), static_cast<int>(k));
}

SimResult simulate(const TensorNetwork& tn, const ContractionPlan& plan,
                   const std::vector<char>& sliced, RowTables& rows, Real budget) {
  NodeMap nodes = make_nodes(tn, tn.alive_composites(), rows.fixed_mask(), &sliced);
  SimResult s;
  auto account = [&](const SymNode& n, Real extent) {
    s.space = std::max(s.space, extent);
    if (budget > 0 && extent > budget) {
      s.over_mass += extent;
      s.over.push_back(n.labels);
    }
  };
  for (const auto& [id, n] : nodes) account(n, rows_times_pow2(rows.rows(n.qmask), n.labels.size()));
  for (std::size_t k = 0; k < plan.order.steps.size(); ++k) {
    auto [i, j] = plan.order.steps[k];
    auto ai = nodes.find(i), bj = nodes.find(j);
    if (i == j || ai == nodes.end() || bj == nodes.end()) {
      throw ValidationError("plan step " + std::to_string(k) + " references a consumed tensor");
    }
    Merged m = merge(ai->second, bj->second);
    std::uint64_t r = rows.rows(m.node.qmask);
    Real madds = rows_times_pow2(r, m.free_a + m.free_b + m.shared);
    (static_cast<int>(k) < plan.head_steps ? s.head : s.tail) += madds;
    account(m.node, rows_times_pow2(r, m.node.labels.size()));
    ai->second = std::move(m.node);
    nodes.erase(bj);
  }
  return s;
}

Real overall_time(const SimResult& s, std::size_t g, std::size_t lh, std::size_t lt) {
  auto p2 = [](std::size_t k) { return std::ldexp(static_cast<Real>(1), static_cast<int>(k)); };
  return p2(g) * (p2(lh) * s.head + p2(lt) * s.tail);
}

std::uint64_t saturate(Real v) {
  const Real max = static_cast<Real>(std::numeric_limits<std::uint64_t>::max());
  return v >= max ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(v);
}

std::vector<char> head_flags(const TensorNetwork& tn, const HeadTailSplit& split) {
  std::vector<char> in_head(tn.composites.size(), 0);
  for (int c : split.head) in_head[c] = 1;
  return in_head;
}

}  // namespace

HeadTailSplit split_head_tail(const TensorNetwork& tn, int cut) {
  if (cut < 0) throw ValidationError("split: negative cut");
  HeadTailSplit split;
  split.cut = cut;
  for (int c : tn.alive_composites()) {
    (tn.composites[c].layer < cut ? split.head : split.tail).push_back(c);
  }
  auto in_head = head_flags(tn, split);
  for (int c : split.head) {
    for (Label l : tn.external_labels(c)) {
      if (tn.is_output(l)) {
        throw ValidationError("split at cycle " + std::to_string(cut) + " leaves output qubit " +
                              std::to_string(tn.labels[l].qubit) + " in the head");
      }
      int other = tn.across(c, l);
      if (other >= 0 && !in_head[other]) split.interface.push_back(l);
    }
  }
  std::sort(split.interface.begin(), split.interface.end());
  return split;
}

int head_result_id(const HeadTailSplit& split, const ContractionPlan& plan) {
  if (split.head.empty()) return -1;
  if (plan.head_steps > 0) return plan.order.steps[plan.head_steps - 1].i;
  return split.head.front();
}

ContractionOrder find_order_greedy(const TensorNetwork& tn, std::uint64_t seed, int trials,
                                   const RowTables& rows) {
  if (!tn.connected()) throw ValidationError("contraction order: network is disconnected");
  NodeMap nodes = make_nodes(tn, tn.alive_composites(), rows.fixed_mask(), nullptr);
  return best_greedy(nodes, rows, seed, std::max(trials, 1), false);
}

ContractionOrder head_order(const TensorNetwork& tn, const HeadTailSplit& split,
                            std::uint64_t seed, int trials) {
  if (split.head.size() <= 1) return {};
  NodeMap nodes = make_nodes(tn, split.head, 0, nullptr);
  return best_greedy(nodes, RowTables(), seed, std::max(trials, 1), true);
}

namespace {

NodeMap tail_nodes(const TensorNetwork& tn, const HeadTailSplit& split, int head_result,
                   const RowTables& rows) {
  NodeMap nodes = make_nodes(tn, split.tail, rows.fixed_mask(), nullptr);
  if (head_result >= 0) nodes[head_result] = SymNode{split.interface, 0};
  return nodes;
}

}  // namespace

ContractionOrder tail_order_greedy(const TensorNetwork& tn, const HeadTailSplit& split,
                                   int head_result, std::uint64_t seed, int trials,
                                   const RowTables& rows) {
  NodeMap nodes = tail_nodes(tn, split, head_result, rows);
  return best_greedy(nodes, rows, seed, std::max(trials, 1), true);
}

ContractionOrder zigzag_order(const TensorNetwork& tn, const HeadTailSplit& split,
                              int head_result, const RowTables& rows) {
  NodeMap nodes = tail_nodes(tn, split, head_result, rows);
  ContractionOrder order;
  if (nodes.size() <= 1) return order;
  std::map<int, int> layer;
  for (int c : split.tail) layer[c] = tn.composites[c].layer;
  int acc = head_result;
  if (acc >= 0) {
    layer[acc] = split.cut - 1;
  } else {
    acc = split.tail.front();
    for (int c : split.tail) {
      if (layer[c] < layer[acc]) acc = c;
    }
  }
  int pos = layer[acc];
  bool forward = true;
  while (nodes.size() > 1) {
    const SymNode& a = nodes[acc];
    std::vector<int> ahead, behind, rest;
    for (const auto& [id, n] : nodes) {
      if (id == acc) continue;
      rest.push_back(id);
      if (!shares_label(a, n)) continue;
      if (layer[id] >= pos) ahead.push_back(id);
      if (layer[id] <= pos) behind.push_back(id);
    }
    std::vector<int>* cands = forward ? &ahead : &behind;
    if (cands->empty()) {
      forward = !forward;
      cands = forward ? &ahead : &behind;
    }
    if (cands->empty()) cands = &rest;  // disconnected remainder
    // Sweep: the nearest layer in the current direction first, then the
    // smallest result.
    int pick = -1;
    int best_d = 0;
    double best_e = 0, best_m = 0;
    Merged best;
    for (int id : *cands) {
      Merged m = merge(a, nodes[id]);
      double lr = std::log2(rows.estimate(m.node.qmask));
      double le = lr + static_cast<double>(m.node.labels.size());
      double lm = lr + m.free_a + m.free_b + m.shared;
      int d = std::abs(layer[id] - pos);
      if (pick < 0 || std::tie(d, le, lm, id) < std::tie(best_d, best_e, best_m, pick)) {
        pick = id;
        best_d = d;
        best_e = le;
        best_m = lm;
        best = std::move(m);
      }
    }
    order.steps.push_back({acc, pick});
    pos = layer[pick];
    nodes[acc] = std::move(best.node);
    nodes.erase(pick);
  }
  return order;
}

ComplexityReport complexity(const TensorNetwork& tn, const ContractionPlan& plan,
                            RowTables& rows) {
  auto sliced = effective_sliced(tn, plan.slicing.all());
  SimResult s = simulate(tn, plan, sliced, rows, 0);
  const auto& sl = plan.slicing;
  auto p2 = [](std::size_t k) { return std::ldexp(static_cast<Real>(1), static_cast<int>(k)); };
  ComplexityReport r;
  Real head = p2(sl.local_head_edges.size()) * s.head;
  Real tail = p2(sl.local_tail_edges.size()) * s.tail;
  Real overall = p2(sl.global_edges.size()) * (head + tail);
  r.time_per_subtask_head = saturate(head);
  r.time_per_subtask_tail = saturate(tail);
  r.overall_time = saturate(overall);
  r.space = saturate(s.space);
  r.subtasks = saturate(p2(sl.global_edges.size()));
  r.log2_overall_time = overall > 0 ? static_cast<double>(std::log2(overall)) : 0.0;
  r.log2_space = s.space > 0 ? static_cast<double>(std::log2(s.space)) : 0.0;
  return r;
}

SlicingPlan choose_slices(TensorNetwork& tn, const ContractionPlan& plan, RowTables& rows,
                          std::uint64_t space_budget, const SliceOptions& options) {
  const HeadTailSplit split = split_head_tail(tn, plan.split_cycle);
  const auto in_head = head_flags(tn, split);
  auto location = [&](Label l) {
    const LabelInfo& info = tn.labels[l];
    bool up = in_head[tn.owner[info.upstream]];
    bool down = in_head[tn.owner[info.downstream]];
    if (up && down) return 1;    // local head
    if (!up && !down) return 2;  // local tail
    return 0;                    // interface: global
  };
  std::vector<Label> chosen;
  std::map<Label, int> cls;
  auto counts = [&](int extra_cls) {
    std::array<std::size_t, 3> n{};
    for (auto& [l, c] : cls) ++n[c];
    if (extra_cls >= 0) ++n[extra_cls];
    return n;
  };
  auto time_of = [&](const SimResult& s, int extra_cls) {
    auto n = counts(extra_cls);
    return overall_time(s, n[0], n[1], n[2]);
  };
  auto eligible = [&](Label l) {
    const LabelInfo& info = tn.labels[l];
    return info.alive && info.downstream >= 0 && !cls.count(l) &&
           tn.owner[info.upstream] != tn.owner[info.downstream];
  };

  const Real budget = static_cast<Real>(space_budget);
  while (true) {
    auto sliced = effective_sliced(tn, chosen);
    SimResult cur = simulate(tn, plan, sliced, rows, budget);
    if (space_budget == 0 || cur.space <= budget) break;
    std::set<Label> cands;
    for (const auto& ls : cur.over) {
      for (Label l : ls) {
        if (eligible(l)) cands.insert(l);
      }
    }
    const Real t_cur = time_of(cur, -1);
    Label best = -1;
    double best_score = 0.0;
    for (Label l : cands) {
      auto trial = sliced;
      trial[l] = 1;
      SimResult s = simulate(tn, plan, trial, rows, budget);
      Real reduction = s.over_mass > 0 ? std::log2(cur.over_mass) - std::log2(s.over_mass)
                                       : std::log2(cur.over_mass) - std::log2(budget) + 1;
      if (reduction <= 0) continue;
      Real overhead = time_of(s, location(l)) / std::max(t_cur, static_cast<Real>(1));
      double score = static_cast<double>(reduction / std::max(overhead, static_cast<Real>(1e-30)));
      if (best < 0 || score > best_score) {
        best = l;
        best_score = score;
      }
    }
    if (best < 0) {
      throw InfeasiblePlanError("space budget 2^" +
                                std::to_string(std::log2(static_cast<double>(space_budget))) +
                                " unreachable: peak extent stays at 2^" +
                                std::to_string(static_cast<double>(std::log2(cur.space))));
    }
    chosen.push_back(best);
    cls[best] = location(best);
  }

  while (counts(-1)[0] < static_cast<std::size_t>(options.min_global)) {
    auto sliced = effective_sliced(tn, chosen);
    Label best = -1;
    std::tuple<int, Real> best_key;
    for (Label l = 0; l < static_cast<Label>(tn.labels.size()); ++l) {
      if (!eligible(l) || sliced[l]) continue;
      auto trial = sliced;
      trial[l] = 1;
      // Interface labels first: they are the natural subtask boundary.
      auto key = std::make_tuple(location(l) == 0 ? 0 : 1,
                                 time_of(simulate(tn, plan, trial, rows, 0), 0));
      if (best < 0 || key < best_key) {
        best = l;
        best_key = key;
      }
    }
    if (best < 0) throw InfeasiblePlanError("not enough labels for the requested global slices");
    chosen.push_back(best);
    cls[best] = 0;
  }

  SlicingPlan out;
  if (options.companions) {
    for (Label s : chosen) {
      const LabelInfo& info = tn.labels[s];
      if (info.downstream < 0) continue;
      const RawTensor& raw = tn.raws[info.downstream];
      if (!raw.fsim || !raw.alive || raw.gate < 0) continue;
      const int p = raw.inputs[0] == s ? 0 : 1;
      const int o = 1 - p;
      auto sliced = effective_sliced(tn, chosen);
      if (raw.input_state[p] != InputState::kLive) continue;
      if (raw.input_state[o] == InputState::kBroken) continue;
      if (raw.input_state[o] == InputState::kLive && sliced[raw.inputs[o]]) continue;
      auto cand = companion_candidate(tn, raw.gate, static_cast<PinnedInput>(p));
      if (!cand || sliced[cand->external] || sliced[cand->edge]) continue;
      if (cls[s] != 0 && location(cand->external) != cls[s]) continue;
      SimResult before = simulate(tn, plan, sliced, rows, 0);
      auto trial = sliced;
      trial[cand->external] = 1;
      SimResult after = simulate(tn, plan, trial, rows, 0);
      if (after.space > before.space) continue;
      if (!(time_of(after, -1) / cand->factor < time_of(before, -1))) continue;
      const int gate = raw.gate;
      companion_rank_one(tn, gate, static_cast<PinnedInput>(p), chosen);
      out.companions.push_back({cand->edge, gate, p, s, cand->factor});
    }
  }
  for (Label l : chosen) {
    int c = cls[l];
    (c == 0 ? out.global_edges : c == 1 ? out.local_head_edges : out.local_tail_edges).push_back(l);
  }
  return out;
}

void validate_plan(const TensorNetwork& tn, const ContractionPlan& plan) {
  const HeadTailSplit split = split_head_tail(tn, plan.split_cycle);
  const auto in_head = head_flags(tn, split);
  const int total = static_cast<int>(tn.composites.size());
  std::vector<char> live(total, 0);
  for (int c : tn.alive_composites()) live[c] = 1;
  const int steps = static_cast<int>(plan.order.steps.size());
  if (plan.head_steps < 0 || plan.head_steps > steps) throw ValidationError("plan: bad head_steps");
  if (plan.head_steps != std::max<int>(0, static_cast<int>(split.head.size()) - 1)) {
    throw ValidationError("plan: head_steps does not match the split");
  }
  for (int k = 0; k < steps; ++k) {
    auto [i, j] = plan.order.steps[k];
    if (i < 0 || j < 0 || i >= total || j >= total || !live[i] || !live[j] || i == j) {
      throw ValidationError("plan: step " + std::to_string(k) + " references a consumed tensor");
    }
    if (k < plan.head_steps && (!in_head[i] || !in_head[j])) {
      throw ValidationError("plan: head step " + std::to_string(k) + " leaves the head");
    }
    if (k >= plan.head_steps && in_head[j] && j != head_result_id(split, plan)) {
      throw ValidationError("plan: tail step " + std::to_string(k) + " uses a head tensor");
    }
    live[j] = 0;
  }
  if (std::count(live.begin(), live.end(), 1) != 1) {
    throw ValidationError("plan: order does not reduce the network to one tensor");
  }
  std::set<Label> seen;
  auto check = [&](const std::vector<Label>& ls, int want) {
    for (Label l : ls) {
      if (l < 0 || l >= static_cast<Label>(tn.labels.size()) || !tn.labels[l].alive ||
          tn.is_output(l)) {
        throw ValidationError("plan: slice label " + std::to_string(l) + " is not internal");
      }
      if (!seen.insert(l).second) throw ValidationError("plan: label sliced twice");
      if (want < 0) continue;
      bool up = in_head[tn.owner[tn.labels[l].upstream]];
      bool down = in_head[tn.owner[tn.labels[l].downstream]];
      if ((want == 1 && !(up && down)) || (want == 2 && (up || down))) {
        throw ValidationError("plan: local slice " + std::to_string(l) + " is in the wrong part");
      }
    }
  };
  check(plan.slicing.global_edges, -1);
  check(plan.slicing.local_head_edges, 1);
  check(plan.slicing.local_tail_edges, 2);
  for (const Tie& t : tn.ties) {
    if (seen.count(t.target)) throw ValidationError("plan: companion edge is also sliced");
  }
}

ContractionPlan make_plan(TensorNetwork& tn, RowTables& rows, const PlanOptions& options) {
  auto build = [&](TensorNetwork& net, int cut) {
    ContractionPlan plan;
    plan.split_cycle = cut;
    plan.space_budget = options.space_budget;
    HeadTailSplit split = split_head_tail(net, cut);
    plan.order = head_order(net, split, options.seed, options.trials);
    plan.head_steps = static_cast<int>(plan.order.steps.size());
    int hr = head_result_id(split, plan);
    ContractionOrder tail = options.zigzag
                                ? zigzag_order(net, split, hr, rows)
                                : tail_order_greedy(net, split, hr, options.seed, options.trials, rows);
    plan.order.steps.insert(plan.order.steps.end(), tail.steps.begin(), tail.steps.end());
    plan.slicing = choose_slices(net, plan, rows, options.space_budget, options.slices);
    return plan;
  };
  if (options.split_cycle >= 0) return build(tn, options.split_cycle);

  int best_cut = -1;
  std::tuple<Real, Real, int> best_key;
  std::string last_error = "no valid cut";
  for (int cut = 0; cut <= tn.num_moments; ++cut) {
    TensorNetwork copy = tn;
    try {
      ContractionPlan plan = build(copy, cut);
      ComplexityReport r = complexity(copy, plan, rows);
      Real sub = static_cast<Real>(r.subtasks);
      Real key = std::max(sub * r.time_per_subtask_head, sub * r.time_per_subtask_tail);
      auto k = std::make_tuple(key, std::exp2(static_cast<Real>(r.log2_overall_time)), cut);
      if (best_cut < 0 || k < best_key) {
        best_cut = cut;
        best_key = k;
      }
    } catch (const InfeasiblePlanError& e) {
      last_error = e.what();
    } catch (const Error& e) {
      if (best_cut < 0 && last_error == "no valid cut") last_error = e.what();
    }
  }
  if (best_cut < 0) throw InfeasiblePlanError("no feasible head/tail split: " + last_error);
  return build(tn, best_cut);
}

std::vector<int> choose_holes(TensorNetwork& tn, int count) {
  std::vector<int> chosen;
  for (int h = 0; h < count; ++h) {
    int best = -1;
    double best_time = 0.0;
    for (const RawTensor& raw : tn.raws) {
      if (!raw.alive || !raw.fsim || raw.gate < 0) continue;
      if (raw.input_state[0] != InputState::kLive || raw.input_state[1] != InputState::kLive) {
        continue;
      }
      TensorNetwork copy = tn;
      drill_hole(copy, raw.gate);
      simplify(copy);
      if (!copy.connected()) continue;
      NodeMap nodes = make_nodes(copy, copy.alive_composites(), 0, nullptr);
      GreedyResult r = greedy_run(nodes, RowTables(), nullptr, false);
      if (best < 0 || r.time < best_time) {
        best = raw.gate;
        best_time = r.time;
      }
    }
    if (best < 0) throw InfeasiblePlanError("no fSim left to drill");
    drill_hole(tn, best);
    simplify(tn);
    chosen.push_back(best);
  }
  return chosen;
}

std::vector<int> apply_broken_companions(TensorNetwork& tn) {
  std::vector<int> gates;
  for (std::size_t r = 0; r < tn.raws.size(); ++r) {
    const RawTensor& raw = tn.raws[r];
    if (!raw.alive || !raw.fsim || raw.gate < 0) continue;
    int broken = (raw.input_state[0] == InputState::kBroken) + (raw.input_state[1] == InputState::kBroken);
    if (broken != 1) continue;
    int p = raw.input_state[0] == InputState::kBroken ? 0 : 1;
    Label omega = raw.outputs[1 - p];
    if (!tn.labels[omega].alive || tn.labels[omega].downstream < 0) continue;
    int gate = raw.gate;
    companion_rank_one(tn, gate, static_cast<PinnedInput>(p));
    gates.push_back(gate);
  }
  return gates;
}

}  // namespace sparsesim
