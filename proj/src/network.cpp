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

#include "sparsesim/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "sparsesim/error.hpp"

namespace sparsesim {

double FidelityBudget::estimate() const {
  double value = std::ldexp(1.0, -k_broken_edges);
  for (double f : companion_factors) value *= f;
  return value;
}

double estimate_fidelity(const FidelityBudget& budget) { return budget.estimate(); }

FidelityBudget combine(const FidelityBudget& a, const FidelityBudget& b) {
  FidelityBudget out = a;
  out.k_broken_edges += b.k_broken_edges;
  out.companion_factors.insert(out.companion_factors.end(), b.companion_factors.begin(),
                               b.companion_factors.end());
  return out;
}

std::vector<int> TensorNetwork::alive_composites() const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(composites.size()); ++c) {
    if (composites[c].alive) out.push_back(c);
  }
  return out;
}

int TensorNetwork::num_alive() const {
  return static_cast<int>(std::count_if(composites.begin(), composites.end(),
                                        [](const Composite& c) { return c.alive; }));
}

std::vector<Label> TensorNetwork::external_labels(int c) const {
  std::vector<Label> out;
  for (int r : composites[c].raws) {
    for (Label l : raws[r].data.labels()) {
      const LabelInfo& info = labels[l];
      int other = info.upstream == r ? info.downstream : info.upstream;
      if (other < 0 || owner[other] != c) out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int TensorNetwork::across(int c, Label l) const {
  const LabelInfo& info = labels[l];
  if (!info.alive || info.downstream < 0) return -1;
  int up = owner[info.upstream], down = owner[info.downstream];
  if (up == c) return down == c ? -1 : down;
  if (down == c) return up;
  return -1;
}

std::vector<int> TensorNetwork::neighbors(int c) const {
  std::vector<int> out;
  for (Label l : external_labels(c)) {
    int other = across(c, l);
    if (other >= 0) out.push_back(other);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TensorNetwork::connected() const {
  auto alive = alive_composites();
  if (alive.size() <= 1) return true;
  std::vector<char> seen(composites.size(), 0);
  std::deque<int> queue{alive.front()};
  seen[alive.front()] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int nb : neighbors(c)) {
      if (!seen[nb]) {
        seen[nb] = 1;
        ++count;
        queue.push_back(nb);
      }
    }
  }
  return count == alive.size();
}

namespace {

constexpr Label kPendingA = -2;
constexpr Label kPendingB = -3;

Label new_label(TensorNetwork& tn, int qubit, int upstream) {
  tn.labels.push_back({qubit, upstream, -1, true});
  return static_cast<Label>(tn.labels.size() - 1);
}

int new_composite(TensorNetwork& tn, std::vector<int> raws);

// Tensor of a gate over [in_a, in_b, out_a, out_b] (or [in, out]); inputs
// that are not live are sliced at 0, and so are dead outputs.
Tensor<cdouble> gate_tensor(const TensorNetwork& tn, const RawTensor& raw, const Matrix4* fsim,
                            const Matrix2* single) {
  Tensor<cdouble> t;
  std::array<Label, 2> in{raw.inputs[0] >= 0 ? raw.inputs[0] : kPendingA,
                          raw.inputs[1] >= 0 ? raw.inputs[1] : kPendingB};
  if (raw.fsim) {
    std::vector<cdouble> data(16);
    for (int ia = 0; ia < 2; ++ia)
      for (int ib = 0; ib < 2; ++ib)
        for (int oa = 0; oa < 2; ++oa)
          for (int ob = 0; ob < 2; ++ob)
            data[((ia * 2 + ib) * 2 + oa) * 2 + ob] = (*fsim)[(oa * 2 + ob) * 4 + ia * 2 + ib];
    t = Tensor<cdouble>({in[0], in[1], raw.outputs[0], raw.outputs[1]}, {2, 2, 2, 2},
                        std::move(data));
  } else {
    std::vector<cdouble> data(4);
    for (int i = 0; i < 2; ++i)
      for (int o = 0; o < 2; ++o) data[i * 2 + o] = (*single)[o * 2 + i];
    t = Tensor<cdouble>({in[0], raw.outputs[0]}, {2, 2}, std::move(data));
  }
  const int arity = raw.fsim ? 2 : 1;
  for (int k = 0; k < arity; ++k) {
    if (raw.input_state[k] != InputState::kLive) t = slice_index(t, in[k], 0);
  }
  for (int k = 0; k < arity; ++k) {
    if (!tn.labels[raw.outputs[k]].alive) t = slice_index(t, raw.outputs[k], 0);
  }
  return t;
}

// Contract the raws of composite c, growing along internal labels.
void recompute(TensorNetwork& tn, int c) {
  Composite& comp = tn.composites[c];
  if (comp.raws.empty()) {
    comp.alive = false;
    return;
  }
  std::vector<char> done(tn.raws.size(), 0);
  Tensor<cdouble> acc;
  std::vector<int> pending = comp.raws;
  std::deque<int> frontier;
  auto absorb = [&](int r) {
    done[r] = 1;
    acc = contract_pair(acc, tn.raws[r].data);
    for (Label l : tn.raws[r].data.labels()) {
      const LabelInfo& info = tn.labels[l];
      int other = info.upstream == r ? info.downstream : info.upstream;
      if (other >= 0 && tn.owner[other] == c && !done[other]) frontier.push_back(other);
    }
  };
  for (int start : pending) {
    if (done[start]) continue;
    frontier.push_back(start);
    while (!frontier.empty()) {
      int r = frontier.front();
      frontier.pop_front();
      if (!done[r]) absorb(r);
    }
  }
  std::vector<Label> sorted(acc.labels().begin(), acc.labels().end());
  std::sort(sorted.begin(), sorted.end());
  comp.data = acc.permuted(sorted);
  comp.layer = tn.num_moments;
  for (int r : comp.raws) comp.layer = std::min(comp.layer, tn.raws[r].moment);
}

int new_composite(TensorNetwork& tn, std::vector<int> raws) {
  int c = static_cast<int>(tn.composites.size());
  std::sort(raws.begin(), raws.end());
  tn.composites.push_back({std::move(raws), Tensor<cdouble>(), 0, true});
  for (int r : tn.composites[c].raws) tn.owner[r] = c;
  recompute(tn, c);
  return c;
}

// Split composite c into connected components; the component holding its
// smallest raw keeps the id.
void resplit(TensorNetwork& tn, int c) {
  Composite& comp = tn.composites[c];
  if (!comp.alive) return;
  std::vector<int> raws = comp.raws;
  std::vector<char> seen(tn.raws.size(), 0);
  std::vector<std::vector<int>> parts;
  for (int start : raws) {
    if (seen[start]) continue;
    std::vector<int> part;
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      int r = queue.front();
      queue.pop_front();
      part.push_back(r);
      for (Label l : tn.raws[r].data.labels()) {
        const LabelInfo& info = tn.labels[l];
        int other = info.upstream == r ? info.downstream : info.upstream;
        if (other >= 0 && tn.owner[other] == c && !seen[other]) {
          seen[other] = 1;
          queue.push_back(other);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  if (parts.size() <= 1) {
    recompute(tn, c);
    return;
  }
  tn.composites[c].raws = parts[0];
  recompute(tn, c);
  for (std::size_t i = 1; i < parts.size(); ++i) new_composite(tn, parts[i]);
}

void refresh(TensorNetwork& tn, std::vector<int> comps) {
  std::sort(comps.begin(), comps.end());
  comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  for (int c : comps) resplit(tn, c);
}

void merge_into(TensorNetwork& tn, int from, int to) {
  Composite& src = tn.composites[from];
  Composite& dst = tn.composites[to];
  Tensor<cdouble> merged = contract_pair(dst.data, src.data);
  std::vector<Label> sorted(merged.labels().begin(), merged.labels().end());
  std::sort(sorted.begin(), sorted.end());
  dst.data = merged.permuted(sorted);
  for (int r : src.raws) tn.owner[r] = to;
  dst.raws.insert(dst.raws.end(), src.raws.begin(), src.raws.end());
  std::sort(dst.raws.begin(), dst.raws.end());
  dst.layer = std::min(dst.layer, src.layer);
  src.raws.clear();
  src.alive = false;
  src.data = Tensor<cdouble>();
}

int input_slot(const RawTensor& raw, Label l) {
  for (int k = 0; k < 2; ++k) {
    if (raw.inputs[k] == l && l >= 0) return k;
  }
  return -1;
}

// Fix label l to 0 on its upstream and downstream raws and retire it.
std::vector<int> pin_label(TensorNetwork& tn, Label l, InputState downstream_state) {
  LabelInfo& info = tn.labels[l];
  std::vector<int> touched;
  RawTensor& up = tn.raws[info.upstream];
  up.data = slice_index(up.data, l, 0);
  touched.push_back(tn.owner[info.upstream]);
  if (info.downstream >= 0) {
    RawTensor& down = tn.raws[info.downstream];
    down.data = slice_index(down.data, l, 0);
    down.input_state[input_slot(down, l)] = downstream_state;
    touched.push_back(tn.owner[info.downstream]);
  }
  info.alive = false;
  return touched;
}

const RawTensor& gate_raw(const TensorNetwork& tn, int gate) {
  if (gate < 0 || gate >= static_cast<int>(tn.raws.size()) || tn.raws[gate].gate != gate) {
    throw ValidationError("no gate " + std::to_string(gate) + " in network");
  }
  return tn.raws[gate];
}

}  // namespace

TensorNetwork build_network(const Circuit& circuit) {
  circuit.validate();
  TensorNetwork tn;
  tn.num_qubits = circuit.num_qubits();
  tn.num_moments = circuit.num_moments();
  std::vector<Label> wire(tn.num_qubits, -1);
  int gate_id = 0;
  for (int t = 0; t < tn.num_moments; ++t) {
    for (const Gate& g : circuit.moments[t]) {
      RawTensor raw;
      raw.gate = gate_id;
      raw.moment = t;
      Matrix4 f{};
      const Matrix2* single = nullptr;
      if (const auto* fs = std::get_if<FsimGate>(&g)) {
        raw.fsim = true;
        raw.params = fs->params;
        raw.qubits = fs->targets;
        f = fsim_matrix(fs->params);
      } else {
        const auto& sg = std::get<SingleGate>(g);
        raw.qubits = {sg.target, -1};
        single = &sg.matrix;
      }
      const int arity = raw.fsim ? 2 : 1;
      for (int k = 0; k < arity; ++k) {
        int q = raw.qubits[k];
        raw.inputs[k] = wire[q];
        raw.input_state[k] = wire[q] >= 0 ? InputState::kLive : InputState::kInitial;
        if (wire[q] >= 0) tn.labels[wire[q]].downstream = gate_id;
        raw.outputs[k] = new_label(tn, q, gate_id);
        wire[q] = raw.outputs[k];
      }
      raw.data = gate_tensor(tn, raw, &f, single);
      tn.raws.push_back(std::move(raw));
      ++gate_id;
    }
  }
  for (int q = 0; q < tn.num_qubits; ++q) {
    if (wire[q] >= 0) continue;
    int r = static_cast<int>(tn.raws.size());
    RawTensor raw;
    raw.moment = tn.num_moments;
    raw.qubits = {q, -1};
    raw.outputs[0] = wire[q] = new_label(tn, q, r);
    raw.data = Tensor<cdouble>({raw.outputs[0]}, {2}, {1.0, 0.0});
    tn.raws.push_back(std::move(raw));
  }
  tn.output_labels = wire;
  tn.owner.assign(tn.raws.size(), -1);
  for (int r = 0; r < static_cast<int>(tn.raws.size()); ++r) new_composite(tn, {r});
  return tn;
}

void simplify(TensorNetwork& tn) {
  bool changed = true;
  while (changed && tn.num_alive() > 1) {
    changed = false;
    for (int c = 0; c < static_cast<int>(tn.composites.size()); ++c) {
      if (!tn.composites[c].alive || tn.num_alive() <= 1) continue;
      auto ext = tn.external_labels(c);
      if (ext.size() > 2) continue;
      int target = -1;
      for (Label l : ext) {  // producer across an input label
        const LabelInfo& info = tn.labels[l];
        if (info.downstream >= 0 && tn.owner[info.downstream] == c) {
          target = tn.owner[info.upstream];
          break;
        }
      }
      if (target < 0) {  // consumer across an outgoing label
        for (Label l : ext) {
          const LabelInfo& info = tn.labels[l];
          if (info.downstream >= 0) {
            target = tn.owner[info.downstream];
            break;
          }
        }
      }
      if (target < 0) {
        // Only network outputs (or nothing) left: attach to the latest layer.
        for (int other : tn.alive_composites()) {
          if (other == c) continue;
          if (target < 0 || tn.composites[other].layer > tn.composites[target].layer) {
            target = other;
          }
        }
      }
      if (target < 0) continue;
      merge_into(tn, c, target);
      changed = true;
    }
  }
}

void break_edge(TensorNetwork& tn, Label edge) {
  if (edge < 0 || edge >= static_cast<Label>(tn.labels.size()) || !tn.labels[edge].alive) {
    throw ValidationError("break_edge: no live label " + std::to_string(edge));
  }
  const LabelInfo& info = tn.labels[edge];
  if (info.downstream < 0) {
    throw ValidationError("break_edge: label " + std::to_string(edge) + " is a boundary edge");
  }
  const int down = info.downstream;
  const int slot = input_slot(tn.raws[down], edge);
  auto touched = pin_label(tn, edge, InputState::kBroken);
  tn.budget.k_broken_edges += 1;
  tn.ledger.push_back({ApproxKind::kEdgeBreak, tn.raws[down].gate, slot});
  refresh(tn, touched);
}

Label gate_input_label(const TensorNetwork& tn, int gate, int which) {
  const RawTensor& raw = gate_raw(tn, gate);
  if (which < 0 || which > (raw.fsim ? 1 : 0)) throw ValidationError("gate input out of range");
  return raw.inputs[which];
}

void drill_hole(TensorNetwork& tn, int gate) {
  const RawTensor& check = gate_raw(tn, gate);
  if (!check.alive) throw ValidationError("drill_hole: gate " + std::to_string(gate) + " already removed");
  if (!check.fsim) throw ValidationError("drill_hole: gate " + std::to_string(gate) + " is not an fSim");
  for (int k = 0; k < 2; ++k) {
    if (check.input_state[k] != InputState::kLive || !tn.labels[check.inputs[k]].alive) {
      throw ValidationError("drill_hole: input of gate " + std::to_string(gate) + " is not internal");
    }
  }
  std::vector<int> touched{tn.owner[gate]};
  Hole hole{gate, check.moment, check.inputs};
  for (int k = 0; k < 2; ++k) {
    auto t = pin_label(tn, hole.broken[k], InputState::kBroken);
    touched.insert(touched.end(), t.begin(), t.end());
  }
  // F|00> = |00>: the outputs become |0> pins on the consumers.
  for (int k = 0; k < 2; ++k) {
    Label o = tn.raws[gate].outputs[k];
    LabelInfo& info = tn.labels[o];
    if (info.downstream >= 0) {
      RawTensor& down = tn.raws[info.downstream];
      down.data = slice_index(down.data, o, 0);
      down.input_state[input_slot(down, o)] = InputState::kInitial;
      touched.push_back(tn.owner[info.downstream]);
      info.alive = false;
    } else {
      int r = static_cast<int>(tn.raws.size());
      RawTensor vec;
      vec.moment = tn.num_moments;
      vec.qubits = {info.qubit, -1};
      vec.outputs[0] = o;
      vec.data = Tensor<cdouble>({o}, {2}, {1.0, 0.0});
      tn.raws.push_back(std::move(vec));
      tn.owner.push_back(-1);
      tn.labels[o].upstream = r;
      new_composite(tn, {r});
    }
  }
  RawTensor& raw = tn.raws[gate];
  raw.alive = false;
  Composite& comp = tn.composites[tn.owner[gate]];
  comp.raws.erase(std::find(comp.raws.begin(), comp.raws.end(), gate));
  tn.owner[gate] = -1;
  tn.budget.k_broken_edges += 2;
  tn.ledger.push_back({ApproxKind::kHoleDrill, gate, 0});
  tn.holes.push_back(hole);
  refresh(tn, touched);
}

std::optional<CompanionCandidate> companion_candidate(const TensorNetwork& tn, int gate,
                                                      PinnedInput pinned) {
  const RawTensor& raw = gate_raw(tn, gate);
  if (!raw.alive || !raw.fsim) return std::nullopt;
  const int other = 1 - static_cast<int>(pinned);
  const Label omega = raw.outputs[other];
  const LabelInfo& info = tn.labels[omega];
  if (!info.alive || info.downstream < 0) return std::nullopt;
  const double s = std::sin(raw.params.theta);
  CompanionCandidate cand{omega, omega, -1, 0.5 * (1.0 + s * s)};
  const int c = tn.owner[gate];
  if (tn.owner[info.downstream] != c) return cand;
  // The consumer sits inside the fSim's composite; it can move downstream if
  // it is a single-qubit gate whose output leaves the composite.
  const RawTensor& v = tn.raws[info.downstream];
  if (v.fsim || v.gate < 0) return std::nullopt;
  const Label next = v.outputs[0];
  const LabelInfo& next_info = tn.labels[next];
  if (!next_info.alive || next_info.downstream < 0 || tn.owner[next_info.downstream] == c) {
    return std::nullopt;
  }
  cand.external = next;
  cand.move_raw = info.downstream;
  return cand;
}

double companion_rank_one(TensorNetwork& tn, int gate, PinnedInput pinned,
                          std::span<const Label> sliced) {
  const RawTensor& check = gate_raw(tn, gate);
  if (!check.alive || !check.fsim) {
    throw ValidationError("companion: gate " + std::to_string(gate) + " is not a live fSim");
  }
  auto is_sliced = [&](Label l) {
    return l >= 0 && std::find(sliced.begin(), sliced.end(), l) != sliced.end();
  };
  std::array<bool, 2> broken{}, live_sliced{};
  for (int k = 0; k < 2; ++k) {
    broken[k] = check.input_state[k] == InputState::kBroken;
    live_sliced[k] = check.input_state[k] == InputState::kLive && is_sliced(check.inputs[k]);
  }
  const int p = static_cast<int>(pinned);
  const int pins = broken[0] + broken[1] + live_sliced[0] + live_sliced[1];
  if (pins != 1 || !(broken[p] || live_sliced[p])) {
    throw ValidationError("companion: gate " + std::to_string(gate) +
                          " needs exactly one pinned or sliced input, the requested one");
  }
  const int other = 1 - p;
  const Label omega = check.outputs[other];
  if (!tn.labels[omega].alive || tn.labels[omega].downstream < 0) {
    throw ValidationError("companion: output of gate " + std::to_string(gate) +
                          " is a network output or already cut");
  }
  std::optional<CompanionCandidate> cand;
  if (!broken[p]) {
    cand = companion_candidate(tn, gate, pinned);
    if (!cand) {
      throw ValidationError("companion: output of gate " + std::to_string(gate) +
                            " cannot be separated from its composite");
    }
  }
  const double s = std::sin(check.params.theta);
  const double factor = 0.5 * (1.0 + s * s);
  const Label source = check.inputs[p];
  std::vector<int> touched{tn.owner[gate]};

  // F' = F * delta(input p, output other).
  Matrix4 f = fsim_matrix(check.params);
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int oa = 0; oa < 2; ++oa)
        for (int ob = 0; ob < 2; ++ob) {
          int in_p = p == 0 ? ia : ib;
          int out_o = other == 0 ? oa : ob;
          if (in_p != out_o) f[(oa * 2 + ob) * 4 + ia * 2 + ib] = 0.0;
        }
  tn.raws[gate].data = gate_tensor(tn, tn.raws[gate], &f, nullptr);

  if (broken[p]) {
    // Input fixed to 0, so the companion is fixed to 0: an exact cut.
    auto t = pin_label(tn, omega, InputState::kInitial);
    touched.insert(touched.end(), t.begin(), t.end());
  } else {
    if (cand->move_raw >= 0) {
      const int from = tn.owner[cand->move_raw];
      const int to = tn.owner[tn.labels[cand->external].downstream];
      auto& src = tn.composites[from].raws;
      src.erase(std::find(src.begin(), src.end(), cand->move_raw));
      auto& dst = tn.composites[to].raws;
      dst.insert(std::upper_bound(dst.begin(), dst.end(), cand->move_raw), cand->move_raw);
      tn.owner[cand->move_raw] = to;
      // Layers are kept: a head/tail split may already reference them.
      const int layer = tn.composites[to].layer;
      recompute(tn, to);
      tn.composites[to].layer = layer;
      touched.push_back(from);
    }
    tn.ties.push_back({source, omega, gate});
  }
  tn.budget.companion_factors.push_back(factor);
  tn.ledger.push_back({ApproxKind::kCompanion, gate, p});
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (int c : touched) {
    const int layer = tn.composites[c].layer;
    resplit(tn, c);
    tn.composites[c].layer = std::min(layer, tn.composites[c].layer);
  }
  return factor;
}

void insert_matrix_on_edge(TensorNetwork& tn, Label edge, const Matrix2& m) {
  if (edge < 0 || edge >= static_cast<Label>(tn.labels.size()) || !tn.labels[edge].alive ||
      tn.labels[edge].downstream < 0) {
    throw ValidationError("insert_matrix_on_edge: not an internal label");
  }
  const int down = tn.labels[edge].downstream;
  const int r = static_cast<int>(tn.raws.size());
  const Label out = new_label(tn, tn.labels[edge].qubit, r);
  tn.labels[out].downstream = down;
  tn.labels[edge].downstream = r;
  RawTensor& consumer = tn.raws[down];
  consumer.data = consumer.data.relabeled(edge, out);
  consumer.inputs[input_slot(consumer, edge)] = out;
  RawTensor raw;
  raw.moment = consumer.moment;
  raw.qubits = {tn.labels[edge].qubit, -1};
  raw.inputs[0] = edge;
  raw.input_state[0] = InputState::kLive;
  raw.outputs[0] = out;
  raw.data = Tensor<cdouble>({edge, out}, {2, 2}, {m[0], m[2], m[1], m[3]});
  tn.raws.push_back(std::move(raw));
  tn.owner.push_back(-1);
  const int c = tn.owner[down];
  recompute(tn, c);
  new_composite(tn, {r});
}

Tensor<cdouble> contract_network(const TensorNetwork& tn) {
  auto alive = tn.alive_composites();
  Tensor<cdouble> acc;
  std::vector<char> done(tn.composites.size(), 0);
  std::deque<int> frontier;
  for (int start : alive) {
    if (done[start]) continue;
    frontier.push_back(start);
    while (!frontier.empty()) {
      int c = frontier.front();
      frontier.pop_front();
      if (done[c]) continue;
      done[c] = 1;
      acc = contract_pair(acc, tn.composites[c].data);
      for (int nb : tn.neighbors(c)) {
        if (!done[nb]) frontier.push_back(nb);
      }
    }
  }
  return acc.permuted(tn.output_labels);
}

}  // namespace sparsesim
