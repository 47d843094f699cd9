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

#include "sparsesim/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sparsesim/error.hpp"

namespace sparsesim {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

json budget_to_json(const FidelityBudget& b) {
  return {{"k_broken_edges", b.k_broken_edges},
          {"companion_factors", b.companion_factors},
          {"estimate", b.estimate()}};
}

FidelityBudget budget_from_json(const json& j) {
  FidelityBudget b;
  b.k_broken_edges = j.at("k_broken_edges").get<int>();
  b.companion_factors = j.at("companion_factors").get<std::vector<double>>();
  return b;
}

json plan_to_json(const ContractionPlan& plan) {
  json order = json::array();
  for (const Step& s : plan.order.steps) order.push_back({s.i, s.j});
  json companions = json::array();
  for (const CompanionRecord& c : plan.slicing.companions) {
    companions.push_back({{"edge", c.edge},
                          {"gate", c.gate},
                          {"input", c.input},
                          {"source", c.source},
                          {"factor", c.factor}});
  }
  return {{"order", order},
          {"head_steps", plan.head_steps},
          {"split_cycle", plan.split_cycle},
          {"global_slices", plan.slicing.global_edges},
          {"local_head", plan.slicing.local_head_edges},
          {"local_tail", plan.slicing.local_tail_edges},
          {"companions", companions},
          {"space_budget", plan.space_budget}};
}

ContractionPlan plan_from_json(const json& j) {
  try {
    ContractionPlan plan;
    for (const auto& s : j.at("order")) plan.order.steps.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
    plan.head_steps = j.value("head_steps", 0);
    plan.split_cycle = j.at("split_cycle").get<int>();
    plan.slicing.global_edges = j.at("global_slices").get<std::vector<Label>>();
    plan.slicing.local_head_edges = j.at("local_head").get<std::vector<Label>>();
    plan.slicing.local_tail_edges = j.at("local_tail").get<std::vector<Label>>();
    for (const auto& c : j.at("companions")) {
      plan.slicing.companions.push_back({c.at("edge").get<Label>(), c.at("gate").get<int>(),
                                         c.value("input", 0), c.value("source", Label{-1}),
                                         c.value("factor", 1.0)});
    }
    plan.space_budget = j.value("space_budget", std::uint64_t{0});
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("plan: ") + e.what());
  }
}

json recipe_to_json(const NetworkRecipe& r) {
  json breaks = json::array();
  for (auto [g, i] : r.breaks) breaks.push_back({g, i});
  return {{"holes", r.holes},
          {"auto_holes", r.auto_holes},
          {"breaks", breaks},
          {"broken_companions", r.broken_companions}};
}

NetworkRecipe recipe_from_json(const json& j) {
  try {
    NetworkRecipe r;
    r.holes = j.value("holes", std::vector<int>{});
    r.auto_holes = j.value("auto_holes", 0);
    for (const auto& b : j.value("breaks", json::array())) {
      r.breaks.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
    }
    r.broken_companions = j.value("broken_companions", true);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("network recipe: ") + e.what());
  }
}

json request_spec_to_json(const RequestSpec& r) {
  return {{"open_qubits", r.open_qubits}, {"num_groups", r.num_groups}, {"seed", r.seed}};
}

RequestSpec request_spec_from_json(const json& j) {
  try {
    RequestSpec r;
    r.open_qubits = j.at("open_qubits").get<std::vector<int>>();
    r.num_groups = j.at("num_groups").get<std::size_t>();
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("request: ") + e.what());
  }
}

json complexity_to_json(const ComplexityReport& r) {
  return {{"time_per_subtask_head", r.time_per_subtask_head},
          {"time_per_subtask_tail", r.time_per_subtask_tail},
          {"overall_time", r.overall_time},
          {"log2_overall_time", r.log2_overall_time},
          {"space", r.space},
          {"log2_space", r.log2_space},
          {"subtasks", r.subtasks}};
}

json network_to_json(const TensorNetwork& tn, bool with_data) {
  json tensors = json::array();
  for (int c : tn.alive_composites()) {
    const Composite& comp = tn.composites[c];
    json t{{"id", c},
           {"labels", tn.external_labels(c)},
           {"dims", std::vector<Index>(comp.data.dims().begin(), comp.data.dims().end())},
           {"layer", comp.layer},
           {"raws", comp.raws}};
    if (with_data) {
      json data = json::array();
      for (const cdouble& v : comp.data.data()) data.push_back({v.real(), v.imag()});
      t["data"] = data;
    }
    tensors.push_back(t);
  }
  json edges = json::array();
  for (Label l = 0; l < static_cast<Label>(tn.labels.size()); ++l) {
    const LabelInfo& info = tn.labels[l];
    if (!info.alive) continue;
    int up = tn.owner[info.upstream];
    int down = info.downstream >= 0 ? tn.owner[info.downstream] : -1;
    if (up == down) continue;
    edges.push_back({{"label", l}, {"qubit", info.qubit}, {"from", up}, {"to", down}});
  }
  return {{"num_qubits", tn.num_qubits},
          {"tensors", tensors},
          {"edges", edges},
          {"output_labels", tn.output_labels},
          {"budget", budget_to_json(tn.budget)}};
}

json stats_to_json(const StatsReport& s) {
  return {{"fidelity", s.fidelity},
          {"linear_xeb", s.linear_xeb},
          {"linear_xeb_stderr", s.linear_xeb_stderr},
          {"log_xeb", s.log_xeb},
          {"entropy_true", s.entropy_true},
          {"entropy_sampled", s.entropy_sampled},
          {"pt_histogram",
           {{"bin_edges", s.porter_thomas.bin_edges}, {"counts", s.porter_thomas.counts}}},
          {"pt_ks", s.porter_thomas.ks},
          {"estimate", s.estimate},
          {"path_fraction", s.path_fraction},
          {"sparse_norm", s.sparse_norm},
          {"num_samples", s.num_samples},
          {"num_qubits", s.num_qubits}};
}

StatsReport stats_from_json(const json& j) {
  StatsReport s;
  try {
    s.fidelity = j.at("fidelity").get<double>();
    s.linear_xeb = j.at("linear_xeb").get<double>();
    s.linear_xeb_stderr = j.value("linear_xeb_stderr", 0.0);
    s.log_xeb = j.at("log_xeb").get<double>();
    s.entropy_true = j.at("entropy_true").get<double>();
    s.entropy_sampled = j.at("entropy_sampled").get<double>();
    s.porter_thomas.bin_edges = j.at("pt_histogram").at("bin_edges").get<std::vector<double>>();
    s.porter_thomas.counts = j.at("pt_histogram").at("counts").get<std::vector<std::uint64_t>>();
    s.porter_thomas.ks = j.at("pt_ks").get<double>();
    s.estimate = j.value("estimate", 1.0);
    s.path_fraction = j.value("path_fraction", 1.0);
    s.sparse_norm = j.value("sparse_norm", 0.0);
    s.num_samples = j.value("num_samples", 0);
    s.num_qubits = j.value("num_qubits", 0);
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("stats: ") + e.what());
  }
  return s;
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian");

constexpr char kMagic[8] = {'S', 'P', 'A', 'M', 'P', '0', '0', '1'};

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ParseError(0, 0, "amplitude file truncated");
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string encode_amplitudes(const SparseState& state, const json& header) {
  json h = header;
  h["num_qubits"] = state.request.num_qubits;
  h["open_qubits"] = state.request.open_qubits;
  h["L"] = state.request.num_groups();
  h["l"] = state.request.group_size();
  h["path_fraction"] = state.path_fraction;
  h["subtasks_summed"] = state.subtasks_summed;
  h["subtasks_total"] = state.subtasks_total;
  h["budget"] = budget_to_json(state.budget);
  const std::string text = h.dump();
  std::string out(kMagic, 8);
  put<std::uint64_t>(out, text.size());
  out += text;
  for (Pattern g : state.request.groups) put<std::uint64_t>(out, g);
  for (std::size_t g = 0; g < state.request.num_groups(); ++g) {
    for (const cdouble& a : state.group(g)) {
      put<double>(out, a.real());
      put<double>(out, a.imag());
    }
  }
  return out;
}

SparseState decode_amplitudes(std::string_view bytes, json* header) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw ParseError(0, 0, "not an amplitude file");
  }
  std::size_t pos = 8;
  auto len = get<std::uint64_t>(bytes, pos);
  if (pos + len > bytes.size()) throw ParseError(0, 0, "amplitude file truncated");
  json h;
  try {
    h = json::parse(bytes.substr(pos, len));
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("amplitude header: ") + e.what());
  }
  pos += len;
  SparseState s;
  try {
    s.request.num_qubits = h.at("num_qubits").get<int>();
    s.request.open_qubits = h.at("open_qubits").get<std::vector<int>>();
    s.path_fraction = h.at("path_fraction").get<double>();
    s.subtasks_summed = h.value("subtasks_summed", std::uint64_t{1});
    s.subtasks_total = h.value("subtasks_total", std::uint64_t{1});
    s.budget = budget_from_json(h.at("budget"));
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("amplitude header: ") + e.what());
  }
  const auto L = h.at("L").get<std::uint64_t>();
  const auto l = static_cast<std::size_t>(s.request.group_size());
  for (std::uint64_t g = 0; g < L; ++g) s.request.groups.push_back(get<std::uint64_t>(bytes, pos));
  s.request.validate();
  s.rows = s.request.groups;
  std::sort(s.rows.begin(), s.rows.end());
  s.rows.erase(std::unique(s.rows.begin(), s.rows.end()), s.rows.end());
  s.amplitudes.assign(s.rows.size() * l, cdouble(0.0));
  for (std::uint64_t g = 0; g < L; ++g) {
    auto row = static_cast<std::uint32_t>(
        std::lower_bound(s.rows.begin(), s.rows.end(), s.request.groups[g]) - s.rows.begin());
    s.group_row.push_back(row);
    for (std::size_t mu = 0; mu < l; ++mu) {
      double re = get<double>(bytes, pos);
      double im = get<double>(bytes, pos);
      s.amplitudes[row * l + mu] = cdouble(re, im);
    }
  }
  if (pos != bytes.size()) throw ParseError(0, 0, "trailing bytes in amplitude file");
  if (header) *header = std::move(h);
  return s;
}

std::string amplitudes_csv(const SparseState& state) {
  std::ostringstream out;
  out.precision(17);
  out << "group,mu,bitstring,re,im\n";
  for (std::size_t g = 0; g < state.request.num_groups(); ++g) {
    auto amps = state.group(g);
    for (int mu = 0; mu < state.request.group_size(); ++mu) {
      out << g << ',' << mu << ','
          << pattern_to_string(state.request.bitstring(g, mu), state.request.num_qubits) << ','
          << amps[mu].real() << ',' << amps[mu].imag() << '\n';
    }
  }
  return out.str();
}

std::string encode_samples(const SampleSet& samples, const json& header) {
  json h = header;
  h["num_qubits"] = samples.num_qubits;
  h["seed"] = samples.seed;
  h["sampler"] = sampler_name(samples.sampler);
  h["budget"] = budget_to_json(samples.budget);
  h["path_fraction"] = samples.path_fraction;
  h["source_digest"] = samples.source_digest;
  std::string out = "#" + h.dump() + "\n";
  for (Pattern p : samples.bitstrings) out += pattern_to_string(p, samples.num_qubits) + "\n";
  return out;
}

SampleSet decode_samples(std::string_view text, json* header) {
  if (text.empty() || text[0] != '#') throw ParseError(1, 1, "samples file must start with '#'");
  std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) throw ParseError(1, 1, "samples header is not terminated");
  json h;
  try {
    h = json::parse(text.substr(1, eol - 1));
  } catch (const json::exception& e) {
    throw ParseError(1, 2, std::string("samples header: ") + e.what());
  }
  SampleSet s;
  s.num_qubits = h.at("num_qubits").get<int>();
  s.seed = h.value("seed", std::uint64_t{0});
  s.sampler = sampler_from_name(h.value("sampler", std::string("frugal")));
  if (h.contains("budget")) s.budget = budget_from_json(h["budget"]);
  s.path_fraction = h.value("path_fraction", 1.0);
  s.source_digest = h.value("source_digest", std::string());
  std::size_t pos = eol + 1;
  std::size_t line = 2;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    if (!l.empty()) {
      if (static_cast<int>(l.size()) != s.num_qubits) {
        throw ParseError(line, 1, "sample length differs from num_qubits");
      }
      try {
        s.bitstrings.push_back(pattern_from_string(std::string(l)));
      } catch (const ValidationError& e) {
        throw ParseError(line, 1, e.what());
      }
    }
    pos = end + 1;
    ++line;
  }
  if (header) *header = std::move(h);
  return s;
}

}  // namespace sparsesim
