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

// sparsesim: file-based stages of the sparse-state simulator.
//
//   gen     random circuit file
//   plan    approximations, head/tail split, order and slices
//   run     subtask execution -> amplitude file
//   sample  amplitude file -> bitstrings
//   verify  samples + amplitudes against the exact state -> stats JSON
//   oracle  exact state vector -> amplitude file

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsesim/circuit.hpp"
#include "sparsesim/engine.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/io.hpp"
#include "sparsesim/oracle.hpp"
#include "sparsesim/pipeline.hpp"
#include "sparsesim/planner.hpp"
#include "sparsesim/sampling.hpp"

namespace {

using nlohmann::json;
using namespace sparsesim;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

int default_workers() {
  if (const char* env = std::getenv("SPARSE_SAMPLER_THREADS")) {
    try {
      int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
    throw ValidationError("SPARSE_SAMPLER_THREADS must be a positive integer");
  }
  return 1;
}

Dtype parse_dtype(const std::string& s) {
  if (s == "complex128") return Dtype::kComplex128;
  if (s == "complex64") return Dtype::kComplex64;
  throw ValidationError("unknown dtype '" + s + "' (complex64 or complex128)");
}

// Comma or whitespace separated integers; "gate:input" pairs for breaks.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(text);
  while (in >> token) {
    std::istringstream parts(token);
    std::string item;
    while (std::getline(parts, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("not an integer: '" + item + "'");
      }
    }
  }
  return out;
}

std::pair<int, int> parse_break(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("--break expects gate:input, got " + s);
  auto gate = parse_int_list(s.substr(0, colon));
  auto input = parse_int_list(s.substr(colon + 1));
  if (gate.size() != 1 || input.size() != 1) throw ValidationError("--break expects gate:input");
  return {gate[0], input[0]};
}

struct Loaded {
  Circuit circuit;
  std::string digest;
};

Loaded load_circuit(const std::string& path) {
  std::string text = read_file(path);
  return {parse_circuit(text), sha256_hex(text)};
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  int rows = 0, cols = 0, cycles = 0;
  std::string pattern = "ABCDCDAB";
  std::uint64_t seed = 0;
  double jitter = 0.15;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  GeneratorOptions opts;
  opts.jitter = a.jitter;
  Circuit c = generate_random_circuit(a.rows, a.cols, a.cycles, a.pattern, a.seed, opts);
  std::string text = serialize_circuit(c);
  json meta{{"version", kToolVersion}, {"seed", a.seed},       {"rows", a.rows},
            {"cols", a.cols},          {"cycles", a.cycles},   {"pattern", a.pattern},
            {"jitter", a.jitter}};
  text.insert(2, "\"generator\": " + meta.dump() + ",\n");
  write_file(a.out, text);
  std::cout << "wrote " << a.out << ": " << c.num_qubits() << " qubits, " << c.num_moments()
            << " moments, " << c.num_gates() << " gates\n";
  return 0;
}

// --- plan ------------------------------------------------------------------

struct PlanArgs {
  std::string circuit, out, holes_file;
  int holes = 0;
  std::vector<std::string> breaks;
  bool no_companions = false;
  int space_budget = 0;  // log2; 0 = unbounded
  int split_cycle = -1;
  bool greedy_tail = false;
  int trials = 4;
  int min_global = 0;
  std::uint64_t seed = 0;
  int open = -1;
  std::string open_qubits;
  std::size_t groups = 1;
};

RequestSpec request_spec(int n, const PlanArgs& a) {
  RequestSpec spec;
  spec.num_groups = a.groups;
  spec.seed = a.seed;
  if (!a.open_qubits.empty()) {
    spec.open_qubits = parse_int_list(a.open_qubits);
  } else {
    int k = a.open < 0 ? n : a.open;
    if (k > n) throw ValidationError("--open exceeds the qubit count");
    for (int q = n - k; q < n; ++q) spec.open_qubits.push_back(q);
  }
  return spec;
}

int cmd_plan(const PlanArgs& a) {
  Loaded in = load_circuit(a.circuit);
  const int n = in.circuit.num_qubits();
  NetworkRecipe recipe;
  if (!a.holes_file.empty()) recipe.holes = parse_int_list(read_file(a.holes_file));
  recipe.auto_holes = a.holes;
  for (const auto& b : a.breaks) recipe.breaks.push_back(parse_break(b));
  recipe.broken_companions = !a.no_companions;
  if (a.space_budget < 0 || a.space_budget > 62) throw ValidationError("--space-budget must be in 0..62");

  RequestSpec spec = request_spec(n, a);
  SparseStateRequest request = make_request(n, spec);
  TensorNetwork tn = prepare_network(in.circuit, recipe);
  RowTables rows(request.fixed_mask(), request.groups);

  PlanOptions opts;
  opts.split_cycle = a.split_cycle;
  opts.zigzag = !a.greedy_tail;
  opts.seed = a.seed;
  opts.trials = a.trials;
  opts.space_budget = a.space_budget == 0 ? 0 : std::uint64_t{1} << a.space_budget;
  opts.slices.min_global = a.min_global;
  opts.slices.companions = !a.no_companions;
  ContractionPlan plan = make_plan(tn, rows, opts);
  validate_plan(tn, plan);
  ComplexityReport report = complexity(tn, plan, rows);

  json doc = plan_to_json(plan);
  doc["version"] = kToolVersion;
  doc["seed"] = a.seed;
  doc["circuit_digest"] = in.digest;
  doc["network"] = recipe_to_json(recipe);
  doc["request"] = request_spec_to_json(spec);
  doc["budget"] = budget_to_json(tn.budget);
  doc["complexity"] = complexity_to_json(report);
  write_file(a.out, doc.dump(1) + "\n");

  std::cout.precision(10);
  std::cout << "split cycle      " << plan.split_cycle << "\n"
            << "global slices    " << plan.slicing.global_edges.size() << " (" << report.subtasks
            << " subtasks)\n"
            << "local slices     " << plan.slicing.local_head_edges.size() << " head, "
            << plan.slicing.local_tail_edges.size() << " tail\n"
            << "companions       " << tn.budget.companion_factors.size() << "\n"
            << "broken edges K   " << tn.budget.k_broken_edges << "\n"
            << "log2 time        " << report.log2_overall_time << "\n"
            << "log2 space       " << report.log2_space << "\n"
            << "estimate         " << tn.budget.estimate() << "\n";
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string circuit, plan, out, csv, norm_curve;
  double fraction = 1.0;
  int workers = 0;
  std::string dtype = "complex128";
};

struct Planned {
  Loaded circuit;
  json doc;
  std::string plan_digest;
  TensorNetwork tn;
  ContractionPlan plan;
  SparseStateRequest request;
};

Planned load_plan(const std::string& circuit_path, const std::string& plan_path) {
  Planned p;
  p.circuit = load_circuit(circuit_path);
  std::string text = read_file(plan_path);
  p.plan_digest = sha256_hex(text);
  try {
    p.doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, 0, std::string("plan: ") + e.what());
  }
  if (p.doc.value("circuit_digest", std::string()) != p.circuit.digest) {
    throw ValidationError("plan was made for a different circuit");
  }
  p.plan = plan_from_json(p.doc);
  NetworkRecipe recipe = recipe_from_json(p.doc.at("network"));
  p.tn = prepare_network(p.circuit.circuit, recipe);
  replay_companions(p.tn, p.plan);
  validate_plan(p.tn, p.plan);
  p.request = make_request(p.circuit.circuit.num_qubits(), request_spec_from_json(p.doc.at("request")));
  return p;
}

int cmd_run(const RunArgs& a) {
  if (!(a.fraction > 0.0 && a.fraction <= 1.0)) throw ValidationError("--fraction must be in (0, 1]");
  Planned p = load_plan(a.circuit, a.plan);
  EngineOptions opts;
  opts.dtype = parse_dtype(a.dtype);
  opts.workers = a.workers > 0 ? a.workers : default_workers();
  json curve = json::array();
  if (!a.norm_curve.empty()) {
    opts.on_partial = [&](const SparseState& s) {
      curve.push_back({{"subtasks", s.subtasks_summed},
                       {"path_fraction", s.path_fraction},
                       {"sparse_norm", estimate_norm(s).sparse_norm}});
    };
  }
  SparseState state = run_subtasks(p.tn, p.plan, p.request, a.fraction, opts);
  if (!a.norm_curve.empty()) {
    json doc{{"version", kToolVersion},
             {"circuit_digest", p.circuit.digest},
             {"plan_digest", p.plan_digest},
             {"subtasks_total", state.subtasks_total},
             {"points", curve}};
    write_file(a.norm_curve, doc.dump(2) + "\n");
  }
  json header{{"version", kToolVersion},
              {"seed", p.doc.value("seed", std::uint64_t{0})},
              {"circuit_digest", p.circuit.digest},
              {"plan_digest", p.plan_digest},
              {"dtype", a.dtype},
              {"fraction", a.fraction}};
  write_file(a.out, encode_amplitudes(state, header));
  if (!a.csv.empty()) write_file(a.csv, amplitudes_csv(state));
  NormEstimate norm = estimate_norm(state);
  std::cout.precision(10);
  std::cout << "subtasks         " << state.subtasks_summed << " / " << state.subtasks_total << "\n"
            << "path fraction    " << state.path_fraction << "\n"
            << "sparse norm      " << norm.sparse_norm << "\n"
            << "normalization    " << norm.normalization << "\n";
  return 0;
}

// --- sample ----------------------------------------------------------------

struct SampleArgs {
  std::string amplitudes, out;
  std::uint64_t seed = 0;
  std::string sampler = "frugal";
  int steps = 200, burn_in = 100;
  int workers = 0;
};

int cmd_sample(const SampleArgs& a) {
  std::string bytes = read_file(a.amplitudes);
  json amp_header;
  SparseState state = decode_amplitudes(bytes, &amp_header);
  SampleOptions opts;
  opts.sampler = sampler_from_name(a.sampler);
  opts.steps = a.steps;
  opts.burn_in = a.burn_in;
  opts.workers = a.workers > 0 ? a.workers : default_workers();
  SampleSet samples = sample_set(state, a.seed, opts);
  samples.source_digest = sha256_hex(bytes);
  NormEstimate norm = estimate_norm(state);
  json header{{"version", kToolVersion},
              {"circuit_digest", amp_header.value("circuit_digest", std::string())},
              {"normalization", norm.normalization}};
  write_file(a.out, encode_samples(samples, header));
  std::cout.precision(10);
  std::cout << "samples          " << samples.bitstrings.size() << "\n"
            << "normalization    " << norm.normalization << "\n";
  return 0;
}

// --- verify / oracle -------------------------------------------------------

struct VerifyArgs {
  std::string circuit, amplitudes, samples, out;
  int bins = 50;
  double max_np = 10.0;
  int workers = 0;
};

int cmd_verify(const VerifyArgs& a) {
  Loaded in = load_circuit(a.circuit);
  const int n = in.circuit.num_qubits();
  std::string amp_bytes = read_file(a.amplitudes);
  json amp_header;
  SparseState state = decode_amplitudes(amp_bytes, &amp_header);
  if (state.request.num_qubits != n) throw ValidationError("amplitude file has a different qubit count");
  OracleOptions oopts;
  oopts.threads = a.workers > 0 ? a.workers : default_workers();
  StateVector psi = statevector(in.circuit, oopts);

  StatsReport s;
  s.num_qubits = n;
  s.path_fraction = state.path_fraction;
  s.estimate = state.budget.estimate();
  NormEstimate norm = estimate_norm(state);
  s.sparse_norm = norm.sparse_norm;
  if (!(norm.normalization > 0.0)) throw NumericalError("approximate state has zero norm");

  // Fidelity over the computed amplitudes: exact for a full request, the
  // overlap restricted to the requested bitstrings otherwise.
  const bool full = state.request.num_groups() == 1 && state.request.fixed_mask() == 0;
  std::vector<cdouble> exact, approx;
  std::vector<double> approx_probs;
  for (std::size_t g = 0; g < state.request.num_groups(); ++g) {
    auto amps = state.group(g);
    for (int mu = 0; mu < state.request.group_size(); ++mu) {
      exact.push_back(psi[pattern_index(state.request.bitstring(g, mu), n)]);
      approx.push_back(amps[mu]);
      approx_probs.push_back(std::norm(amps[mu]) / norm.normalization);
    }
  }
  s.fidelity = fidelity(exact, approx);
  s.porter_thomas = porter_thomas_stats(approx_probs, n, a.bins, a.max_np);

  json header{{"version", kToolVersion},
              {"circuit_digest", in.digest},
              {"amplitudes_digest", sha256_hex(amp_bytes)},
              {"fidelity_scope", full ? "full" : "requested"}};
  if (!a.samples.empty()) {
    std::string sample_text = read_file(a.samples);
    SampleSet samples = decode_samples(sample_text);
    if (samples.num_qubits != n) throw ValidationError("samples have a different qubit count");
    s.num_samples = static_cast<int>(samples.bitstrings.size());
    s.linear_xeb = linear_xeb(samples.bitstrings, psi, n);
    if (samples.bitstrings.size() > 1) s.linear_xeb_stderr = linear_xeb_stderr(samples.bitstrings, psi, n);
    s.log_xeb = log_xeb(samples.bitstrings, psi, n);
    std::vector<double> probs = probabilities(psi);
    auto [sampled, truth] = entropy_pair(samples.bitstrings, probs, n);
    s.entropy_sampled = sampled;
    s.entropy_true = truth;
    header["samples_digest"] = sha256_hex(sample_text);
    header["seed"] = samples.seed;
  }
  json doc = stats_to_json(s);
  doc["provenance"] = header;
  write_file(a.out, doc.dump(1) + "\n");
  std::cout.precision(10);
  std::cout << "fidelity         " << s.fidelity << " (" << header["fidelity_scope"].get<std::string>()
            << ")\n"
            << "estimate         " << s.estimate << "\n";
  if (s.num_samples > 0) {
    std::cout << "linear xeb       " << s.linear_xeb << " +- " << s.linear_xeb_stderr << "\n"
              << "log xeb          " << s.log_xeb << "\n"
              << "entropy          " << s.entropy_sampled << " sampled, " << s.entropy_true
              << " true\n";
  }
  std::cout << "pt ks            " << s.porter_thomas.ks << "\n";
  return 0;
}

struct OracleArgs {
  std::string circuit, plan, out, csv;
  int workers = 0;
};

int cmd_oracle(const OracleArgs& a) {
  OracleOptions oopts;
  oopts.threads = a.workers > 0 ? a.workers : default_workers();
  SparseState state;
  json header{{"version", kToolVersion}, {"seed", 0}};
  std::string circuit_digest;
  if (a.plan.empty()) {
    Loaded in = load_circuit(a.circuit);
    circuit_digest = in.digest;
    StateVector psi = statevector(in.circuit, oopts);
    state.request = SparseStateRequest::full(in.circuit.num_qubits());
    state.amplitudes = std::move(psi);
  } else {
    // The approximated state the plan's network represents.
    Planned p = load_plan(a.circuit, a.plan);
    circuit_digest = p.circuit.digest;
    header["plan_digest"] = p.plan_digest;
    header["seed"] = p.doc.value("seed", std::uint64_t{0});
    state.request = SparseStateRequest::full(p.circuit.circuit.num_qubits());
    state.amplitudes = statevector_with_ledger(p.circuit.circuit, p.tn.ledger, oopts);
    state.budget = p.tn.budget;
  }
  state.rows = state.request.groups;
  state.group_row = {0};
  header["circuit_digest"] = circuit_digest;
  header["source"] = "oracle";
  write_file(a.out, encode_amplitudes(state, header));
  if (!a.csv.empty()) write_file(a.csv, amplitudes_csv(state));
  std::cout << "wrote " << a.out << ": " << state.amplitudes.size() << " amplitudes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-state tensor-network simulator for random circuit sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random circuit");
  g->add_option("--rows", gen.rows)->required();
  g->add_option("--cols", gen.cols)->required();
  g->add_option("--cycles", gen.cycles)->required();
  g->add_option("--pattern", gen.pattern, "coupler pattern letters A-H");
  g->add_option("--seed", gen.seed);
  g->add_option("--jitter", gen.jitter, "fSim angle jitter (radians)");
  g->add_option("-o,--out", gen.out)->required();

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "plan a contraction");
  p->add_option("-c,--circuit", plan.circuit)->required();
  p->add_option("-o,--out", plan.out)->required();
  p->add_option("--holes", plan.holes, "number of holes to drill (chosen by the planner)");
  p->add_option("--holes-file", plan.holes_file, "fSim gate ids to drill");
  p->add_option("--break", plan.breaks, "edge break as gate:input (repeatable)");
  p->add_flag("--no-companions", plan.no_companions, "disable companion truncation");
  p->add_option("--space-budget", plan.space_budget, "log2 of the max tensor extent; 0 = none");
  p->add_option("--split-cycle", plan.split_cycle, "head/tail cut; -1 scans all");
  p->add_flag("--greedy-tail", plan.greedy_tail, "greedy tail order instead of zigzag");
  p->add_option("--trials", plan.trials);
  p->add_option("--min-global", plan.min_global, "minimum number of global slices");
  p->add_option("--seed", plan.seed, "planner and group seed");
  p->add_option("--open", plan.open, "open qubits per group (highest ids); default all");
  p->add_option("--open-qubits", plan.open_qubits, "explicit open qubit ids");
  p->add_option("--groups", plan.groups, "number of groups L");

  RunArgs run;
  auto* r = app.add_subcommand("run", "execute a plan");
  r->add_option("-c,--circuit", run.circuit)->required();
  r->add_option("-p,--plan", run.plan)->required();
  r->add_option("-o,--out", run.out)->required();
  r->add_option("--csv", run.csv, "also write amplitudes as CSV");
  r->add_option("--norm-curve", run.norm_curve, "write sparse norm after each summed subtask (JSON)");
  r->add_option("--fraction", run.fraction, "fraction of subtasks to sum");
  r->add_option("--workers", run.workers);
  r->add_option("--dtype", run.dtype, "complex64 or complex128");

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "draw one bitstring per group");
  s->add_option("-a,--amplitudes", sample.amplitudes)->required();
  s->add_option("-o,--out", sample.out)->required();
  s->add_option("--seed", sample.seed);
  s->add_option("--sampler", sample.sampler, "frugal or metropolis");
  s->add_option("--steps", sample.steps);
  s->add_option("--burn-in", sample.burn_in);
  s->add_option("--workers", sample.workers);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "compare against the exact state");
  v->add_option("-c,--circuit", verify.circuit)->required();
  v->add_option("-a,--amplitudes", verify.amplitudes)->required();
  v->add_option("-s,--samples", verify.samples);
  v->add_option("-o,--out", verify.out)->required();
  v->add_option("--bins", verify.bins);
  v->add_option("--max-np", verify.max_np);
  v->add_option("--workers", verify.workers);

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "exact state vector");
  o->add_option("-c,--circuit", oracle.circuit)->required();
  o->add_option("-p,--plan", oracle.plan, "apply the plan's approximations");
  o->add_option("-o,--out", oracle.out)->required();
  o->add_option("--csv", oracle.csv);
  o->add_option("--workers", oracle.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*p) return cmd_plan(plan);
    if (*r) return cmd_run(run);
    if (*s) return cmd_sample(sample);
    if (*v) return cmd_verify(verify);
    if (*o) return cmd_oracle(oracle);
  } catch (const InfeasiblePlanError& e) {
    std::cerr << "infeasible plan: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed file: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
