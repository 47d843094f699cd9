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

#include "sparsesim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sparsesim/error.hpp"
#include "sparsesim/rng.hpp"

namespace sparsesim {
namespace {

using nlohmann::json;

constexpr double kUnitaryTol = 1e-10;

bool is_unitary(const Matrix2& m) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cdouble s = 0;
      for (int k = 0; k < 2; ++k) s += std::conj(m[k * 2 + i]) * m[k * 2 + j];
      if (std::abs(s - cdouble(i == j ? 1.0 : 0.0)) > kUnitaryTol) return false;
    }
  }
  return true;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(0, 0, where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

Gate parse_gate(const json& g, const std::string& where) {
  const json& type = member(g, "type", where);
  if (!type.is_string()) schema_error(where + "/type", "expected a string");
  if (type == "single") {
    SingleGate s;
    s.target = as_int(member(g, "target", where), where + "/target");
    const json& m = member(g, "matrix", where);
    if (!m.is_array() || m.size() != 4)
      schema_error(where + "/matrix", "expected 4 [re, im] entries");
    for (std::size_t i = 0; i < 4; ++i) {
      const std::string at = where + "/matrix/" + std::to_string(i);
      if (!m[i].is_array() || m[i].size() != 2) schema_error(at, "expected [re, im]");
      s.matrix[i] = cdouble(as_double(m[i][0], at), as_double(m[i][1], at));
    }
    return s;
  }
  if (type == "fsim") {
    FsimGate f;
    const json& t = member(g, "targets", where);
    if (!t.is_array() || t.size() != 2)
      schema_error(where + "/targets", "expected two qubit ids");
    f.targets = {as_int(t[0], where + "/targets/0"), as_int(t[1], where + "/targets/1")};
    f.params.theta = as_double(member(g, "theta", where), where + "/theta");
    f.params.phi = as_double(member(g, "phi", where), where + "/phi");
    return f;
  }
  schema_error(where + "/type", "unknown gate type '" + type.get<std::string>() + "'");
}

json gate_to_json(const Gate& gate) {
  if (const auto* s = std::get_if<SingleGate>(&gate)) {
    json m = json::array();
    for (const auto& z : s->matrix) m.push_back({z.real(), z.imag()});
    return {{"type", "single"}, {"target", s->target}, {"matrix", m}};
  }
  const auto& f = std::get<FsimGate>(gate);
  return {{"type", "fsim"},
          {"targets", {f.targets[0], f.targets[1]}},
          {"theta", f.params.theta},
          {"phi", f.params.phi}};
}

}  // namespace

int Circuit::num_gates() const {
  int count = 0;
  for (const auto& m : moments) count += static_cast<int>(m.size());
  return count;
}

std::vector<GateRef> gate_index(const Circuit& circuit) {
  std::vector<GateRef> refs;
  refs.reserve(circuit.num_gates());
  for (int m = 0; m < circuit.num_moments(); ++m) {
    for (int i = 0; i < static_cast<int>(circuit.moments[m].size()); ++i) {
      refs.push_back({m, i});
    }
  }
  return refs;
}

void Circuit::validate() const {
  const int n = num_qubits();
  std::set<std::pair<int, int>> positions;
  for (int i = 0; i < n; ++i) {
    if (qubits[i].id != i) {
      throw ValidationError("qubit ids must be contiguous from 0 in order; entry " +
                            std::to_string(i) + " has id " +
                            std::to_string(qubits[i].id));
    }
    if (!positions.insert({qubits[i].row, qubits[i].col}).second) {
      throw ValidationError("duplicate grid position for qubit " + std::to_string(i));
    }
  }
  auto check_id = [&](int q, int m) {
    if (q < 0 || q >= n) {
      throw ValidationError("moment " + std::to_string(m) +
                            " references unknown qubit " + std::to_string(q));
    }
  };
  for (int m = 0; m < num_moments(); ++m) {
    std::vector<bool> used(n, false);
    auto claim = [&](int q) {
      check_id(q, m);
      if (used[q]) {
        throw ValidationError("qubit " + std::to_string(q) +
                              " appears twice in moment " + std::to_string(m));
      }
      used[q] = true;
    };
    for (const Gate& gate : moments[m]) {
      if (const auto* s = std::get_if<SingleGate>(&gate)) {
        claim(s->target);
        if (!is_unitary(s->matrix)) {
          throw ValidationError("single-qubit gate on qubit " +
                                std::to_string(s->target) + " in moment " +
                                std::to_string(m) + " is not unitary");
        }
      } else {
        const auto& f = std::get<FsimGate>(gate);
        const auto [a, b] = f.targets;
        if (a == b) {
          throw ValidationError("fsim gate in moment " + std::to_string(m) +
                                " has identical targets");
        }
        claim(a);
        claim(b);
        const int dist = std::abs(qubits[a].row - qubits[b].row) +
                         std::abs(qubits[a].col - qubits[b].col);
        if (dist != 1) {
          throw ValidationError("fsim targets " + std::to_string(a) + " and " +
                                std::to_string(b) + " in moment " +
                                std::to_string(m) + " are not grid-adjacent");
        }
        if (!std::isfinite(f.params.theta) || !std::isfinite(f.params.phi)) {
          throw ValidationError("fsim parameters must be finite");
        }
      }
    }
  }
}

Matrix4 fsim_matrix(const FsimParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Matrix4 u{};
  u[0] = 1.0;
  u[5] = c;
  u[6] = cdouble(0.0, -s);
  u[9] = cdouble(0.0, -s);
  u[10] = c;
  u[15] = std::polar(1.0, -p.phi);
  return u;
}

const std::array<Matrix2, 3>& sycamore_single_qubit_gates() {
  // sqrt(P) = (1+i)/2 I + (1-i)/2 P for any Pauli-like P with P^2 = I.
  static const std::array<Matrix2, 3> gates = [] {
    const cdouble a(0.5, 0.5), b(0.5, -0.5);
    const double r = std::numbers::sqrt2 / 2;
    const Matrix2 x{0, 1, 1, 0};
    const Matrix2 y{0, cdouble(0, -1), cdouble(0, 1), 0};
    const Matrix2 w{0, cdouble(r, -r), cdouble(r, r), 0};
    std::array<Matrix2, 3> out{};
    const std::array<Matrix2, 3> paulis{x, y, w};
    for (int g = 0; g < 3; ++g) {
      for (int i = 0; i < 4; ++i) {
        out[g][i] = (i == 0 || i == 3 ? a : cdouble(0)) + b * paulis[g][i];
      }
    }
    return out;
  }();
  return gates;
}

Circuit parse_circuit(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(line, column, e.what());
  }
  Circuit c;
  const json& qubits = member(doc, "qubits", "");
  if (!qubits.is_array()) schema_error("/qubits", "expected an array");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const std::string at = "/qubits/" + std::to_string(i);
    c.qubits.push_back({as_int(member(qubits[i], "id", at), at + "/id"),
                        as_int(member(qubits[i], "row", at), at + "/row"),
                        as_int(member(qubits[i], "col", at), at + "/col")});
  }
  const json& cycles = member(doc, "cycles", "");
  if (!cycles.is_array()) schema_error("/cycles", "expected an array");
  for (std::size_t m = 0; m < cycles.size(); ++m) {
    const std::string at = "/cycles/" + std::to_string(m);
    if (!cycles[m].is_array()) schema_error(at, "expected an array of gates");
    Moment moment;
    for (std::size_t g = 0; g < cycles[m].size(); ++g) {
      moment.push_back(parse_gate(cycles[m][g], at + "/" + std::to_string(g)));
    }
    c.moments.push_back(std::move(moment));
  }
  if (auto it = doc.find("sequence"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) schema_error("/sequence", "expected a string");
    c.sequence = it->get<std::string>();
  }
  c.validate();
  return c;
}

std::string serialize_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "{\n\"qubits\": [\n";
  for (std::size_t i = 0; i < circuit.qubits.size(); ++i) {
    const Qubit& q = circuit.qubits[i];
    out << "  " << json{{"id", q.id}, {"row", q.row}, {"col", q.col}}.dump()
        << (i + 1 < circuit.qubits.size() ? ",\n" : "\n");
  }
  out << "],\n\"sequence\": " << json(circuit.sequence).dump() << ",\n";
  out << "\"cycles\": [\n";
  for (std::size_t m = 0; m < circuit.moments.size(); ++m) {
    out << "  [\n";
    const Moment& moment = circuit.moments[m];
    for (std::size_t g = 0; g < moment.size(); ++g) {
      out << "    " << gate_to_json(moment[g]).dump()
          << (g + 1 < moment.size() ? ",\n" : "\n");
    }
    out << "  ]" << (m + 1 < circuit.moments.size() ? ",\n" : "\n");
  }
  out << "]\n}\n";
  return out.str();
}

std::vector<std::pair<int, int>> coupler_pattern(int rows, int cols, char letter) {
  std::vector<std::pair<int, int>> couplers;
  auto id = [cols](int r, int c) { return r * cols + c; };
  const bool horizontal = letter == 'A' || letter == 'B' || letter == 'E' || letter == 'F';
  int parity = 0;
  bool shifted = false;
  switch (letter) {
    case 'A': case 'C': parity = 0; break;
    case 'B': case 'D': parity = 1; break;
    case 'E': case 'G': parity = 0; shifted = true; break;
    case 'F': case 'H': parity = 1; shifted = true; break;
    default:
      throw ValidationError(std::string("unknown coupler pattern letter '") + letter + "'");
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (horizontal) {
        if (c + 1 >= cols) continue;
        const int key = shifted ? r + c : c;
        if (key % 2 == parity) couplers.emplace_back(id(r, c), id(r, c + 1));
      } else {
        if (r + 1 >= rows) continue;
        const int key = shifted ? r + c : r;
        if (key % 2 == parity) couplers.emplace_back(id(r, c), id(r + 1, c));
      }
    }
  }
  return couplers;
}

Circuit generate_random_circuit(int rows, int cols, int cycles,
                                std::string_view pattern, std::uint64_t seed,
                                const GeneratorOptions& options) {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw ValidationError("grid must contain at least two qubits");
  }
  if (cycles < 1) throw ValidationError("cycles must be at least 1");
  if (pattern.empty()) throw ValidationError("pattern must not be empty");
  for (char letter : pattern) coupler_pattern(1, 2, letter);  // validates letters

  Circuit c;
  c.sequence = std::string(pattern);
  for (int r = 0; r < rows; ++r) {
    for (int col = 0; col < cols; ++col) c.qubits.push_back({r * cols + col, r, col});
  }
  const int n = rows * cols;
  std::mt19937_64 rng(seed);
  const auto& gate_set = sycamore_single_qubit_gates();
  std::vector<int> previous(n, -1);
  auto jittered = [&](double center) {
    return center + options.jitter * (2.0 * uniform01(rng) - 1.0);
  };
  for (int cycle = 0; cycle < cycles; ++cycle) {
    Moment singles;
    for (int q = 0; q < n; ++q) {
      int choice;
      if (previous[q] < 0) {
        choice = static_cast<int>(uniform_index(rng, gate_set.size()));
      } else {
        // uniform over the gates other than the previous one
        choice = static_cast<int>(uniform_index(rng, gate_set.size() - 1));
        if (choice >= previous[q]) ++choice;
      }
      previous[q] = choice;
      singles.push_back(SingleGate{gate_set[choice], q});
    }
    c.moments.push_back(std::move(singles));

    Moment twos;
    const char letter = pattern[cycle % pattern.size()];
    for (const auto& [a, b] : coupler_pattern(rows, cols, letter)) {
      FsimParams params{jittered(options.theta_center), jittered(options.phi_center)};
      twos.push_back(FsimGate{params, {a, b}});
    }
    c.moments.push_back(std::move(twos));
  }
  return c;
}

}  // namespace sparsesim
