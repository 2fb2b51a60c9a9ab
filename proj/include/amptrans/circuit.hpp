// Copyright 2026 The amptrans Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "amptrans/errors.hpp"
#include "amptrans/gate.hpp"
#include "amptrans/register_layout.hpp"

namespace amptrans {

/// Classical lookup applied coherently: |k>|y> -> |k>|y XOR table[k]>.
///
/// Bit b of the key is read from `keys[b]`; bit b of the table value is
/// XOR-ed into `outputs[b]`. Self-inverse.
struct XorOracle {
  std::vector<Qubit> keys;
  std::vector<Qubit> outputs;
  std::shared_ptr<const std::vector<std::uint64_t>> table;

  void validate(std::size_t num_qubits) const {
    if (!table || table->size() != (std::uint64_t{1} << keys.size()))
      throw ConfigError("xor oracle table must have 2^keys entries");
    std::vector<Qubit> all = keys;
    all.insert(all.end(), outputs.begin(), outputs.end());
    for (Qubit q : all)
      if (q >= num_qubits) throw ConfigError("xor oracle addresses a qubit outside the layout");
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw ConfigError("xor oracle key and output qubits must be distinct");
    const std::uint64_t limit = std::uint64_t{1} << outputs.size();
    for (auto v : *table)
      if (v >= limit) throw OverflowError("xor oracle value does not fit its output qubits");
  }
};

using Operation = std::variant<Gate, XorOracle>;

/// Ordered, invertible operation sequence over a register layout.
class Circuit {
 public:
  explicit Circuit(RegisterLayout layout) : layout_(std::move(layout)) {}

  const RegisterLayout& layout() const { return layout_; }
  std::size_t num_qubits() const { return layout_.total_qubits(); }
  const std::vector<Operation>& operations() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  Circuit& add(Gate gate) {
    gate.validate(num_qubits());
    ops_.emplace_back(std::move(gate));
    return *this;
  }

  Circuit& add(XorOracle oracle) {
    oracle.validate(num_qubits());
    ops_.emplace_back(std::move(oracle));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (!(other.layout_ == layout_)) throw ConfigError("cannot append circuits with different layouts");
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
  }

  /// Reversed order, each operation inverted.
  Circuit inverse() const {
    Circuit out(layout_);
    out.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
      if (const auto* g = std::get_if<Gate>(&*it))
        out.ops_.emplace_back(g->inverse());
      else
        out.ops_.push_back(*it);
    }
    return out;
  }

  std::size_t gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(ops_.begin(), ops_.end(), [](const Operation& op) { return std::holds_alternative<Gate>(op); }));
  }

  /// Number of gates carrying at least one control.
  std::size_t controlled_gate_count() const {
    return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [](const Operation& op) {
      const auto* g = std::get_if<Gate>(&op);
      return g && !g->controls.empty();
    }));
  }

 private:
  RegisterLayout layout_;
  std::vector<Operation> ops_;
};

/// Runs a circuit of classical gates (X, SWAP, Z, Phase, xor oracles) on a
/// basis index. Phases are dropped. Throws for H or RotY.
inline std::uint64_t classical_apply(const Circuit& circuit, std::uint64_t index) {
  for (const auto& op : circuit.operations()) {
    if (const auto* oracle = std::get_if<XorOracle>(&op)) {
      std::uint64_t key = 0;
      for (std::size_t b = 0; b < oracle->keys.size(); ++b) key |= ((index >> oracle->keys[b]) & 1) << b;
      const std::uint64_t v = (*oracle->table)[key];
      for (std::size_t b = 0; b < oracle->outputs.size(); ++b) index ^= ((v >> b) & 1) << oracle->outputs[b];
      continue;
    }
    const auto& g = std::get<Gate>(op);
    bool fire = true;
    for (const auto& c : g.controls) fire = fire && (((index >> c.qubit) & 1) == (c.on_one ? 1u : 0u));
    if (!fire) continue;
    switch (g.kind) {
      case GateKind::X: index ^= std::uint64_t{1} << g.target; break;
      case GateKind::Swap: {
        const std::uint64_t a = (index >> g.target) & 1, b = (index >> g.partner) & 1;
        if (a != b) index ^= (std::uint64_t{1} << g.target) | (std::uint64_t{1} << g.partner);
        break;
      }
      case GateKind::Z:
      case GateKind::Phase: break;
      default: throw ConfigError("classical_apply: circuit contains a non-classical gate");
    }
  }
  return index;
}

}  // namespace amptrans
