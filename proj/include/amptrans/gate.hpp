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
#include <numbers>
#include <string>
#include <vector>

#include "amptrans/errors.hpp"
#include "amptrans/register_layout.hpp"

namespace amptrans {

enum class GateKind : std::uint8_t { H, X, Z, RotY, Phase, Swap };

inline const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::RotY: return "RY";
    case GateKind::Phase: return "P";
    case GateKind::Swap: return "SWAP";
  }
  return "?";
}

/// A control line. `on_one == false` makes it an anti-control (fires on |0>).
struct Control {
  Qubit qubit = 0;
  bool on_one = true;
  bool operator==(const Control&) const = default;
};

/// One (multi-)controlled gate.
///
/// RotY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] and
/// Phase(t) = diag(1, e^{it}). Swap exchanges `target` and `partner`.
struct Gate {
  GateKind kind = GateKind::X;
  Qubit target = 0;
  Qubit partner = 0;
  double angle = 0.0;
  std::vector<Control> controls;

  static Gate make(GateKind kind, Qubit target, Qubit partner = 0, double angle = 0.0) {
    Gate g;
    g.kind = kind;
    g.target = target;
    g.partner = partner;
    g.angle = angle;
    return g;
  }
  static Gate h(Qubit q) { return make(GateKind::H, q); }
  static Gate x(Qubit q) { return make(GateKind::X, q); }
  static Gate z(Qubit q) { return make(GateKind::Z, q); }
  static Gate ry(Qubit q, double angle) { return make(GateKind::RotY, q, 0, angle); }
  static Gate phase(Qubit q, double angle) { return make(GateKind::Phase, q, 0, angle); }
  static Gate swap(Qubit a, Qubit b) { return make(GateKind::Swap, a, b); }
  static Gate cx(Qubit control, Qubit target) { return x(target).controlled_by(control); }

  Gate controlled_by(Qubit q, bool on_one = true) const& {
    Gate g = *this;
    g.controls.push_back({q, on_one});
    return g;
  }
  Gate controlled_by(Qubit q, bool on_one = true) && {
    controls.push_back({q, on_one});
    return std::move(*this);
  }

  Gate inverse() const {
    Gate g = *this;
    if (kind == GateKind::RotY || kind == GateKind::Phase) g.angle = -angle;
    return g;
  }

  /// Diagonal in the computational basis.
  bool is_diagonal() const { return kind == GateKind::Z || kind == GateKind::Phase; }
  /// Maps basis states to basis states (no phases).
  bool is_permutation() const { return kind == GateKind::X || kind == GateKind::Swap; }

  std::vector<Qubit> support() const {
    std::vector<Qubit> out{target};
    if (kind == GateKind::Swap) out.push_back(partner);
    for (const auto& c : controls) out.push_back(c.qubit);
    return out;
  }

  void validate(std::size_t num_qubits) const {
    auto qs = support();
    for (Qubit q : qs)
      if (q >= num_qubits)
        throw ConfigError(std::string("gate ") + to_string(kind) + " addresses qubit " + std::to_string(q) +
                          " of a " + std::to_string(num_qubits) + "-qubit register");
    std::sort(qs.begin(), qs.end());
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
      throw ConfigError(std::string("gate ") + to_string(kind) + " uses a qubit more than once");
  }

  bool operator==(const Gate&) const = default;
};

}  // namespace amptrans
