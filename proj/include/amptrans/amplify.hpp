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

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/gate.hpp"
#include "amptrans/register_layout.hpp"
#include "amptrans/state_vector.hpp"

namespace amptrans {

/// PaperRound: round(pi / (4u)). Optimal: whichever of the two integers
/// bracketing pi / (4 theta) - 1/2 maximizes sin^2((2 nu + 1) theta).
enum class NuRule { PaperRound, Optimal };

inline std::string to_string(NuRule r) { return r == NuRule::PaperRound ? "paper" : "optimal"; }

inline NuRule parse_nu_rule(std::string_view s) {
  if (s == "paper") return NuRule::PaperRound;
  if (s == "optimal") return NuRule::Optimal;
  throw ConfigError("unknown nu rule '" + std::string(s) + "' (expected paper or optimal)");
}

inline void require_unit_norm(double u) {
  if (!(u > 0 && u <= 1)) throw ConfigError("pre-amplification norm u must lie in (0, 1]");
}

/// sin^2((2 nu + 1) asin u): target-slice probability after nu iterates.
inline double predicted_postamp(double u, int nu) {
  require_unit_norm(u);
  if (nu < 0) throw ConfigError("nu must be non-negative");
  const double s = std::sin((2.0 * nu + 1.0) * std::asin(u));
  return s * s;
}

inline int select_nu(double u, NuRule rule) {
  require_unit_norm(u);
  if (rule == NuRule::PaperRound) return static_cast<int>(std::lround(std::numbers::pi / (4 * u)));
  const double theta = std::asin(u);
  const double centre = std::numbers::pi / (4 * theta) - 0.5;
  const int lo = std::max(0, static_cast<int>(std::floor(centre)));
  const int hi = std::max(0, static_cast<int>(std::ceil(centre)));
  return predicted_postamp(u, hi) > predicted_postamp(u, lo) ? hi : lo;
}

/// Negates the amplitudes matching `where`: I - 2P for the projector P.
template <std::floating_point T>
void phase_flip(BasicStateVector<T>& state, BasisMask where) {
  auto amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x)
    if (where.matches(x)) amps[x] = -amps[x];
}

/// Gate-level I - 2|0..0><0..0| on `qubits`: X on each, Z on the first
/// controlled by the rest, X on each.
inline Circuit zero_flip_circuit(const RegisterLayout& layout, std::span<const Qubit> qubits) {
  if (qubits.empty()) throw ConfigError("zero_flip_circuit needs at least one qubit");
  Circuit c(layout);
  for (Qubit q : qubits) c.add(Gate::x(q));
  Gate z = Gate::z(qubits[0]);
  for (std::size_t i = 1; i < qubits.size(); ++i) z = std::move(z).controlled_by(qubits[i]);
  c.add(std::move(z));
  for (Qubit q : qubits) c.add(Gate::x(q));
  return c;
}

/// U, the source |0..0> and the target slice of the amplified synthesis.
struct AmplificationSpec {
  Circuit synthesis;
  BasisMask source;
  BasisMask target;
  int nu = 0;

  static AmplificationSpec make(Circuit synthesis, BasisMask target, int nu) {
    const auto source = synthesis.layout().all_zero();
    return {std::move(synthesis), source, target, nu};
  }

  void validate() const {
    const auto full = synthesis.layout().all_zero();
    if (source.mask != full.mask || source.value != 0)
      throw ConfigError("source predicate must select exactly the all-zero state");
    if ((target.mask & ~full.mask) != 0 || (target.value & ~target.mask) != 0)
      throw ConfigError("target predicate addresses qubits outside the layout");
    if (nu < 0) throw ConfigError("nu must be non-negative");
  }
};

/// Holds U and U^-1 compiled once, for repeated iterates.
template <std::floating_point T>
class BasicAmplifier {
 public:
  explicit BasicAmplifier(const AmplificationSpec& spec)
      : spec_(spec), forward_(spec.synthesis), backward_(spec.synthesis.inverse()) {
    spec.validate();
  }

  /// U |0..0>.
  BasicStateVector<T> synthesize() const {
    BasicStateVector<T> state(spec_.synthesis.num_qubits());
    apply_compiled(state, forward_);
    return state;
  }

  /// One iterate in the synthesized frame: psi -> U Q U^-1 psi with
  /// Q = -I_s U^-1 I_t U, so that U Q^k |0> becomes U Q^(k+1) |0>.
  void iterate(BasicStateVector<T>& state) const {
    phase_flip(state, spec_.target);
    apply_compiled(state, backward_);
    // -I_s: negate everything except the source amplitude.
    auto amps = state.amplitudes();
    for (std::uint64_t x = 0; x < amps.size(); ++x)
      if (!spec_.source.matches(x)) amps[x] = -amps[x];
    apply_compiled(state, forward_);
  }

  /// U Q^nu |0..0>.
  BasicStateVector<T> run() const {
    auto state = synthesize();
    for (int k = 0; k < spec_.nu; ++k) iterate(state);
    return state;
  }

 private:
  AmplificationSpec spec_;
  BasicCompiledCircuit<T> forward_;
  BasicCompiledCircuit<T> backward_;
};

using Amplifier = BasicAmplifier<Real>;

/// One amplification iterate; see BasicAmplifier::iterate.
template <std::floating_point T>
void grover_iterate(BasicStateVector<T>& state, const AmplificationSpec& spec) {
  BasicAmplifier<T>(spec).iterate(state);
}

/// The full amplified synthesis U Q^nu |0..0>.
inline StateVector amplify(const AmplificationSpec& spec) { return Amplifier(spec).run(); }

}  // namespace amptrans
