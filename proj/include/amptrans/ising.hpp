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
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amptrans/amplify.hpp"
#include "amptrans/analysis.hpp"
#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/lattice.hpp"
#include "amptrans/state_vector.hpp"
#include "amptrans/synthesis.hpp"
#include "amptrans/transduce.hpp"

namespace amptrans {

/// Smallest d >= 1 with 2^d > max Sigma / 2.
inline std::size_t auto_d(const IsingLattice& lattice) {
  const int half = max_sigma(lattice) / 2;
  std::size_t d = 1;
  while ((std::int64_t{1} << d) <= half) ++d;
  return d;
}

/// Boltzmann amplitudes alpha_l = exp(-beta J Sigma_l) with gamma = exp(2 beta J),
/// so that lambda_l = Sigma_l / 2 is an exact integer.
struct BoltzmannTarget {
  double gamma = 0;
  std::size_t d = 0;
  /// Sigma_l / 2 per configuration; empty above kMaxEnumeratedSites.
  std::vector<std::uint64_t> lambdas;

  static BoltzmannTarget make(const IsingLattice& lattice, std::optional<std::size_t> d = std::nullopt) {
    if (!(lattice.beta_j() > 0)) throw ConfigError("Boltzmann synthesis needs beta*J > 0 (gamma must exceed 1)");
    BoltzmannTarget t;
    t.gamma = std::exp(2.0 * lattice.beta_j());
    t.d = d ? *d : auto_d(lattice);
    if (t.d == 0) throw ConfigError("d must be at least 1");
    const int half = max_sigma(lattice) / 2;
    if (t.d < 62 && (std::int64_t{1} << t.d) <= half)
      throw OverflowError("d = " + std::to_string(t.d) + " cannot hold max Sigma/2 = " + std::to_string(half));
    if (lattice.sites() <= kMaxEnumeratedSites) {
      t.lambdas.resize(lattice.configurations());
      for (std::uint64_t l = 0; l < lattice.configurations(); ++l)
        t.lambdas[l] = static_cast<std::uint64_t>(sigma_count(lattice, l) / 2);
    }
    return t;
  }

  double alpha(std::uint64_t l) const { return std::exp(-std::log(gamma) * static_cast<double>(lambdas.at(l))); }
};

/// C (one qubit per site), D, [E], and the phase-kickback ancilla a.
inline RegisterLayout ising_layout(const IsingLattice& lattice, std::size_t d, Variant variant) {
  RegisterLayout layout;
  layout.add("C", lattice.sites()).add("D", d);
  if (variant == Variant::Controlled) layout.add("E", d);
  layout.add("a", 1);
  return layout;
}

/// Inverse Fourier transform on `qubits` (qubit k = bit k):
/// 2^(-d/2) sum_x exp(2 pi i x y / 2^d) |x>  ->  |y>.
inline void append_inverse_qft(Circuit& c, std::span<const Qubit> qubits) {
  const std::size_t d = qubits.size();
  for (std::size_t j = 0; j < d; ++j) {
    const Qubit target = qubits[d - 1 - j];
    // Qubit d-1-m already holds bit m of y.
    for (std::size_t m = 0; m < j; ++m)
      c.add(Gate::phase(target, -std::numbers::pi / std::ldexp(1.0, static_cast<int>(j - m)))
                .controlled_by(qubits[d - 1 - m]));
    c.add(Gate::h(target));
  }
  for (std::size_t k = 0; k < d / 2; ++k) c.add(Gate::swap(qubits[k], qubits[d - 1 - k]));
}

/// Pair-counting oracle |l>_C |0>_D -> |l>_C |Sigma_l / 2>_D.
///
/// D is put in uniform superposition; for every pair the XOR of the two
/// spins is computed onto the second spin, which then kicks a phase of
/// pi 2^k / 2^d onto D qubit k; the XOR is undone. Each opposing pair thus
/// adds pi x / 2^d to |x>_D, and the inverse Fourier transform reads out
/// Sigma_l / 2. The ancilla a is prepared in |1> and left idle: the
/// controlled phases act on it only through kickback.
inline Circuit build_ising_L(const IsingLattice& lattice, std::size_t d, const RegisterLayout& layout) {
  require_register(layout, "C", lattice.sites());
  require_register(layout, "D", d);
  require_register(layout, "a", 1);
  const int half = max_sigma(lattice) / 2;
  if (d >= 62 || (std::int64_t{1} << d) <= half)
    throw OverflowError("d = " + std::to_string(d) + " cannot hold max Sigma/2 = " + std::to_string(half));
  Circuit c(layout);
  c.add(Gate::x(layout.qubit("a", 0)));
  const auto dq = layout.qubits("D");
  for (Qubit q : dq) c.add(Gate::h(q));
  for (const auto& p : lattice.pairs()) {
    const Qubit first = layout.qubit("C", p.first), second = layout.qubit("C", p.second);
    c.add(Gate::cx(first, second));
    for (std::size_t k = 0; k < d; ++k)
      c.add(Gate::phase(dq[k], std::numbers::pi * std::ldexp(1.0, static_cast<int>(k) - static_cast<int>(d)))
                .controlled_by(second));
    c.add(Gate::cx(first, second));
  }
  append_inverse_qft(c, dq);
  return c;
}

/// U = T L H_C for the Ising target.
inline Circuit build_ising_synthesis(const IsingLattice& lattice, std::size_t d, Variant variant,
                                     const RegisterLayout& layout) {
  const auto plan = TransductionPlan::make(std::exp(2.0 * lattice.beta_j()), d, variant);
  Circuit c(layout);
  for (Qubit q : layout.qubits("C")) c.add(Gate::h(q));
  c.append(build_ising_L(lattice, d, layout));
  c.append(build_transduction(plan, layout));
  return c;
}

struct BoltzmannOptions : AmplifyOptions {
  Variant variant = Variant::Direct;
  std::optional<std::size_t> d;
};

struct BoltzmannRun : SynthesisRun {
  double gamma = 0;
};

/// Bytes of the state vector a Boltzmann synthesis would allocate.
inline std::uint64_t boltzmann_memory_bytes(const IsingLattice& lattice, std::size_t d, Variant variant) {
  return StateVector::bytes_for(ising_layout(lattice, d, variant).total_qubits());
}

/// Runs U Q^nu |0> for the lattice and reports u^2, nu and A'^2.
inline BoltzmannRun synthesize_boltzmann(const IsingLattice& lattice, const BoltzmannOptions& options) {
  const auto target_spec = BoltzmannTarget::make(lattice, options.d);
  const std::size_t d = target_spec.d;
  const auto layout = ising_layout(lattice, d, options.variant);
  require_memory(layout, options.memory_budget_bytes);
  double oracle = std::numeric_limits<double>::quiet_NaN();
  if (!target_spec.lambdas.empty()) {
    const auto norms = exact_norms(target_spec.lambdas, target_spec.gamma, d, options.variant);
    oracle = norms.u * norms.u;
  }
  BoltzmannRun run{run_amplified(build_ising_synthesis(lattice, d, options.variant, layout),
                                 target_predicate(layout, options.variant), oracle, options),
                   target_spec.gamma};
  run.diagnostics.d = d;
  return run;
}

}  // namespace amptrans
