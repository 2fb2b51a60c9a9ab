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
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "amptrans/amplify.hpp"
#include "amptrans/analysis.hpp"
#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/state_vector.hpp"
#include "amptrans/transduce.hpp"

namespace amptrans {

struct AmplifyOptions {
  bool amplify = true;
  NuRule nu_rule = NuRule::PaperRound;
  /// Overrides nu_rule when set.
  std::optional<int> nu;
  std::uint64_t memory_budget_bytes = std::uint64_t{1} << 30;
};

/// Final state of U Q^nu |0..0> with its layout, target slice and diagnostics.
struct SynthesisRun {
  RegisterLayout layout;
  BasisMask target;
  SynthesisDiagnostics diagnostics;
  StateVector state;
};

inline void require_memory(const RegisterLayout& layout, std::uint64_t budget_bytes) {
  const auto bytes = StateVector::bytes_for(layout.total_qubits());
  if (bytes > budget_bytes)
    throw MemoryBudgetError(std::to_string(layout.total_qubits()) + " qubits need " + std::to_string(bytes >> 20) +
                            " MiB, over the budget of " + std::to_string(budget_bytes >> 20) + " MiB");
}

/// Runs the synthesis, measures u^2 on the state vector, picks nu and
/// applies the iterates. `u_sq_oracle` is recorded as given (NaN if unknown).
inline SynthesisRun run_amplified(Circuit synthesis, BasisMask target, double u_sq_oracle,
                                  const AmplifyOptions& options) {
  require_memory(synthesis.layout(), options.memory_budget_bytes);
  auto layout = synthesis.layout();
  const Amplifier amplifier(AmplificationSpec::make(std::move(synthesis), target, 0));

  SynthesisDiagnostics diag;
  diag.qubits = layout.total_qubits();
  diag.u_sq_oracle = u_sq_oracle;
  auto state = amplifier.synthesize();
  diag.u_sq = probability(state, target);
  if (options.nu) {
    diag.nu = *options.nu;
  } else if (!options.amplify) {
    diag.nu = 0;
  } else {
    if (!(diag.u_sq > 0)) throw ConfigError("target slice is empty; nothing to amplify");
    diag.nu = select_nu(std::min(1.0, std::sqrt(diag.u_sq)), options.nu_rule);
  }
  if (diag.nu < 0) throw ConfigError("nu must be non-negative");
  diag.a_prime_sq = diag.u_sq > 0 ? predicted_postamp(std::min(1.0, std::sqrt(diag.u_sq)), diag.nu) : 0.0;
  for (int k = 0; k < diag.nu; ++k) amplifier.iterate(state);
  diag.a_prime_sq_measured = probability(state, target);
  return {std::move(layout), target, diag, std::move(state)};
}

struct TableOptions : AmplifyOptions {
  Variant variant = Variant::Direct;
  /// Adds the zero flag so saturated entries get amplitude exactly 0.
  bool exact_zero = false;
};

/// Multiplicative synthesis of an arbitrary alpha table.
inline SynthesisRun synthesize_table(const AmplitudeTable& table, const TableOptions& options) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(table.alphas.size()));
  const auto layout = transduction_layout(n, table.d, options.variant, options.exact_zero);
  require_memory(layout, options.memory_budget_bytes);
  const auto plan = TransductionPlan::make(table.gamma, table.d, options.variant);
  const auto norms = exact_norms(table, options.variant, options.exact_zero);
  auto run = run_amplified(build_synthesis(table, plan, layout, options.exact_zero),
                           target_predicate(layout, options.variant), norms.u * norms.u, options);
  run.diagnostics.d = table.d;
  return run;
}

/// Measurement record reduced to one register.
struct PostSelectedSample {
  std::uint64_t shots = 0;
  /// Shots that landed in the target slice.
  std::uint64_t kept = 0;
  bool conditional = false;
  /// Register value -> count, over kept shots only.
  Counts values;
  /// kept / shots; NaN for conditional sampling, where every shot is kept by construction.
  double efficiency = std::numeric_limits<double>::quiet_NaN();
};

/// Measures every qubit `shots` times and keeps the shots in the target
/// slice. With `conditional`, draws directly from the target slice instead,
/// which stays affordable when the slice probability is tiny.
inline PostSelectedSample sample_postselected(const SynthesisRun& run, std::uint64_t shots, std::uint64_t seed,
                                              bool conditional = false, std::string_view reg = "C") {
  PostSelectedSample out;
  out.shots = shots;
  out.conditional = conditional;
  const auto raw = conditional ? sample_where(run.state, run.target, shots, seed) : sample(run.state, shots, seed);
  for (const auto& [index, n] : raw) {
    if (!run.target.matches(index)) continue;
    out.values[run.layout.extract(index, reg)] += n;
    out.kept += n;
  }
  if (!conditional) out.efficiency = static_cast<double>(out.kept) / static_cast<double>(shots);
  return out;
}

}  // namespace amptrans
