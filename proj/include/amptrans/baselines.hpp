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

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/gate.hpp"
#include "amptrans/register_layout.hpp"
#include "amptrans/state_vector.hpp"
#include "amptrans/transduce.hpp"

namespace amptrans {

namespace detail {
inline std::size_t table_width(std::span<const double> alphas) {
  if (alphas.empty() || !std::has_single_bit(alphas.size())) throw ConfigError("alpha table size must be a power of two");
  for (double a : alphas)
    if (!(a >= 0 && a <= 1)) throw ConfigError("alpha values must lie in [0, 1]");
  return static_cast<std::size_t>(std::countr_zero(alphas.size()));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Rotation oracle: |l>|0>_a -> |l>(cos t_l |0> + sin t_l |1>), t_l = acos alpha_l.

inline RegisterLayout rotation_oracle_layout(std::size_t n) {
  RegisterLayout layout;
  layout.add("C", n).add("a", 1);
  return layout;
}

/// H_C followed by one RotY(2 acos alpha_l) on a per branch, each controlled
/// on the bit pattern of l. The angles are evaluated classically.
inline Circuit rotation_oracle_circuit(std::span<const double> alphas, const RegisterLayout& layout) {
  const std::size_t n = detail::table_width(alphas);
  require_register(layout, "C", n);
  require_register(layout, "a", 1);
  Circuit c(layout);
  const auto cq = layout.qubits("C");
  for (Qubit q : cq) c.add(Gate::h(q));
  for (std::uint64_t l = 0; l < alphas.size(); ++l) {
    const double theta = std::acos(alphas[l]);
    if (theta == 0) continue;
    Gate g = Gate::ry(layout.qubit("a", 0), 2 * theta);
    for (std::size_t i = 0; i < n; ++i) g = std::move(g).controlled_by(cq[i], (l >> i) & 1);
    c.add(std::move(g));
  }
  return c;
}

inline StateVector rotation_oracle_synthesis(std::span<const double> alphas, const RegisterLayout& layout) {
  const auto circuit = rotation_oracle_circuit(alphas, layout);
  StateVector state(layout.total_qubits());
  apply_circuit(state, circuit);
  return state;
}

// ---------------------------------------------------------------------------
// Comparator method.

/// Absolute-precision digitization alpha~_l = floor(2^d alpha_l) in [0, 2^d].
struct ComparatorSpec {
  std::size_t d = 0;
  std::vector<std::uint64_t> alphas_discrete;

  static ComparatorSpec make(std::span<const double> alphas, std::size_t d) {
    detail::table_width(alphas);
    if (d == 0 || d > 30) throw ConfigError("comparator d must be in [1, 30]");
    ComparatorSpec spec{d, std::vector<std::uint64_t>(alphas.size())};
    for (std::size_t l = 0; l < alphas.size(); ++l)
      spec.alphas_discrete[l] = static_cast<std::uint64_t>(std::floor(std::ldexp(alphas[l], static_cast<int>(d))));
    return spec;
  }
};

/// C, D (value), E (counter), w (carry chain, d qubits), g (flag).
inline RegisterLayout comparator_layout(std::size_t n, std::size_t d) {
  RegisterLayout layout;
  layout.add("C", n).add("D", d).add("E", d).add("w", d).add("g", 1);
  return layout;
}

/// Register contents that make the comparator compute g = (x >= value).
/// D holds `value` and the carry-in w_0 is 1; the full-scale value 2^d is
/// encoded as D = 2^d - 1 with carry-in 0, for which no x qualifies.
struct ComparatorEncoding {
  std::uint64_t d_value = 0;
  bool carry_in = true;
};

inline ComparatorEncoding comparator_encode(std::uint64_t value, std::size_t d) {
  const std::uint64_t full = std::uint64_t{1} << d;
  if (value > full) throw ConfigError("comparator value exceeds 2^d");
  if (value == full) return {full - 1, false};
  return {value, true};
}

/// Ripple comparison g ^= (E >= value) given the encoding above in (D, w_0).
///
/// x >= v iff x + ~v + 1 carries out of d bits. Carry k+1 is the majority of
/// (x_k, ~v_k, c_k), written into a fresh qubit as the XOR of the three
/// pairwise ANDs; the final carry lands on g and the intermediate carries are
/// uncomputed.
inline Circuit comparator_circuit(const RegisterLayout& layout) {
  const std::size_t d = layout.width("D");
  require_register(layout, "E", d);
  require_register(layout, "w", d);
  require_register(layout, "g", 1);
  Circuit c(layout);
  auto stage = [&](std::size_t k) {
    const Qubit x = layout.qubit("E", k), v = layout.qubit("D", k), carry = layout.qubit("w", k);
    const Qubit out = k + 1 < d ? layout.qubit("w", k + 1) : layout.qubit("g", 0);
    c.add(Gate::x(out).controlled_by(x).controlled_by(v, false));
    c.add(Gate::x(out).controlled_by(x).controlled_by(carry));
    c.add(Gate::x(out).controlled_by(v, false).controlled_by(carry));
  };
  for (std::size_t k = 0; k < d; ++k) stage(k);
  for (std::size_t k = d - 1; k-- > 0;) stage(k);
  return c;
}

/// |l>_C |0>_{D,w_0} -> |l>_C |encoding of alpha~_l>.
inline Circuit comparator_value_oracle(const ComparatorSpec& spec, const RegisterLayout& layout) {
  require_register(layout, "D", spec.d);
  require_register(layout, "w", spec.d);
  std::vector<std::uint64_t> table(spec.alphas_discrete.size());
  for (std::size_t l = 0; l < table.size(); ++l) {
    const auto enc = comparator_encode(spec.alphas_discrete[l], spec.d);
    table[l] = enc.d_value | (std::uint64_t{enc.carry_in} << spec.d);
  }
  auto outputs = layout.qubits("D");
  outputs.push_back(layout.qubit("w", 0));
  Circuit c(layout);
  c.add(XorOracle{layout.qubits("C"), std::move(outputs), std::make_shared<const std::vector<std::uint64_t>>(table)});
  return c;
}

/// H_C, value oracle, H_E, comparison, H_E.
inline Circuit comparator_synthesis_circuit(const ComparatorSpec& spec, const RegisterLayout& layout) {
  require_register(layout, "C", static_cast<std::size_t>(std::countr_zero(spec.alphas_discrete.size())));
  require_register(layout, "D", spec.d);
  require_register(layout, "E", spec.d);
  Circuit c(layout);
  for (Qubit q : layout.qubits("C")) c.add(Gate::h(q));
  c.append(comparator_value_oracle(spec, layout));
  for (Qubit q : layout.qubits("E")) c.add(Gate::h(q));
  c.append(comparator_circuit(layout));
  for (Qubit q : layout.qubits("E")) c.add(Gate::h(q));
  return c;
}

inline StateVector comparator_synthesis(const ComparatorSpec& spec, const RegisterLayout& layout) {
  const auto circuit = comparator_synthesis_circuit(spec, layout);
  StateVector state(layout.total_qubits());
  apply_circuit(state, circuit);
  return state;
}

/// The |0>_E |0>_g slice holding the comparator method's target.
inline BasisMask comparator_target(const RegisterLayout& layout) {
  return layout.equals("E", 0) & layout.equals("g", 0);
}

/// Smallest d with 2^-d <= eps, the comparator width for absolute precision eps.
inline std::size_t comparator_precision(double eps) {
  if (!(eps > 0 && eps < 1)) throw ConfigError("comparator precision must lie in (0, 1)");
  std::size_t d = 1;
  while (std::ldexp(1.0, -static_cast<int>(d)) > eps) ++d;
  return d;
}

/// Register widths each method needs beyond C for a cutoff eps and
/// relative precision delta.
struct RegisterTally {
  std::size_t d = 0;
  std::size_t direct = 0;
  std::size_t controlled = 0;
  /// Width of each of the comparator's D, E and w registers.
  std::size_t comparator_d = 0;
  std::size_t comparator_registers = 3;
  /// 3 comparator_d plus the flag qubit.
  std::size_t comparator = 0;
};

inline RegisterTally tally_registers(double cutoff_eps, double rel_prec_delta) {
  RegisterTally t;
  t.d = plan_precision(cutoff_eps, rel_prec_delta);
  t.direct = t.d;
  t.controlled = 2 * t.d;
  t.comparator_d = comparator_precision(cutoff_eps);
  t.comparator = 3 * t.comparator_d + 1;
  return t;
}

// ---------------------------------------------------------------------------

struct NormReport {
  std::string method;
  std::size_t d = 0;
  /// Pre-amplification norm of the target slice.
  double norm = 0;
  /// Qubits beyond the configuration register.
  std::size_t ancilla_qubits = 0;
  std::size_t total_qubits = 0;
  /// False when the state was too wide to simulate and the norm comes from
  /// the amplitude formula of the method.
  bool simulated = true;
};

struct CompareOptions {
  /// Defaults to 2^-d, the comparator's absolute resolution.
  std::optional<double> cutoff_eps;
  /// Defaults to the gamma that maps the cutoff onto lambda = 2^d - 1.
  std::optional<double> gamma;
  std::size_t max_simulated_qubits = 22;
};

/// Pre-amplification norms of the four synthesis methods on one alpha table.
inline std::vector<NormReport> compare_norms(std::span<const double> alphas, std::size_t d, CompareOptions options = {}) {
  const std::size_t n = detail::table_width(alphas);
  const double big_n = static_cast<double>(alphas.size());
  const double eps = options.cutoff_eps.value_or(std::ldexp(1.0, -static_cast<int>(d)));
  const double gamma =
      options.gamma.value_or(std::exp(-std::log(eps) / (std::ldexp(1.0, static_cast<int>(d)) - 1.0)));
  std::vector<NormReport> out;

  {
    const auto layout = rotation_oracle_layout(n);
    NormReport r{"rotation", d, 0, 1, layout.total_qubits()};
    if (layout.total_qubits() <= options.max_simulated_qubits) {
      r.norm = std::sqrt(probability(rotation_oracle_synthesis(alphas, layout), layout.equals("a", 0)));
    } else {
      double s = 0;
      for (double a : alphas) s += a * a;
      r.norm = std::sqrt(s / big_n);
      r.simulated = false;
    }
    out.push_back(r);
  }
  {
    const auto spec = ComparatorSpec::make(alphas, d);
    const auto layout = comparator_layout(n, d);
    NormReport r{"comparator", d, 0, 3 * d + 1, layout.total_qubits()};
    if (layout.total_qubits() <= options.max_simulated_qubits) {
      r.norm = std::sqrt(probability(comparator_synthesis(spec, layout), comparator_target(layout)));
    } else {
      double s = 0;
      for (auto a : spec.alphas_discrete) s += std::pow(std::ldexp(static_cast<double>(a), -static_cast<int>(d)), 2);
      r.norm = std::sqrt(s / big_n);
      r.simulated = false;
    }
    out.push_back(r);
  }
  const auto table = build_lambda_table(alphas, gamma, d, eps);
  for (Variant v : {Variant::Direct, Variant::Controlled}) {
    const auto layout = transduction_layout(n, d, v);
    NormReport r{"multiplicative-" + to_string(v), d, 0, v == Variant::Direct ? d : 2 * d, layout.total_qubits()};
    if (layout.total_qubits() <= options.max_simulated_qubits) {
      StateVector state(layout.total_qubits());
      apply_circuit(state, build_synthesis(table, TransductionPlan::make(gamma, d, v), layout));
      r.norm = std::sqrt(probability(state, target_predicate(layout, v)));
    } else {
      double s = 0;
      for (auto l : table.lambdas) s += std::exp(-2.0 * std::log(gamma) * static_cast<double>(l));
      r.norm = (v == Variant::Direct ? phi_product(gamma, d) : 1.0) * std::sqrt(s / big_n);
      r.simulated = false;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace amptrans
