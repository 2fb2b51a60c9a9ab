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
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/gate.hpp"
#include "amptrans/register_layout.hpp"
#include "amptrans/state_vector.hpp"

namespace amptrans {

/// Direct: uncontrolled rotations on D, target in the D == 0 slice.
/// Controlled: D-controlled rotations onto E, target in the E == 0 slice.
enum class Variant { Direct, Controlled };

inline std::string to_string(Variant v) { return v == Variant::Direct ? "direct" : "controlled"; }

inline Variant parse_variant(std::string_view s) {
  if (s == "direct") return Variant::Direct;
  if (s == "controlled") return Variant::Controlled;
  throw ConfigError("unknown variant '" + std::string(s) + "' (expected direct or controlled)");
}

inline void require_gamma(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be a finite number greater than 1");
}

/// Log base, register width and the constant rotation angles of the
/// transduction step. Direct uses angles[k] = atan(gamma^-(2^k)), Controlled
/// uses angles[k] = acos(gamma^-(2^k)).
struct TransductionPlan {
  double gamma = 0;
  std::size_t d = 0;
  Variant variant = Variant::Direct;
  std::vector<double> angles;

  static TransductionPlan make(double gamma, std::size_t d, Variant variant) {
    require_gamma(gamma);
    if (d == 0 || d > 62) throw ConfigError("d must be in [1, 62]");
    TransductionPlan plan{gamma, d, variant, std::vector<double>(d)};
    for (std::size_t k = 0; k < d; ++k) {
      // gamma^-(2^k), computed in log space to stay finite for large k.
      const double factor = std::exp(-std::ldexp(std::log(gamma), static_cast<int>(k)));
      plan.angles[k] = variant == Variant::Direct ? std::atan(factor) : std::acos(factor);
    }
    return plan;
  }
};

/// Smallest d >= 1 with 2^d > -ln(eps) / delta.
inline std::size_t plan_precision(double cutoff_eps, double rel_prec_delta) {
  if (!(cutoff_eps > 0 && cutoff_eps < 1)) throw ConfigError("cutoff epsilon must lie in (0, 1)");
  if (!(rel_prec_delta > 0) || !std::isfinite(rel_prec_delta)) throw ConfigError("relative precision must be positive");
  const double bound = -std::log(cutoff_eps) / rel_prec_delta;
  std::size_t d = 1;
  while (std::ldexp(1.0, static_cast<int>(d)) <= bound) {
    if (++d > 62) throw OverflowError("required register width exceeds 62 qubits");
  }
  return d;
}

/// Target moduli with their digitized logarithms.
struct AmplitudeTable {
  std::vector<double> alphas;
  double gamma = 0;
  std::size_t d = 0;
  double cutoff_eps = 0;
  std::vector<std::uint64_t> lambdas;

  std::uint64_t saturated_value() const { return (std::uint64_t{1} << d) - 1; }
  bool saturated(std::size_t l) const { return alphas[l] < cutoff_eps; }
};

/// lambda_l = floor(-log_gamma alpha_l) for alpha_l >= eps, 2^d - 1 below the
/// cutoff. A non-saturated lambda that does not fit in d bits is an error.
inline AmplitudeTable build_lambda_table(std::span<const double> alphas, double gamma, std::size_t d,
                                         double cutoff_eps) {
  require_gamma(gamma);
  if (d == 0 || d > 62) throw ConfigError("d must be in [1, 62]");
  if (!(cutoff_eps > 0 && cutoff_eps < 1)) throw ConfigError("cutoff epsilon must lie in (0, 1)");
  if (alphas.empty() || !std::has_single_bit(alphas.size())) throw ConfigError("alpha table size must be a power of two");
  AmplitudeTable table{{alphas.begin(), alphas.end()}, gamma, d, cutoff_eps, std::vector<std::uint64_t>(alphas.size())};
  const double log_gamma = std::log(gamma);
  const double limit = std::ldexp(1.0, static_cast<int>(d));
  for (std::size_t l = 0; l < alphas.size(); ++l) {
    const double a = alphas[l];
    if (!(a >= 0 && a <= 1)) throw ConfigError("alpha[" + std::to_string(l) + "] is outside [0, 1]");
    if (a < cutoff_eps) {
      table.lambdas[l] = table.saturated_value();
      continue;
    }
    // The small offset keeps exact powers of gamma from flooring one step low.
    const double lambda = std::floor(-std::log(a) / log_gamma + 1e-9);
    if (lambda >= limit)
      throw OverflowError("lambda[" + std::to_string(l) + "] = " + std::to_string(lambda) + " does not fit in d = " +
                          std::to_string(d) + " qubits");
    table.lambdas[l] = static_cast<std::uint64_t>(std::max(0.0, lambda));
  }
  return table;
}

/// C, D, [E], [z]: z is the NAND flag used by enforce_exact_zero.
inline RegisterLayout transduction_layout(std::size_t n, std::size_t d, Variant variant, bool zero_flag = false) {
  RegisterLayout layout;
  layout.add("C", n).add("D", d);
  if (variant == Variant::Controlled) layout.add("E", d);
  if (zero_flag) layout.add("z", 1);
  return layout;
}

inline void require_register(const RegisterLayout& layout, std::string_view name, std::size_t width) {
  if (!layout.contains(name)) throw ConfigError("layout is missing register '" + std::string(name) + "'");
  if (layout.width(name) != width)
    throw ConfigError("register '" + std::string(name) + "' has width " + std::to_string(layout.width(name)) +
                      ", expected " + std::to_string(width));
}

/// |l>_C |0>_D -> |l>_C |lambda_l>_D, as a coherent table lookup.
inline Circuit build_L_oracle(const AmplitudeTable& table, const RegisterLayout& layout) {
  require_register(layout, "C", static_cast<std::size_t>(std::countr_zero(table.lambdas.size())));
  require_register(layout, "D", table.d);
  Circuit c(layout);
  c.add(XorOracle{layout.qubits("C"), layout.qubits("D"),
                  std::make_shared<const std::vector<std::uint64_t>>(table.lambdas)});
  return c;
}

/// Applies the lambda oracle to a state whose D register must be |0> on
/// every branch; throws ConfigError otherwise.
template <std::floating_point T>
void apply_lambda_oracle(BasicStateVector<T>& state, const AmplitudeTable& table, const RegisterLayout& layout) {
  const auto circuit = build_L_oracle(table, layout);
  const auto d_mask = layout.at("D").mask();
  for (std::uint64_t x = 0; x < state.size(); ++x)
    if ((x & d_mask) != 0 && std::abs(state[x]) > 1e-12) throw ConfigError("lambda oracle input has D != 0");
  apply_circuit(state, circuit);
}

/// Direct transduction: RotY(-2 phi_k) on qubit k of D.
inline Circuit build_T1(const TransductionPlan& plan, const RegisterLayout& layout) {
  if (plan.variant != Variant::Direct) throw ConfigError("build_T1 needs a direct-variant plan");
  require_register(layout, "D", plan.d);
  Circuit c(layout);
  for (std::size_t k = 0; k < plan.d; ++k) c.add(Gate::ry(layout.qubit("D", k), -2 * plan.angles[k]));
  return c;
}

/// Controlled transduction: RotY(2 psi_k) on E_k controlled by D_k.
inline Circuit build_T2(const TransductionPlan& plan, const RegisterLayout& layout) {
  if (plan.variant != Variant::Controlled) throw ConfigError("build_T2 needs a controlled-variant plan");
  require_register(layout, "D", plan.d);
  if (!layout.contains("E")) throw ConfigError("controlled transduction needs an E register");
  require_register(layout, "E", plan.d);
  Circuit c(layout);
  for (std::size_t k = 0; k < plan.d; ++k)
    c.add(Gate::ry(layout.qubit("E", k), 2 * plan.angles[k]).controlled_by(layout.qubit("D", k)));
  return c;
}

/// prod_k cos(atan(gamma^-(2^k))).
inline double phi_product(double gamma, std::size_t d) {
  require_gamma(gamma);
  if (d == 0) throw ConfigError("d must be at least 1");
  double phi = 1;
  for (double a : TransductionPlan::make(gamma, d, Variant::Direct).angles) phi *= std::cos(a);
  return phi;
}

/// sqrt((1 - gamma^-2) / (1 - gamma^-(2^(d+1)))), the telescoped form of phi_product.
inline double phi_product_closed_form(double gamma, std::size_t d) {
  require_gamma(gamma);
  const double lg = std::log(gamma);
  const double num = -std::expm1(-2 * lg);
  const double den = -std::expm1(-std::ldexp(lg, static_cast<int>(d) + 1));
  return std::sqrt(num / den);
}

/// Transduction that removes saturated branches (D == 2^d - 1) from the
/// target slice exactly. Writes NAND(D) into the flag register z, conditions
/// every rotation on z, and for the controlled variant flips E with NOT gates
/// anti-controlled on z. In the direct variant a saturated D is all ones and
/// already has no |0>_D component once its rotations are skipped.
inline Circuit enforce_exact_zero(const TransductionPlan& plan, const RegisterLayout& layout) {
  if (!layout.contains("z")) throw ConfigError("exact-zero transduction needs a flag register 'z'");
  require_register(layout, "D", plan.d);
  const Qubit flag = layout.qubit("z", 0);
  Circuit c(layout);
  c.add(Gate::x(flag));
  Gate nand = Gate::x(flag);
  for (Qubit q : layout.qubits("D")) nand = std::move(nand).controlled_by(q);
  c.add(nand);
  if (plan.variant == Variant::Direct) {
    for (std::size_t k = 0; k < plan.d; ++k)
      c.add(Gate::ry(layout.qubit("D", k), -2 * plan.angles[k]).controlled_by(flag));
  } else {
    require_register(layout, "E", plan.d);
    for (std::size_t k = 0; k < plan.d; ++k)
      c.add(Gate::ry(layout.qubit("E", k), 2 * plan.angles[k]).controlled_by(layout.qubit("D", k)).controlled_by(flag));
    for (std::size_t k = 0; k < plan.d; ++k) c.add(Gate::x(layout.qubit("E", k)).controlled_by(flag, false));
  }
  return c;
}

inline Circuit build_transduction(const TransductionPlan& plan, const RegisterLayout& layout, bool exact_zero = false) {
  if (exact_zero) return enforce_exact_zero(plan, layout);
  return plan.variant == Variant::Direct ? build_T1(plan, layout) : build_T2(plan, layout);
}

/// Slice of the state that carries the synthesized target.
inline BasisMask target_predicate(const RegisterLayout& layout, Variant variant) {
  return layout.equals(variant == Variant::Direct ? "D" : "E", 0);
}

/// H_C, the lambda oracle, then the transduction step: the U that amplitude
/// amplification repeats.
inline Circuit build_synthesis(const AmplitudeTable& table, const TransductionPlan& plan, const RegisterLayout& layout,
                               bool exact_zero = false) {
  if (plan.d != table.d || plan.gamma != table.gamma) throw ConfigError("plan and table disagree on gamma or d");
  Circuit c(layout);
  for (Qubit q : layout.qubits("C")) c.add(Gate::h(q));
  c.append(build_L_oracle(table, layout));
  c.append(build_transduction(plan, layout, exact_zero));
  return c;
}

}  // namespace amptrans
