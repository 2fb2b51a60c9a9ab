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
#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amptrans/circuit.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/gate.hpp"
#include "amptrans/register_layout.hpp"
#include "amptrans/rng.hpp"

namespace amptrans {

#ifdef AMPTRANS_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

/// Tolerance used to reject non-normalized inputs.
template <std::floating_point T>
constexpr double norm_tolerance() {
  return std::is_same_v<T, float> ? 1e-4 : 1e-8;
}

/// Dense amplitude array over `num_qubits` qubits. Qubit i is bit i of the
/// basis index.
template <std::floating_point T>
class BasicStateVector {
 public:
  using real_type = T;
  using amplitude = std::complex<T>;

  /// |0...0>.
  explicit BasicStateVector(std::size_t num_qubits)
      : num_qubits_(checked_width(num_qubits)), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = amplitude(1);
  }

  static BasicStateVector basis(std::size_t num_qubits, std::uint64_t index) {
    BasicStateVector s(num_qubits);
    if (index >= s.size()) throw ConfigError("basis index out of range");
    s.amps_[0] = amplitude(0);
    s.amps_[index] = amplitude(1);
    return s;
  }

  static BasicStateVector from_amplitudes(std::vector<amplitude> amps) {
    if (amps.empty() || !std::has_single_bit(amps.size()))
      throw ConfigError("amplitude count must be a power of two");
    BasicStateVector s(0);
    s.num_qubits_ = static_cast<std::size_t>(std::countr_zero(amps.size()));
    s.amps_ = std::move(amps);
    return s;
  }

  /// Bytes needed to hold a state over `num_qubits` qubits.
  static std::uint64_t bytes_for(std::size_t num_qubits) { return (std::uint64_t{1} << num_qubits) * sizeof(amplitude); }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<amplitude> amplitudes() { return amps_; }
  std::span<const amplitude> amplitudes() const { return amps_; }
  amplitude& operator[](std::size_t i) { return amps_[i]; }
  const amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double acc = 0;
    for (const auto& a : amps_) acc += static_cast<double>(std::norm(a));
    return acc;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  void require_normalized() const {
    if (std::abs(norm_squared() - 1.0) > norm_tolerance<T>()) throw ConfigError("state vector is not normalized");
  }

 private:
  static std::size_t checked_width(std::size_t n) {
    if (n > 40) throw MemoryBudgetError("state vectors over 40 qubits are not supported");
    return n;
  }

  std::size_t num_qubits_;
  std::vector<amplitude> amps_;
};

using StateVector = BasicStateVector<Real>;

/// Euclidean distance between two states of equal width.
template <std::floating_point T>
double distance(const BasicStateVector<T>& a, const BasicStateVector<T>& b) {
  if (a.size() != b.size()) throw ConfigError("distance: size mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(std::norm(a[i] - b[i]));
  return std::sqrt(acc);
}

namespace detail {

inline std::uint64_t bit(Qubit q) { return std::uint64_t{1} << q; }

/// Spreads the bits of `i` over the positions not listed in `sorted_fixed`.
inline std::uint64_t deposit(std::uint64_t i, std::span<const Qubit> sorted_fixed) {
  for (Qubit p : sorted_fixed) i = ((i >> p) << (p + 1)) | (i & (bit(p) - 1));
  return i;
}

/// Calls fn(i0, i1) for every index pair that differs only in `target`
/// (i0 has the target bit clear) and satisfies all controls.
template <class Fn>
void for_each_pair(std::size_t num_qubits, Qubit target, const std::vector<Control>& controls, Fn&& fn) {
  const std::uint64_t size = std::uint64_t{1} << num_qubits;
  const std::uint64_t tbit = bit(target);
  if (controls.empty()) {
    for (std::uint64_t hi = 0; hi < size; hi += 2 * tbit)
      for (std::uint64_t lo = hi; lo < hi + tbit; ++lo) fn(lo, lo | tbit);
    return;
  }
  std::vector<Qubit> fixed{target};
  std::uint64_t fixed_value = 0;
  for (const auto& c : controls) {
    fixed.push_back(c.qubit);
    if (c.on_one) fixed_value |= bit(c.qubit);
  }
  std::sort(fixed.begin(), fixed.end());
  const std::uint64_t count = size >> fixed.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t i0 = deposit(i, fixed) | fixed_value;
    fn(i0, i0 | tbit);
  }
}

template <std::floating_point T>
void apply_gate_unchecked(BasicStateVector<T>& state, const Gate& g) {
  using C = std::complex<T>;
  auto* a = state.amplitudes().data();
  const std::size_t n = state.num_qubits();
  switch (g.kind) {
    case GateKind::H: {
      const T s = static_cast<T>(std::numbers::sqrt2 / 2);
      for_each_pair(n, g.target, g.controls, [&](std::uint64_t i0, std::uint64_t i1) {
        const C x = a[i0], y = a[i1];
        a[i0] = s * (x + y);
        a[i1] = s * (x - y);
      });
      break;
    }
    case GateKind::X:
      for_each_pair(n, g.target, g.controls, [&](std::uint64_t i0, std::uint64_t i1) { std::swap(a[i0], a[i1]); });
      break;
    case GateKind::Z:
      for_each_pair(n, g.target, g.controls, [&](std::uint64_t, std::uint64_t i1) { a[i1] = -a[i1]; });
      break;
    case GateKind::Phase: {
      const C ph = std::polar(T(1), static_cast<T>(g.angle));
      for_each_pair(n, g.target, g.controls, [&](std::uint64_t, std::uint64_t i1) { a[i1] *= ph; });
      break;
    }
    case GateKind::RotY: {
      const T c = static_cast<T>(std::cos(g.angle / 2)), s = static_cast<T>(std::sin(g.angle / 2));
      for_each_pair(n, g.target, g.controls, [&](std::uint64_t i0, std::uint64_t i1) {
        const C x = a[i0], y = a[i1];
        a[i0] = c * x - s * y;
        a[i1] = s * x + c * y;
      });
      break;
    }
    case GateKind::Swap: {
      // Pairs with target = 1, partner = 0 swap with target = 0, partner = 1.
      std::vector<Qubit> fixed{g.target, g.partner};
      std::uint64_t fixed_value = bit(g.target);
      for (const auto& ctl : g.controls) {
        fixed.push_back(ctl.qubit);
        if (ctl.on_one) fixed_value |= bit(ctl.qubit);
      }
      std::sort(fixed.begin(), fixed.end());
      const std::uint64_t count = state.size() >> fixed.size();
      const std::uint64_t flip = bit(g.target) | bit(g.partner);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t i0 = deposit(i, fixed) | fixed_value;
        std::swap(a[i0], a[i0 ^ flip]);
      }
      break;
    }
  }
}

inline std::uint64_t gather(std::uint64_t index, std::span<const Qubit> qubits) {
  std::uint64_t out = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) out |= ((index >> qubits[b]) & 1) << b;
  return out;
}

template <std::floating_point T>
void apply_oracle(BasicStateVector<T>& state, const XorOracle& oracle) {
  auto* a = state.amplitudes().data();
  const auto& table = *oracle.table;
  for (std::uint64_t x = 0; x < state.size(); ++x) {
    const std::uint64_t v = table[gather(x, oracle.keys)];
    if (v == 0) continue;
    std::uint64_t flip = 0;
    for (std::size_t b = 0; b < oracle.outputs.size(); ++b) flip |= ((v >> b) & 1) << oracle.outputs[b];
    const std::uint64_t y = x ^ flip;
    if (x < y) std::swap(a[x], a[y]);
  }
}

/// A run of X/Z/Phase/SWAP gates whose permutation part cancels, applied as a
/// single diagonal: amp[x] *= table[bits of x on `support`].
template <std::floating_point T>
struct FusedDiagonal {
  std::vector<Qubit> support;
  std::vector<std::complex<T>> table;
  std::size_t gate_count = 0;
};

inline constexpr std::size_t kMaxFusedSupport = 22;

template <std::floating_point T>
FusedDiagonal<T> fuse(std::span<const Operation> run, std::uint64_t support_mask) {
  FusedDiagonal<T> out;
  for (Qubit q = 0; q < 64; ++q)
    if ((support_mask >> q) & 1) out.support.push_back(q);
  auto local = [&](Qubit q) {
    return std::uint64_t{1} << (std::lower_bound(out.support.begin(), out.support.end(), q) - out.support.begin());
  };
  struct LocalGate {
    GateKind kind;
    std::uint64_t t, p, cmask, cval;
    double angle;
  };
  std::vector<LocalGate> gates;
  for (const auto& op : run) {
    const auto& g = std::get<Gate>(op);
    LocalGate lg{g.kind, local(g.target), g.kind == GateKind::Swap ? local(g.partner) : 0, 0, 0, g.angle};
    for (const auto& c : g.controls) {
      lg.cmask |= local(c.qubit);
      if (c.on_one) lg.cval |= local(c.qubit);
    }
    gates.push_back(lg);
  }
  out.gate_count = gates.size();
  const std::uint64_t patterns = std::uint64_t{1} << out.support.size();
  out.table.resize(patterns);
  for (std::uint64_t p = 0; p < patterns; ++p) {
    std::uint64_t cur = p;
    double angle = 0;
    for (const auto& g : gates) {
      if ((cur & g.cmask) != g.cval) continue;
      switch (g.kind) {
        case GateKind::X: cur ^= g.t; break;
        case GateKind::Swap:
          if (((cur & g.t) != 0) != ((cur & g.p) != 0)) cur ^= g.t | g.p;
          break;
        case GateKind::Z:
          if (cur & g.t) angle += std::numbers::pi;
          break;
        case GateKind::Phase:
          if (cur & g.t) angle += g.angle;
          break;
        default: break;
      }
    }
    out.table[p] = std::polar(T(1), static_cast<T>(angle));
  }
  return out;
}

template <std::floating_point T>
void apply_fused(BasicStateVector<T>& state, const FusedDiagonal<T>& f) {
  auto* a = state.amplitudes().data();
  const auto* table = f.table.data();
  const Qubit lo = f.support.front();
  const bool contiguous = f.support.back() - lo + 1 == f.support.size();
  if (contiguous) {
    const std::uint64_t mask = f.table.size() - 1;
    for (std::uint64_t x = 0; x < state.size(); ++x) a[x] *= table[(x >> lo) & mask];
  } else {
    for (std::uint64_t x = 0; x < state.size(); ++x) a[x] *= table[gather(x, f.support)];
  }
}

}  // namespace detail

/// A circuit prepared for repeated application. Runs of classical and
/// diagonal gates whose net permutation is the identity (e.g. a CNOT, a
/// string of controlled phases, and the same CNOT again) are folded into one
/// diagonal pass over the state.
template <std::floating_point T>
class BasicCompiledCircuit {
 public:
  using Step = std::variant<Gate, XorOracle, detail::FusedDiagonal<T>>;

  BasicCompiledCircuit(const Circuit& circuit, bool fuse_diagonal = true) : layout_(circuit.layout()) {
    const auto& ops = circuit.operations();
    auto monomial = [&](std::size_t i) {
      const auto* g = std::get_if<Gate>(&ops[i]);
      return g && (g->is_diagonal() || g->is_permutation());
    };
    std::size_t i = 0;
    while (i < ops.size()) {
      if (fuse_diagonal && monomial(i)) {
        std::vector<const Gate*> stack;
        std::uint64_t support = 0, best_support = 0;
        std::size_t best_end = i;
        for (std::size_t j = i; j < ops.size() && monomial(j); ++j) {
          const auto& g = std::get<Gate>(ops[j]);
          std::uint64_t next = support;
          for (Qubit q : g.support()) next |= detail::bit(q);
          if (static_cast<std::size_t>(std::popcount(next)) > detail::kMaxFusedSupport) break;
          support = next;
          if (g.is_permutation()) {
            if (!stack.empty() && *stack.back() == g)
              stack.pop_back();
            else
              stack.push_back(&g);
          }
          if (stack.empty()) {
            best_end = j;
            best_support = support;
          }
        }
        if (best_end > i) {
          steps_.emplace_back(detail::fuse<T>(std::span(ops).subspan(i, best_end - i + 1), best_support));
          i = best_end + 1;
          continue;
        }
      }
      if (const auto* g = std::get_if<Gate>(&ops[i]))
        steps_.emplace_back(*g);
      else
        steps_.emplace_back(std::get<XorOracle>(ops[i]));
      ++i;
    }
  }

  const RegisterLayout& layout() const { return layout_; }
  std::size_t num_qubits() const { return layout_.total_qubits(); }
  const std::vector<Step>& steps() const { return steps_; }

  /// Number of passes over the state vector one application costs.
  std::size_t pass_count() const { return steps_.size(); }

 private:
  RegisterLayout layout_;
  std::vector<Step> steps_;
};

using CompiledCircuit = BasicCompiledCircuit<Real>;

/// Applies one gate. Throws ConfigError for out-of-range indices or a
/// non-normalized input.
template <std::floating_point T>
void apply_gate(BasicStateVector<T>& state, const Gate& gate) {
  gate.validate(state.num_qubits());
  state.require_normalized();
  detail::apply_gate_unchecked(state, gate);
}

template <std::floating_point T>
void apply_compiled(BasicStateVector<T>& state, const BasicCompiledCircuit<T>& circuit) {
  if (circuit.num_qubits() != state.num_qubits()) throw ConfigError("circuit layout does not match state width");
  for (const auto& step : circuit.steps()) {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Gate>)
            detail::apply_gate_unchecked(state, s);
          else if constexpr (std::is_same_v<S, XorOracle>)
            detail::apply_oracle(state, s);
          else
            detail::apply_fused(state, s);
        },
        step);
  }
}

struct ApplyOptions {
  bool fuse_diagonal = true;
  bool check_norm = true;
};

/// Applies every operation of `circuit` in order.
template <std::floating_point T>
void apply_circuit(BasicStateVector<T>& state, const Circuit& circuit, ApplyOptions options = {}) {
  if (circuit.num_qubits() != state.num_qubits()) throw ConfigError("circuit layout does not match state width");
  if (options.check_norm) state.require_normalized();
  apply_compiled(state, BasicCompiledCircuit<T>(circuit, options.fuse_diagonal));
}

/// Sum of |amplitude|^2 over basis states matching `where`.
template <std::floating_point T>
double probability(const BasicStateVector<T>& state, BasisMask where) {
  double acc = 0;
  for (std::uint64_t x = 0; x < state.size(); ++x)
    if (where.matches(x)) acc += static_cast<double>(std::norm(state[x]));
  return acc;
}

/// Probability that register `name` reads `value`.
template <std::floating_point T>
double project_probability(const BasicStateVector<T>& state, const RegisterLayout& layout, std::string_view name,
                           std::uint64_t value) {
  if (layout.total_qubits() != state.num_qubits()) throw ConfigError("layout does not match state width");
  return probability(state, layout.equals(name, value));
}

/// Probability of each value of register `name`, restricted to basis states
/// matching `where` (not renormalized).
template <std::floating_point T>
std::vector<double> register_distribution(const BasicStateVector<T>& state, const RegisterLayout& layout,
                                          std::string_view name, BasisMask where = {}) {
  std::vector<double> out(std::size_t{1} << layout.width(name), 0.0);
  for (std::uint64_t x = 0; x < state.size(); ++x)
    if (where.matches(x)) out[layout.extract(x, name)] += static_cast<double>(std::norm(state[x]));
  return out;
}

using Counts = std::map<std::uint64_t, std::uint64_t>;

/// Draws `shots` basis indices from |amplitude|^2 conditioned on `where`.
///
/// Uses Rng(seed, 0): the shots' uniforms are drawn, sorted, and matched
/// against one cumulative sweep of the state.
template <std::floating_point T>
Counts sample_where(const BasicStateVector<T>& state, BasisMask where, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shots must be at least 1");
  const double total = probability(state, where);
  if (!(total > 0)) throw ConfigError("post-selection probability is zero");
  Rng rng(seed);
  std::vector<double> u(shots);
  for (auto& v : u) v = rng.uniform() * total;
  std::sort(u.begin(), u.end());
  Counts counts;
  std::uint64_t k = 0, last = 0;
  double cum = 0;
  for (std::uint64_t x = 0; x < state.size() && k < shots; ++x) {
    if (!where.matches(x)) continue;
    const double p = static_cast<double>(std::norm(state[x]));
    if (p == 0) continue;
    cum += p;
    last = x;
    std::uint64_t hits = 0;
    while (k < shots && u[k] < cum) ++hits, ++k;
    if (hits) counts[x] += hits;
  }
  // Uniforms beyond the final rounded cumulative sum land on the last
  // supported state.
  if (k < shots) counts[last] += shots - k;
  return counts;
}

/// Draws `shots` basis indices from |amplitude|^2.
template <std::floating_point T>
Counts sample(const BasicStateVector<T>& state, std::uint64_t shots, std::uint64_t seed) {
  return sample_where(state, BasisMask{}, shots, seed);
}

}  // namespace amptrans
