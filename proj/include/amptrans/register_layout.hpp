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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "amptrans/errors.hpp"

namespace amptrans {

using Qubit = std::size_t;

/// Selects the basis states whose bits under `mask` equal `value`.
struct BasisMask {
  std::uint64_t mask = 0;
  std::uint64_t value = 0;

  constexpr bool matches(std::uint64_t index) const { return (index & mask) == value; }

  /// Conjunction of two predicates over disjoint bits.
  constexpr BasisMask operator&(const BasisMask& other) const {
    return {mask | other.mask, value | other.value};
  }
};

struct Register {
  std::string name;
  Qubit offset = 0;
  std::size_t width = 0;

  Qubit qubit(std::size_t k) const { return offset + k; }
  std::uint64_t mask() const { return ((std::uint64_t{1} << width) - 1) << offset; }
  bool operator==(const Register&) const = default;
};

/// Named, contiguous qubit ranges. Registers are laid out in insertion order
/// starting at qubit 0, so they are disjoint and cover [0, total_qubits()).
/// Bit k of a register value lives on qubit offset + k.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  RegisterLayout& add(std::string name, std::size_t width) {
    if (width == 0) throw ConfigError("register '" + name + "' must have at least one qubit");
    if (contains(name)) throw ConfigError("duplicate register '" + name + "'");
    if (total_ + width > 62) throw ConfigError("layouts wider than 62 qubits are not supported");
    registers_.push_back({std::move(name), total_, width});
    total_ += width;
    return *this;
  }

  std::size_t total_qubits() const { return total_; }
  const std::vector<Register>& registers() const { return registers_; }

  bool contains(std::string_view name) const {
    for (const auto& r : registers_)
      if (r.name == name) return true;
    return false;
  }

  const Register& at(std::string_view name) const {
    for (const auto& r : registers_)
      if (r.name == name) return r;
    throw ConfigError("unknown register '" + std::string(name) + "'");
  }

  std::size_t width(std::string_view name) const { return at(name).width; }
  Qubit qubit(std::string_view name, std::size_t k) const {
    const auto& r = at(name);
    if (k >= r.width) throw ConfigError("qubit index out of range for register '" + r.name + "'");
    return r.qubit(k);
  }

  std::vector<Qubit> qubits(std::string_view name) const {
    const auto& r = at(name);
    std::vector<Qubit> out(r.width);
    for (std::size_t k = 0; k < r.width; ++k) out[k] = r.qubit(k);
    return out;
  }

  /// Value held by register `name` in basis state `index`.
  std::uint64_t extract(std::uint64_t index, std::string_view name) const {
    const auto& r = at(name);
    return (index >> r.offset) & ((std::uint64_t{1} << r.width) - 1);
  }

  /// Predicate "register `name` holds `value`".
  BasisMask equals(std::string_view name, std::uint64_t value) const {
    const auto& r = at(name);
    if (r.width < 64 && value >> r.width) throw ConfigError("value does not fit register '" + r.name + "'");
    return {r.mask(), value << r.offset};
  }

  /// Predicate matching only |0...0>.
  BasisMask all_zero() const { return {total_ == 0 ? 0 : (std::uint64_t{1} << total_) - 1, 0}; }

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> registers_;
  std::size_t total_ = 0;
};

}  // namespace amptrans
