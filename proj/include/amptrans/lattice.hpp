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
#include <string>
#include <vector>

#include "amptrans/errors.hpp"
#include "amptrans/register_layout.hpp"

namespace amptrans {

/// Inverse critical temperature of the square-lattice model in units of 1/J,
/// as used to express beta relative to criticality on the command line.
inline constexpr double kCriticalBetaJ = 2.269;

/// Largest lattice handled by exhaustive enumeration.
inline constexpr std::size_t kMaxEnumeratedSites = 20;

struct SitePair {
  Qubit first = 0;
  Qubit second = 0;
};

/// Periodic rows x cols square lattice with dimensionless coupling beta*J.
/// Site (r, c) is spin r * cols + c; spin up is bit value 1.
///
/// Every site is paired with its right and its down neighbour, which gives
/// exactly 2N pairs. On a side of length 2 the two pairs along that side
/// describe the same physical bond, so that bond is counted twice.
class IsingLattice {
 public:
  IsingLattice(std::size_t rows, std::size_t cols, double beta_j) : rows_(rows), cols_(cols), beta_j_(beta_j) {
    if (rows < 2 || cols < 2) throw ConfigError("lattice sides must be at least 2");
    if (rows * cols > 62) throw ConfigError("lattices with more than 62 sites are not supported");
    if (!(beta_j >= 0) || !std::isfinite(beta_j)) throw ConfigError("beta*J must be a finite non-negative number");
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const Qubit s = r * cols + c;
        pairs_.push_back({s, r * cols + (c + 1) % cols});
        pairs_.push_back({s, ((r + 1) % rows) * cols + c});
      }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t sites() const { return rows_ * cols_; }
  double beta_j() const { return beta_j_; }
  const std::vector<SitePair>& pairs() const { return pairs_; }
  std::uint64_t configurations() const { return std::uint64_t{1} << sites(); }

  std::string name() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  std::size_t rows_, cols_;
  double beta_j_;
  std::vector<SitePair> pairs_;
};

/// Number of pairs whose two spins differ.
inline int sigma_count(const IsingLattice& lattice, std::uint64_t config) {
  int sigma = 0;
  for (const auto& p : lattice.pairs()) sigma += static_cast<int>(((config >> p.first) ^ (config >> p.second)) & 1);
  return sigma;
}

/// M = sum_i s_i with s_i = +1 for bit 1.
inline int magnetization(const IsingLattice& lattice, std::uint64_t config) {
  const auto up = std::popcount(config & (lattice.configurations() - 1));
  return 2 * up - static_cast<int>(lattice.sites());
}

/// max over configurations of sigma_count: exhaustive up to
/// kMaxEnumeratedSites, otherwise the bound 2N.
inline int max_sigma(const IsingLattice& lattice) {
  if (lattice.sites() > kMaxEnumeratedSites) return static_cast<int>(2 * lattice.sites());
  int best = 0;
  for (std::uint64_t l = 0; l < lattice.configurations(); ++l) best = std::max(best, sigma_count(lattice, l));
  return best;
}

}  // namespace amptrans
