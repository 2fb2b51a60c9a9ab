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
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "amptrans/errors.hpp"
#include "amptrans/lattice.hpp"
#include "amptrans/state_vector.hpp"
#include "amptrans/transduce.hpp"

namespace amptrans {

/// Figures of merit of one synthesis run.
struct SynthesisDiagnostics {
  std::size_t qubits = 0;
  std::size_t d = 0;
  /// Target-slice probability after U alone (measured on the state vector).
  double u_sq = 0;
  /// The same quantity from the classical norm formula.
  double u_sq_oracle = 0;
  int nu = 0;
  /// sin^2((2 nu + 1) asin u), predicted from the measured u.
  double a_prime_sq = 0;
  /// Target-slice probability of the final state vector.
  double a_prime_sq_measured = 0;
  /// Fraction of sampled shots landing in the target slice.
  double efficiency = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t shots = 0;
};

inline double binomial_sigma(double p, std::uint64_t shots) {
  return std::sqrt(static_cast<double>(shots) * p * (1 - p));
}

/// |frequency - p| within k binomial standard deviations at `shots` draws.
inline bool within_binomial_sigma(double frequency, double p, std::uint64_t shots, double k) {
  const double dev = std::abs(frequency - p) * static_cast<double>(shots);
  return dev <= k * binomial_sigma(p, shots);
}

struct ExactNorms {
  /// sqrt(sum_l gamma^(-2 lambda_l)).
  double abar = 0;
  /// prod_k cos(phi_k); 1 for the controlled variant.
  double phi = 1;
  /// Pre-amplification norm of the target slice.
  double u = 0;
};

/// Direct: u = Phi * Abar / sqrt(N). Controlled: u = Abar / sqrt(N).
inline ExactNorms exact_norms(std::span<const std::uint64_t> lambdas, double gamma, std::size_t d, Variant variant) {
  require_gamma(gamma);
  if (lambdas.empty()) throw ConfigError("empty lambda table");
  const double lg = std::log(gamma);
  double sum = 0;
  for (auto l : lambdas) sum += std::exp(-2.0 * lg * static_cast<double>(l));
  ExactNorms out;
  out.abar = std::sqrt(sum);
  out.phi = variant == Variant::Direct ? phi_product(gamma, d) : 1.0;
  out.u = out.phi * out.abar / std::sqrt(static_cast<double>(lambdas.size()));
  return out;
}

/// With `exact_zero`, entries at lambda = 2^d - 1 contribute nothing; this
/// covers every saturated entry and any entry whose lambda lands exactly on the top code.
inline ExactNorms exact_norms(const AmplitudeTable& table, Variant variant, bool exact_zero = false) {
  auto out = exact_norms(table.lambdas, table.gamma, table.d, variant);
  if (exact_zero) {
    double sum = 0;
    for (std::size_t l = 0; l < table.lambdas.size(); ++l)
      if (table.lambdas[l] != table.saturated_value()) sum += std::exp(-2.0 * std::log(table.gamma) * static_cast<double>(table.lambdas[l]));
    out.abar = std::sqrt(sum);
    out.u = out.phi * out.abar / std::sqrt(static_cast<double>(table.lambdas.size()));
  }
  return out;
}

/// Exact Boltzmann statistics by enumeration. Weights are exp(-2 beta J Sigma),
/// i.e. exp(-beta E) up to the constant exp(2 beta J N).
struct BoltzmannReference {
  double partition = 0;
  std::vector<double> p_config;
  std::map<int, double> p_sigma;
  std::map<int, std::uint64_t> density_of_states;
  std::map<int, double> p_magnetization;
};

inline BoltzmannReference boltzmann_reference(const IsingLattice& lattice) {
  if (lattice.sites() > kMaxEnumeratedSites)
    throw ConfigError("reference distributions need at most " + std::to_string(kMaxEnumeratedSites) + " sites");
  BoltzmannReference ref;
  const auto configs = lattice.configurations();
  ref.p_config.resize(configs);
  const double k = -2.0 * lattice.beta_j();
  for (std::uint64_t l = 0; l < configs; ++l) {
    const int sigma = sigma_count(lattice, l);
    const double w = std::exp(k * sigma);
    ref.p_config[l] = w;
    ref.partition += w;
    ref.density_of_states[sigma] += 1;
  }
  for (std::uint64_t l = 0; l < configs; ++l) {
    ref.p_config[l] /= ref.partition;
    ref.p_sigma[sigma_count(lattice, l)] += ref.p_config[l];
    ref.p_magnetization[magnetization(lattice, l)] += ref.p_config[l];
  }
  return ref;
}

struct DistributionTest {
  double chi_square = 0;
  int dof = 0;
  double p_value = 1;
  /// 0.5 * sum |observed frequency - reference| over the input bins, before pooling.
  double tvd = 0;
  std::size_t bins = 0;
};

/// Pearson chi-square goodness of fit and total-variation distance.
/// Bins with expected count below `min_expected` are pooled into one; a pooled
/// bin still short of it is merged into the smallest remaining bin.
inline DistributionTest distribution_tests(std::span<const std::uint64_t> observed, std::span<const double> reference,
                                           double min_expected = 5.0) {
  if (observed.empty() || observed.size() != reference.size())
    throw ConfigError("observed and reference must be non-empty and of equal length");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (!(total > 0)) throw ConfigError("no observations");
  const double ref_total = std::accumulate(reference.begin(), reference.end(), 0.0);
  if (!(ref_total > 0)) throw ConfigError("reference distribution is empty");

  DistributionTest out;
  struct Bin {
    double obs = 0, expected = 0;
  };
  std::vector<Bin> bins;
  Bin pooled;
  bool any_pooled = false;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double p = reference[i] / ref_total;
    const double obs = static_cast<double>(observed[i]);
    out.tvd += 0.5 * std::abs(obs / total - p);
    const double e = total * p;
    if (e < min_expected) {
      pooled.obs += obs;
      pooled.expected += e;
      any_pooled = true;
    } else {
      bins.push_back({obs, e});
    }
  }
  if (any_pooled) {
    if (pooled.expected >= min_expected || bins.empty()) {
      bins.push_back(pooled);
    } else {
      auto smallest = std::min_element(bins.begin(), bins.end(),
                                       [](const Bin& a, const Bin& b) { return a.expected < b.expected; });
      smallest->obs += pooled.obs;
      smallest->expected += pooled.expected;
    }
  }
  out.bins = bins.size();
  for (const auto& b : bins) {
    if (b.expected == 0) {
      if (b.obs > 0) out.chi_square = std::numeric_limits<double>::infinity();
      continue;
    }
    out.chi_square += (b.obs - b.expected) * (b.obs - b.expected) / b.expected;
  }
  out.dof = static_cast<int>(bins.size()) - 1;
  if (!std::isfinite(out.chi_square))
    out.p_value = 0;
  else if (out.dof <= 0)
    out.p_value = 1;
  else
    out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(out.dof),
                                                            out.chi_square));
  return out;
}

/// One bin of the Sigma histogram: observed counts, counts per configuration,
/// and the expected per-configuration count kept * exp(-2 beta J Sigma) / Z.
struct SigmaBin {
  int sigma = 0;
  std::uint64_t observed = 0;
  std::uint64_t states = 0;
  double per_state = 0;
  double theory = 0;
};

/// `config_counts` maps configuration l to its post-selected count.
inline std::vector<SigmaBin> sigma_histogram(const IsingLattice& lattice, const Counts& config_counts,
                                             const BoltzmannReference& ref) {
  std::map<int, std::uint64_t> observed;
  std::uint64_t kept = 0;
  for (const auto& [l, n] : config_counts) {
    observed[sigma_count(lattice, l)] += n;
    kept += n;
  }
  std::vector<SigmaBin> out;
  for (const auto& [sigma, states] : ref.density_of_states) {
    SigmaBin b{sigma, observed[sigma], states};
    b.per_state = static_cast<double>(b.observed) / static_cast<double>(states);
    b.theory = static_cast<double>(kept) * std::exp(-2.0 * lattice.beta_j() * sigma) / ref.partition;
    out.push_back(b);
  }
  return out;
}

struct MagnetizationBin {
  int m = 0;
  std::uint64_t observed = 0;
  double frequency = 0;
  double reference = 0;
};

inline std::vector<MagnetizationBin> magnetization_histogram(const IsingLattice& lattice, const Counts& config_counts,
                                                             const BoltzmannReference& ref) {
  std::map<int, std::uint64_t> observed;
  std::uint64_t kept = 0;
  for (const auto& [l, n] : config_counts) {
    observed[magnetization(lattice, l)] += n;
    kept += n;
  }
  std::vector<MagnetizationBin> out;
  for (const auto& [m, p] : ref.p_magnetization) {
    MagnetizationBin b{m, observed[m], 0, p};
    b.frequency = kept ? static_cast<double>(b.observed) / static_cast<double>(kept) : 0;
    out.push_back(b);
  }
  return out;
}

}  // namespace amptrans
