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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "amptrans/analysis.hpp"
#include "amptrans/ising.hpp"

using namespace amptrans;

TEST(Binomial, sigma_and_window) {
  EXPECT_DOUBLE_EQ(binomial_sigma(0.5, 100), 5.0);
  EXPECT_TRUE(within_binomial_sigma(0.549, 0.5, 100, 1));
  EXPECT_FALSE(within_binomial_sigma(0.551, 0.5, 100, 1));
  // 0.743 vs 0.738 at 2^17 shots is about 4 sigma.
  EXPECT_TRUE(within_binomial_sigma(0.743, 0.738154, 1u << 17, 5));
  EXPECT_FALSE(within_binomial_sigma(0.743, 0.738154, 1u << 17, 3));
}

TEST(ExactNorms, reference_lattice_norms) {
  const auto t = BoltzmannTarget::make(IsingLattice(2, 2, 0.1));
  const auto direct = exact_norms(t.lambdas, t.gamma, t.d, Variant::Direct);
  const auto controlled = exact_norms(t.lambdas, t.gamma, t.d, Variant::Controlled);
  EXPECT_NEAR(direct.u * direct.u, 0.167457, 1e-6);
  EXPECT_NEAR(controlled.u * controlled.u, 0.487234, 1e-6);
  EXPECT_NEAR(direct.phi * direct.phi, 0.343689, 1e-6);
  EXPECT_EQ(controlled.phi, 1.0);
  EXPECT_NEAR(controlled.abar, std::sqrt(2 + 12 * std::exp(-0.8) + 2 * std::exp(-1.6)), 1e-14);
  EXPECT_THROW(exact_norms(std::vector<std::uint64_t>{}, 2.0, 3, Variant::Direct), ConfigError);
}

TEST(BoltzmannReference, two_by_two_partition_function) {
  const auto ref = boltzmann_reference(IsingLattice(2, 2, 0.1));
  EXPECT_NEAR(ref.partition, 7.795740605395969, 1e-12);
  EXPECT_EQ(ref.density_of_states.at(4), 12u);
  EXPECT_NEAR(ref.p_sigma.at(0), 2 / 7.795740605395969, 1e-14);
  double total = 0;
  for (double p : ref.p_config) total += p;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(ref.p_magnetization.at(4), ref.p_magnetization.at(-4), 1e-15);
}

TEST(BoltzmannReference, infinite_temperature_is_uniform) {
  const auto ref = boltzmann_reference(IsingLattice(3, 3, 0.0));
  for (double p : ref.p_config) EXPECT_NEAR(p, 1.0 / 512, 1e-15);
  EXPECT_NEAR(ref.p_magnetization.at(1), 126.0 / 512, 1e-14);
  EXPECT_THROW(boltzmann_reference(IsingLattice(3, 7, 0.1)), ConfigError);
}

TEST(BoltzmannReference, magnetization_modes_move_with_temperature) {
  auto mode = [](const BoltzmannReference& ref) {
    int best = 0;
    double p = -1;
    for (const auto& [m, q] : ref.p_magnetization)
      if (q > p) p = q, best = m;
    return best;
  };
  EXPECT_EQ(mode(boltzmann_reference(IsingLattice(4, 4, 0.1 * kCriticalBetaJ))), 0);
  EXPECT_EQ(std::abs(mode(boltzmann_reference(IsingLattice(4, 4, 2 * kCriticalBetaJ)))), 16);
}

TEST(DistributionTests, known_chi_square) {
  const std::vector<std::uint64_t> obs{10, 20, 30, 40};
  const std::vector<double> ref{1, 1, 1, 1};
  const auto r = distribution_tests(obs, ref);
  EXPECT_NEAR(r.chi_square, 20.0, 1e-12);
  EXPECT_EQ(r.dof, 3);
  EXPECT_NEAR(r.p_value, 0.00016974243555282643, 1e-12);
  EXPECT_NEAR(r.tvd, 0.2, 1e-12);
  EXPECT_EQ(r.bins, 4u);
}

TEST(DistributionTests, exact_fit) {
  const std::vector<std::uint64_t> obs{25, 50, 25};
  const std::vector<double> ref{0.25, 0.5, 0.25};
  const auto r = distribution_tests(obs, ref);
  EXPECT_EQ(r.chi_square, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  EXPECT_EQ(r.tvd, 0.0);
}

TEST(DistributionTests, sparse_bins_are_pooled) {
  // Expected counts 98, 1, 1: the two sparse bins pool into an expected 2,
  // which is still short and joins the large bin, leaving zero dof.
  const std::vector<std::uint64_t> obs{97, 2, 1};
  const std::vector<double> ref{0.98, 0.01, 0.01};
  const auto r = distribution_tests(obs, ref);
  EXPECT_EQ(r.bins, 1u);
  EXPECT_EQ(r.dof, 0);
  EXPECT_EQ(r.p_value, 1.0);
  // Expected 90, 4, 3, 3: the three sparse bins pool into an expected 10.
  const std::vector<std::uint64_t> obs2{88, 2, 6, 4};
  const std::vector<double> ref2{0.9, 0.04, 0.03, 0.03};
  const auto r2 = distribution_tests(obs2, ref2);
  EXPECT_EQ(r2.bins, 2u);
  EXPECT_NEAR(r2.chi_square, 4.0 / 90 + 4.0 / 10, 1e-12);
  EXPECT_NEAR(r2.p_value, 0.5051, 1e-3);
}

TEST(DistributionTests, rejects_mismatched_input) {
  EXPECT_THROW(distribution_tests(std::vector<std::uint64_t>{1, 2}, std::vector<double>{1}), ConfigError);
  EXPECT_THROW(distribution_tests(std::vector<std::uint64_t>{0, 0}, std::vector<double>{1, 1}), ConfigError);
  EXPECT_THROW(distribution_tests(std::vector<std::uint64_t>{1, 0}, std::vector<double>{0, 0}), ConfigError);
}

TEST(Histograms, exact_counts_sit_on_theory) {
  const IsingLattice lattice(2, 2, 0.1);
  const auto ref = boltzmann_reference(lattice);
  Counts counts;
  const double scale = 1e6;
  std::uint64_t kept = 0;
  for (std::uint64_t l = 0; l < 16; ++l) {
    counts[l] = static_cast<std::uint64_t>(std::llround(scale * ref.p_config[l]));
    kept += counts[l];
  }
  const auto sigma = sigma_histogram(lattice, counts, ref);
  ASSERT_EQ(sigma.size(), 3u);
  for (const auto& b : sigma) {
    EXPECT_NEAR(b.per_state / b.theory, 1.0, 1e-4) << b.sigma;
    EXPECT_EQ(b.states, ref.density_of_states.at(b.sigma));
  }
  const auto mag = magnetization_histogram(lattice, counts, ref);
  ASSERT_EQ(mag.size(), 5u);
  for (const auto& b : mag) EXPECT_NEAR(b.frequency, b.reference, 1e-6);
  EXPECT_EQ(mag.front().m, -4);
  EXPECT_NEAR(static_cast<double>(kept), scale, 16);
}

TEST(Histograms, sampled_sigma_law_property) {
  // Counts drawn from the exact Boltzmann distribution should pass the
  // 0.001-level fit for at least 99% of seeds.
  const IsingLattice lattice(3, 3, 0.1);
  const auto ref = boltzmann_reference(lattice);
  std::vector<StateVector::amplitude> amps;
  for (double p : ref.p_config) amps.emplace_back(std::sqrt(p), 0.0);
  const auto state = StateVector::from_amplitudes(std::move(amps));
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto counts = sample(state, 1u << 14, seed);
    std::vector<std::uint64_t> obs;
    std::vector<double> expected;
    for (const auto& b : sigma_histogram(lattice, counts, ref)) {
      obs.push_back(b.observed);
      expected.push_back(ref.p_sigma.at(b.sigma));
    }
    if (distribution_tests(obs, expected).p_value > 0.001) ++passes;
  }
  EXPECT_GE(passes, 198);
}

TEST(Histograms, sampled_synthesis_matches_reference) {
  const IsingLattice lattice(3, 3, 0.1);
  const auto ref = boltzmann_reference(lattice);
  const auto run = synthesize_boltzmann(lattice, {});
  const auto s = sample_postselected(run, 1u << 14, 5, true);
  std::vector<std::uint64_t> obs;
  std::vector<double> expected;
  for (const auto& b : sigma_histogram(lattice, s.values, ref)) {
    obs.push_back(b.observed);
    expected.push_back(ref.p_sigma.at(b.sigma));
  }
  EXPECT_GT(distribution_tests(obs, expected).p_value, 0.001);
}
