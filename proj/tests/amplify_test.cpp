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
#include <numbers>
#include <vector>

#include "gtest/gtest.h"

#include "amptrans/amplify.hpp"
#include "test_util.hpp"

using namespace amptrans;
using amptrans::test_util::flat_layout;
using amptrans::test_util::random_circuit;

namespace {

Circuit h_layer(const RegisterLayout& layout) {
  Circuit c(layout);
  for (Qubit q = 0; q < layout.total_qubits(); ++q) c.add(Gate::h(q));
  return c;
}

}  // namespace

TEST(SelectNu, rounding_rule_on_reference_norms) {
  const std::vector<double> u_sq{0.167457, 0.062604, 0.015806, 0.487234, 0.182153, 0.047942};
  const std::vector<int> nu{2, 3, 6, 1, 2, 4};
  const std::vector<double> post{0.738154, 0.960737, 0.995397, 0.538265, 0.649166, 0.836769};
  for (std::size_t i = 0; i < u_sq.size(); ++i) {
    const double u = std::sqrt(u_sq[i]);
    EXPECT_EQ(select_nu(u, NuRule::PaperRound), nu[i]) << i;
    EXPECT_NEAR(predicted_postamp(u, nu[i]), post[i], 1e-5) << i;
  }
}

TEST(SelectNu, optimal_rule_never_loses_to_rounding) {
  for (int i = 1; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const int best = select_nu(u, NuRule::Optimal);
    EXPECT_GE(predicted_postamp(u, best) + 1e-12, predicted_postamp(u, select_nu(u, NuRule::PaperRound)));
    EXPECT_GE(predicted_postamp(u, best) + 1e-12, predicted_postamp(u, best + 1));
    if (best > 0) {
      EXPECT_GE(predicted_postamp(u, best) + 1e-12, predicted_postamp(u, best - 1));
    }
  }
  // Near u = 0.78 rounding gives 1 while no iterate is better.
  EXPECT_EQ(select_nu(0.78, NuRule::PaperRound), 1);
  EXPECT_EQ(select_nu(0.78, NuRule::Optimal), 0);
}

TEST(SelectNu, rejects_out_of_range_norms) {
  EXPECT_THROW(select_nu(0.0, NuRule::PaperRound), ConfigError);
  EXPECT_THROW(select_nu(1.5, NuRule::Optimal), ConfigError);
  EXPECT_THROW(predicted_postamp(0.5, -1), ConfigError);
  EXPECT_THROW(parse_nu_rule("ceil"), ConfigError);
  EXPECT_EQ(parse_nu_rule("optimal"), NuRule::Optimal);
  EXPECT_EQ(to_string(NuRule::PaperRound), "paper");
}

TEST(PhaseFlip, zero_flip_circuit_matches_projector) {
  const auto layout = flat_layout(4);
  Rng rng(5);
  auto a = test_util::random_state(4, rng);
  auto b = a;
  const std::vector<Qubit> qubits{0, 1, 2, 3};
  apply_circuit(a, zero_flip_circuit(layout, qubits));
  phase_flip(b, layout.all_zero());
  EXPECT_LT(distance(a, b), 1e-14);
  EXPECT_THROW(zero_flip_circuit(layout, std::span<const Qubit>{}), ConfigError);
}

TEST(Amplifier, uniform_search_follows_rotation_angle) {
  const auto layout = flat_layout(4);
  const auto target = layout.equals("q", 11);
  const double u = 0.25;
  for (int nu = 0; nu <= 4; ++nu) {
    const auto state = amplify(AmplificationSpec::make(h_layer(layout), target, nu));
    const double amp = std::sin((2 * nu + 1) * std::asin(u));
    EXPECT_NEAR(state[11].real(), amp, 1e-12) << nu;
    EXPECT_NEAR(state.norm_squared(), 1.0, 1e-12);
  }
  EXPECT_EQ(select_nu(u, NuRule::PaperRound), 3);
  EXPECT_GT(amplify(AmplificationSpec::make(h_layer(layout), target, 3))[11].real(), 0.96);
}

TEST(Amplifier, iterate_matches_free_function) {
  const auto layout = flat_layout(3);
  Rng rng(12);
  const auto spec = AmplificationSpec::make(random_circuit(layout, 30, rng), layout.equals("q", 2), 1);
  const Amplifier amp(spec);
  auto a = amp.synthesize();
  auto b = a;
  amp.iterate(a);
  grover_iterate(b, spec);
  EXPECT_LT(distance(a, b), 1e-14);
  EXPECT_LT(distance(a, amp.run()), 1e-14);
}

TEST(Amplifier, rejects_bad_specs) {
  const auto layout = flat_layout(2);
  auto spec = AmplificationSpec::make(h_layer(layout), layout.equals("q", 1), -1);
  EXPECT_THROW(Amplifier{spec}, ConfigError);
  spec.nu = 1;
  spec.target = BasisMask{0b100, 0};
  EXPECT_THROW(Amplifier{spec}, ConfigError);
  spec.target = layout.equals("q", 1);
  spec.source = BasisMask{0b1, 0};
  EXPECT_THROW(Amplifier{spec}, ConfigError);
}

TEST(AmplifierProperty, probability_law_and_slice_shape) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const auto layout = flat_layout(n);
    const auto synthesis = random_circuit(layout, 25, rng);
    // Target: a random subset of qubits fixed to random values.
    const std::uint64_t mask = (rng.next_u64() % ((std::uint64_t{1} << n) - 1)) + 1;
    const BasisMask target{mask, rng.next_u64() & mask};
    const int nu = static_cast<int>(rng.next_u64() % 6);
    const Amplifier amp(AmplificationSpec::make(synthesis, target, nu));
    const auto before = amp.synthesize();
    const double u_sq = probability(before, target);
    if (u_sq < 1e-6) continue;
    const auto after = amp.run();
    const double u = std::min(1.0, std::sqrt(u_sq));
    EXPECT_NEAR(probability(after, target), predicted_postamp(u, nu), 1e-10);
    EXPECT_NEAR(after.norm_squared(), 1.0, 1e-10);
    // Inside the target slice the state is a positive real multiple of the original.
    const double scale = std::sin((2 * nu + 1) * std::asin(u)) / u;
    for (std::uint64_t x = 0; x < before.size(); ++x)
      if (target.matches(x)) {
        EXPECT_LT(std::abs(after[x] - scale * before[x]), 1e-10);
      }
  }
}
