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
#include <map>
#include <vector>

#include "gtest/gtest.h"

#include "amptrans/ising.hpp"

using namespace amptrans;

namespace {

std::map<int, std::uint64_t> sigma_histogram_of(const IsingLattice& lattice) {
  std::map<int, std::uint64_t> h;
  for (std::uint64_t l = 0; l < lattice.configurations(); ++l) h[sigma_count(lattice, l)] += 1;
  return h;
}

}  // namespace

TEST(Lattice, pairs_and_double_counted_bonds) {
  const IsingLattice l22(2, 2, 0.1);
  EXPECT_EQ(l22.pairs().size(), 8u);
  // Spin 0 pairs with 1 to the right and 2 below.
  EXPECT_EQ(l22.pairs()[0].first, 0u);
  EXPECT_EQ(l22.pairs()[0].second, 1u);
  EXPECT_EQ(l22.pairs()[1].second, 2u);
  // One flipped spin on 2x2 breaks four pair entries.
  EXPECT_EQ(sigma_count(l22, 0b0001), 4);
  EXPECT_EQ(sigma_count(l22, 0b0110), 8);
  EXPECT_EQ(l22.name(), "2x2");
  EXPECT_EQ(IsingLattice(3, 4, 0.1).pairs().size(), 24u);
}

TEST(Lattice, sigma_spectra) {
  EXPECT_EQ(sigma_histogram_of(IsingLattice(2, 2, 0.1)), (std::map<int, std::uint64_t>{{0, 2}, {4, 12}, {8, 2}}));
  EXPECT_EQ(sigma_histogram_of(IsingLattice(3, 3, 0.1)),
            (std::map<int, std::uint64_t>{{0, 2}, {4, 18}, {6, 48}, {8, 198}, {10, 144}, {12, 102}}));
  EXPECT_EQ(max_sigma(IsingLattice(2, 2, 0.1)), 8);
  EXPECT_EQ(max_sigma(IsingLattice(3, 3, 0.1)), 12);
  EXPECT_EQ(max_sigma(IsingLattice(4, 4, 0.1)), 32);
  EXPECT_EQ(max_sigma(IsingLattice(5, 5, 0.1)), 50);  // bound above the enumeration limit
}

TEST(Lattice, magnetization_extremes) {
  const IsingLattice l(4, 4, 0.1);
  EXPECT_EQ(magnetization(l, 0), -16);
  EXPECT_EQ(magnetization(l, 0xFFFF), 16);
  EXPECT_EQ(magnetization(l, 0x00FF), 0);
}

TEST(Lattice, rejects_bad_shapes) {
  EXPECT_THROW(IsingLattice(1, 4, 0.1), ConfigError);
  EXPECT_THROW(IsingLattice(8, 8, 0.1), ConfigError);
  EXPECT_THROW(IsingLattice(2, 2, -0.1), ConfigError);
  EXPECT_THROW(IsingLattice(2, 2, std::nan("")), ConfigError);
}

TEST(BoltzmannTarget, widths_and_lambdas) {
  EXPECT_EQ(auto_d(IsingLattice(2, 2, 0.1)), 3u);
  EXPECT_EQ(auto_d(IsingLattice(3, 3, 0.1)), 3u);
  EXPECT_EQ(auto_d(IsingLattice(4, 4, 0.1)), 5u);
  const IsingLattice l(2, 2, 0.1);
  const auto t = BoltzmannTarget::make(l);
  EXPECT_NEAR(t.gamma, std::exp(0.2), 1e-15);
  for (std::uint64_t c = 0; c < 16; ++c) {
    EXPECT_EQ(2 * t.lambdas[c], static_cast<std::uint64_t>(sigma_count(l, c)));
    EXPECT_NEAR(t.alpha(c), std::exp(-0.1 * sigma_count(l, c)), 1e-14);
  }
  EXPECT_THROW(BoltzmannTarget::make(l, 2), OverflowError);
  EXPECT_THROW(BoltzmannTarget::make(IsingLattice(2, 2, 0.0)), ConfigError);
  EXPECT_EQ(ising_layout(l, 3, Variant::Direct).total_qubits(), 8u);
  EXPECT_EQ(ising_layout(l, 3, Variant::Controlled).total_qubits(), 11u);
  EXPECT_EQ(ising_layout(IsingLattice(4, 4, 0.1), 5, Variant::Controlled).total_qubits(), 27u);
}

TEST(InverseQft, reads_out_fourier_phases) {
  for (std::size_t d = 1; d <= 5; ++d) {
    RegisterLayout layout;
    layout.add("D", d);
    const std::uint64_t size = std::uint64_t{1} << d;
    for (std::uint64_t y = 0; y < size; ++y) {
      std::vector<StateVector::amplitude> amps(size);
      for (std::uint64_t x = 0; x < size; ++x)
        amps[x] = std::polar(1 / std::sqrt(static_cast<double>(size)),
                             2 * std::numbers::pi * static_cast<double>(x * y) / static_cast<double>(size));
      auto s = StateVector::from_amplitudes(std::move(amps));
      Circuit c(layout);
      append_inverse_qft(c, layout.qubits("D"));
      apply_circuit(s, c);
      EXPECT_NEAR(std::norm(s[y]), 1.0, 1e-12) << "d " << d << " y " << y;
    }
  }
}

// The counting oracle must write Sigma/2 into D for every configuration.
class IsingOracleExhaustive : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(IsingOracleExhaustive, d_register_holds_half_sigma) {
  const auto [rows, cols] = GetParam();
  const IsingLattice lattice(rows, cols, 0.1);
  const std::size_t d = auto_d(lattice);
  const auto layout = ising_layout(lattice, d, Variant::Direct);
  Circuit c(layout);
  for (Qubit q : layout.qubits("C")) c.add(Gate::h(q));
  c.append(build_ising_L(lattice, d, layout));
  StateVector s(layout.total_qubits());
  apply_circuit(s, c);
  const double expected = 1.0 / static_cast<double>(lattice.configurations());
  std::uint64_t hits = 0;
  for (std::uint64_t x = 0; x < s.size(); ++x) {
    const double p = std::norm(s[x]);
    if (p < 1e-3 * expected) continue;
    const auto l = layout.extract(x, "C");
    ASSERT_EQ(layout.extract(x, "D"), static_cast<std::uint64_t>(sigma_count(lattice, l) / 2)) << "config " << l;
    ASSERT_EQ(layout.extract(x, "a"), 1u);
    ASSERT_NEAR(p, expected, 1e-9);
    ++hits;
  }
  EXPECT_EQ(hits, lattice.configurations());
}

INSTANTIATE_TEST_SUITE_P(Lattices, IsingOracleExhaustive,
                         ::testing::Values(std::pair{2ul, 2ul}, std::pair{2ul, 3ul}, std::pair{3ul, 3ul},
                                           std::pair{2ul, 5ul}, std::pair{3ul, 4ul}, std::pair{4ul, 4ul}),
                         [](const auto& info) {
                           return std::to_string(info.param.first) + "x" + std::to_string(info.param.second);
                         });

TEST(IsingOracle, rejects_narrow_counter) {
  const IsingLattice lattice(2, 2, 0.1);
  EXPECT_THROW(build_ising_L(lattice, 2, ising_layout(lattice, 2, Variant::Direct)), OverflowError);
}

TEST(SynthesizeBoltzmann, small_lattice_norms) {
  struct Row {
    std::size_t side;
    Variant variant;
    double u_sq;
    int nu;
    double post;
  };
  const std::vector<Row> rows{{2, Variant::Direct, 0.167457, 2, 0.738154},
                              {3, Variant::Direct, 0.062604, 3, 0.960737},
                              {2, Variant::Controlled, 0.487234, 1, 0.538265},
                              {3, Variant::Controlled, 0.182153, 2, 0.649166}};
  for (const auto& r : rows) {
    BoltzmannOptions opt;
    opt.variant = r.variant;
    const auto run = synthesize_boltzmann(IsingLattice(r.side, r.side, 0.1), opt);
    EXPECT_NEAR(run.diagnostics.u_sq, r.u_sq, 1e-6);
    EXPECT_NEAR(run.diagnostics.u_sq, run.diagnostics.u_sq_oracle, 1e-10);
    EXPECT_EQ(run.diagnostics.nu, r.nu);
    EXPECT_NEAR(run.diagnostics.a_prime_sq, r.post, 1e-6);
    EXPECT_NEAR(run.diagnostics.a_prime_sq_measured, run.diagnostics.a_prime_sq, 1e-10);
  }
}

TEST(SynthesizeBoltzmann, target_slice_is_boltzmann) {
  const IsingLattice lattice(2, 3, 0.3);
  const auto ref = boltzmann_reference(lattice);
  for (Variant v : {Variant::Direct, Variant::Controlled}) {
    BoltzmannOptions opt;
    opt.variant = v;
    const auto run = synthesize_boltzmann(lattice, opt);
    const auto dist = register_distribution(run.state, run.layout, "C", run.target);
    double kept = 0;
    for (double p : dist) kept += p;
    for (std::uint64_t l = 0; l < dist.size(); ++l) EXPECT_NEAR(dist[l] / kept, ref.p_config[l], 1e-10);
  }
}

TEST(SynthesizeBoltzmann, options_and_refusals) {
  const IsingLattice lattice(2, 2, 0.1);
  BoltzmannOptions opt;
  opt.amplify = false;
  EXPECT_EQ(synthesize_boltzmann(lattice, opt).diagnostics.nu, 0);
  opt.nu = 3;
  const auto forced = synthesize_boltzmann(lattice, opt);
  EXPECT_EQ(forced.diagnostics.nu, 3);
  EXPECT_NEAR(forced.diagnostics.a_prime_sq_measured, forced.diagnostics.a_prime_sq, 1e-10);
  opt.nu = -1;
  EXPECT_THROW(synthesize_boltzmann(lattice, opt), ConfigError);
  BoltzmannOptions small;
  small.memory_budget_bytes = 1024;
  EXPECT_THROW(synthesize_boltzmann(lattice, small), MemoryBudgetError);
  EXPECT_EQ(boltzmann_memory_bytes(IsingLattice(4, 4, 0.1), 5, Variant::Controlled), std::uint64_t{1} << 31);
}

TEST(SampleBoltzmann, deterministic_and_consistent) {
  const IsingLattice lattice(2, 2, 0.1);
  const auto run = synthesize_boltzmann(lattice, {});
  const auto a = sample_postselected(run, 4096, 9);
  const auto b = sample_postselected(run, 4096, 9);
  EXPECT_EQ(a.values, b.values);
  std::uint64_t total = 0;
  for (const auto& [l, n] : a.values) total += n;
  EXPECT_EQ(total, a.kept);
  EXPECT_DOUBLE_EQ(a.efficiency, static_cast<double>(a.kept) / 4096.0);
  EXPECT_TRUE(within_binomial_sigma(a.efficiency, run.diagnostics.a_prime_sq_measured, 4096, 5));
  const auto c = sample_postselected(run, 1000, 9, true);
  EXPECT_EQ(c.kept, 1000u);
  EXPECT_TRUE(std::isnan(c.efficiency));
}
