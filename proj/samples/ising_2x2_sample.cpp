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

// Boltzmann sampling on a 2x2 periodic Ising lattice: synthesize, amplify,
// sample, and compare the Sigma histogram with the exact distribution.

#include <cstdio>

#include "amptrans/amptrans.hpp"

int main() {
  using namespace amptrans;

  const IsingLattice lattice(2, 2, 0.1);
  BoltzmannOptions options;
  options.variant = Variant::Controlled;
  const auto run = synthesize_boltzmann(lattice, options);
  const auto& d = run.diagnostics;
  std::printf("%zu qubits, d = %zu, u^2 = %.6f, nu = %d, A'^2 = %.6f\n", d.qubits, d.d, d.u_sq, d.nu,
              d.a_prime_sq_measured);

  const auto sample = sample_postselected(run, 1 << 16, 2026);
  std::printf("kept %llu of %llu shots (efficiency %.4f)\n", static_cast<unsigned long long>(sample.kept),
              static_cast<unsigned long long>(sample.shots), sample.efficiency);

  const auto ref = boltzmann_reference(lattice);
  std::printf("sigma  states  observed/state  expected/state\n");
  for (const auto& b : sigma_histogram(lattice, sample.values, ref))
    std::printf("%5d  %6llu  %14.1f  %14.1f\n", b.sigma, static_cast<unsigned long long>(b.states), b.per_state,
                b.theory);
  return 0;
}
