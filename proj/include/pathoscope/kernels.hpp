#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with identical output; tests assert equality, bench/ times them.
//
// Results never depend on the thread count: permutation i always draws from
// its own generator seeded with (seed, i).

#include <cstddef>
#include <cstdint>
#include <span>

namespace pathoscope::kernels {

// Shared precomputation for permutation testing of a correlation between two
// fixed rank vectors.
struct PermutationProblem {
  std::span<const double> x_centered;  // x - mean(x)
  std::span<const double> y_centered;  // y - mean(y), permuted per draw
  double norm = 0.0;                   // sqrt(sum x_c^2 * sum y_c^2)
  double observed_abs_rho = 0.0;
};

// Counts draws whose |rho| reaches the observed |rho| (within 1e-12).
std::size_t count_extreme_permutations_serial(const PermutationProblem& problem,
                                              std::size_t permutations, std::uint64_t seed);
std::size_t count_extreme_permutations(const PermutationProblem& problem,
                                       std::size_t permutations, std::uint64_t seed);

// Seed for draw `index` under base seed `seed` (splitmix64 finalizer).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pathoscope::kernels
