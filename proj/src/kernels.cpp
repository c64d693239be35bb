#include "pathoscope/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace pathoscope::kernels {
namespace {

constexpr double kTieSlack = 1e-12;

// One draw: shuffle y into `scratch`, correlate with x.
bool draw_is_extreme(const PermutationProblem& p, std::uint64_t seed, std::size_t index,
                     std::vector<double>& scratch) {
  std::copy(p.y_centered.begin(), p.y_centered.end(), scratch.begin());
  std::mt19937_64 gen(stream_seed(seed, index));
  std::shuffle(scratch.begin(), scratch.end(), gen);
  double cross = 0.0;
  for (std::size_t k = 0; k < scratch.size(); ++k) cross += p.x_centered[k] * scratch[k];
  return std::abs(cross / p.norm) >= p.observed_abs_rho - kTieSlack;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t count_extreme_permutations_serial(const PermutationProblem& problem,
                                              std::size_t permutations, std::uint64_t seed) {
  std::vector<double> scratch(problem.y_centered.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < permutations; ++i) {
    hits += draw_is_extreme(problem, seed, i, scratch);
  }
  return hits;
}

std::size_t count_extreme_permutations(const PermutationProblem& problem,
                                       std::size_t permutations, std::uint64_t seed) {
  std::size_t hits = 0;
  const auto count = static_cast<long long>(permutations);
#pragma omp parallel reduction(+ : hits)
  {
    std::vector<double> scratch(problem.y_centered.size());
#pragma omp for schedule(static)
    for (long long i = 0; i < count; ++i) {
      hits += draw_is_extreme(problem, seed, static_cast<std::size_t>(i), scratch);
    }
  }
  return hits;
}

}  // namespace pathoscope::kernels
