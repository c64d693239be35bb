#pragma once

// Rank statistics: tie-aware Spearman correlation with significance,
// descriptive statistics and median consensus of ordinal scores.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pathoscope/core.hpp"

namespace pathoscope::rankstats {

enum class PValueMethod { kTApprox, kPermutation };

std::string_view to_string(PValueMethod m);
std::optional<PValueMethod> p_value_method_from_string(std::string_view name);

struct PermutationOptions {
  std::size_t permutations = 10000;
  std::uint64_t seed = 0x5eed'2026'0305ULL;
};

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  PValueMethod method = PValueMethod::kTApprox;
};

struct DescriptiveStats {
  double mean = 0.0;
  double sd = 0.0;  // sample (n - 1) standard deviation; 0 for n == 1
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

// 1-based ranks; ties share the mean of the positions they occupy.
// Throws InputError on empty input or a non-finite value.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation. Throws DegenerateStatisticsError when either series is
// constant and InputError on a length mismatch.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman rho computed as Pearson on average ranks (exact under ties).
//
// Throws InputError on unequal lengths and DegenerateStatisticsError when
// n < 3 or either series is constant.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           PValueMethod method = PValueMethod::kTApprox,
                           const PermutationOptions& options = {});

// Two-sided p for a given rho.
//
// kTApprox uses t = rho * sqrt((n - 2) / (1 - rho^2)) on n - 2 degrees of
// freedom; |rho| == 1 gives exactly 0. kPermutation samples the null of an
// untied sample of size n. spearman() instead permutes the observed ranks,
// which accounts for the actual tie pattern.
double p_value(double rho, std::size_t n, PValueMethod method,
               const PermutationOptions& options = {});

// Permutation p-value for observed (already ranked) data:
// (1 + #{perm : |rho_perm| >= |rho_obs|}) / (1 + permutations).
double permutation_p_value(std::span<const double> x_ranks, std::span<const double> y_ranks,
                           const PermutationOptions& options);

DescriptiveStats describe(std::span<const double> values);

// Median of the scores. For an even count the two central values are
// averaged and rounded half away from zero. Throws InputError when empty.
PathosScore median_consensus(std::span<const PathosScore> scores);

// Keeps the positions where both series have a value, in order.
// Throws InputError on unequal lengths.
std::pair<std::vector<double>, std::vector<double>> pairwise_complete(
    std::span<const std::optional<double>> a, std::span<const std::optional<double>> b);

}  // namespace pathoscope::rankstats
