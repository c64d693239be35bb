#include "pathoscope/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "pathoscope/error.hpp"
#include "pathoscope/kernels.hpp"

namespace pathoscope::rankstats {
namespace {

constexpr std::size_t kMinPairs = 3;

std::vector<double> centered(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [mean](double x) { return x - mean; });
  return out;
}

double sum_squares(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double t_approx_p_value(double rho, std::size_t n) {
  if (rho == 0.0) return 1.0;
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::clamp(p, 0.0, 1.0);
}

double permutation_p_from_centered(const std::vector<double>& xc, const std::vector<double>& yc,
                                   double rho, const PermutationOptions& options) {
  if (options.permutations == 0) throw InputError("permutation count must be positive");
  kernels::PermutationProblem problem;
  problem.x_centered = xc;
  problem.y_centered = yc;
  problem.norm = std::sqrt(sum_squares(xc) * sum_squares(yc));
  problem.observed_abs_rho = std::abs(rho);
  const std::size_t hits =
      kernels::count_extreme_permutations(problem, options.permutations, options.seed);
  return static_cast<double>(hits + 1) / static_cast<double>(options.permutations + 1);
}

}  // namespace

std::string_view to_string(PValueMethod m) {
  return m == PValueMethod::kTApprox ? "t_approx" : "permutation";
}

std::optional<PValueMethod> p_value_method_from_string(std::string_view name) {
  if (name == "t_approx") return PValueMethod::kTApprox;
  if (name == "permutation") return PValueMethod::kPermutation;
  return std::nullopt;
}

std::vector<double> average_ranks(std::span<const double> values) {
  if (values.empty()) throw InputError("cannot rank an empty series");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("cannot rank a non-finite value");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) hold one tie group: ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("series lengths differ");
  if (x.empty()) throw DegenerateStatisticsError("correlation of empty series");
  if (is_constant(x) || is_constant(y)) {
    throw DegenerateStatisticsError("correlation undefined for a constant series");
  }
  const auto xc = centered(x);
  const auto yc = centered(y);
  const double cross = std::inner_product(xc.begin(), xc.end(), yc.begin(), 0.0);
  const double r = cross / std::sqrt(sum_squares(xc) * sum_squares(yc));
  return std::clamp(r, -1.0, 1.0);
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           PValueMethod method, const PermutationOptions& options) {
  if (x.size() != y.size()) {
    throw InputError("spearman: series lengths differ (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  if (x.size() < kMinPairs) {
    throw DegenerateStatisticsError("spearman: need at least 3 pairs, got " +
                                    std::to_string(x.size()));
  }
  if (is_constant(x) || is_constant(y)) {
    throw DegenerateStatisticsError("spearman: rho undefined for a constant series");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  CorrelationResult result;
  result.rho = pearson(rx, ry);
  result.n = x.size();
  result.method = method;
  if (method == PValueMethod::kTApprox) {
    result.p_value = t_approx_p_value(result.rho, result.n);
  } else {
    result.p_value = permutation_p_from_centered(centered(rx), centered(ry), result.rho, options);
  }
  return result;
}

double p_value(double rho, std::size_t n, PValueMethod method, const PermutationOptions& options) {
  if (!std::isfinite(rho) || std::abs(rho) > 1.0) throw InputError("rho outside [-1,1]");
  if (n < kMinPairs) throw DegenerateStatisticsError("p-value needs n >= 3");
  if (method == PValueMethod::kTApprox) return t_approx_p_value(rho, n);
  std::vector<double> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1.0);
  const auto c = centered(ranks);
  return permutation_p_from_centered(c, c, rho, options);
}

double permutation_p_value(std::span<const double> x_ranks, std::span<const double> y_ranks,
                           const PermutationOptions& options) {
  const double rho = pearson(x_ranks, y_ranks);
  return permutation_p_from_centered(centered(x_ranks), centered(y_ranks), rho, options);
}

DescriptiveStats describe(std::span<const double> values) {
  if (values.empty()) throw InputError("describe: empty series");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("describe: non-finite value");
  }
  DescriptiveStats s;
  s.n = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  if (s.min == s.max) {
    s.mean = s.min;
    s.sd = 0.0;
    return s;
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  s.mean = std::clamp(mean, s.min, s.max);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

PathosScore median_consensus(std::span<const PathosScore> scores) {
  if (scores.empty()) throw InputError("median_consensus: no scores");
  std::vector<int> v;
  v.reserve(scores.size());
  for (const auto& s : scores) v.push_back(s.value());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return PathosScore(v[mid]);
  const double mean = 0.5 * (v[mid - 1] + v[mid]);
  return PathosScore(static_cast<int>(std::round(mean)));  // std::round: half away from zero
}

std::pair<std::vector<double>, std::vector<double>> pairwise_complete(
    std::span<const std::optional<double>> a, std::span<const std::optional<double>> b) {
  if (a.size() != b.size()) throw InputError("pairwise_complete: lengths differ");
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) {
      out.first.push_back(*a[i]);
      out.second.push_back(*b[i]);
    }
  }
  return out;
}

}  // namespace pathoscope::rankstats
