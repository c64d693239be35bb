// Serial reference vs OpenMP kernels. Usage: bench_kernels [permutations] [manifest_copies]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pathoscope/emodb_audit.hpp"
#include "pathoscope/kernels.hpp"
#include "pathoscope/rankstats.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-24s serial %9.4f s   openmp %9.4f s   speedup %5.2fx   %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pathoscope;
  const std::size_t permutations = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
  const std::size_t copies = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 400;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  // Rank vectors of a weakly correlated n = 41 pair with ties.
  std::vector<double> x(41), y(41);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i % 7);
    y[i] = static_cast<double>((i * 13) % 5) + 0.1 * static_cast<double>(i % 3);
  }
  auto rx = rankstats::average_ranks(x), ry = rankstats::average_ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    rx[i] -= mx;
    ry[i] -= my;
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  const kernels::PermutationProblem problem{rx, ry, std::sqrt(sxx * syy), std::abs(sxy) / std::sqrt(sxx * syy)};
  std::size_t hits_serial = 0, hits_parallel = 0;
  const double ts = seconds([&] { hits_serial = kernels::count_extreme_permutations_serial(problem, permutations, 7); });
  const double tp = seconds([&] { hits_parallel = kernels::count_extreme_permutations(problem, permutations, 7); });
  report("permutation count", ts, tp, hits_serial == hits_parallel);

  const auto conv = emodb::default_convention();
  const char codes[] = "WLEAFNT";
  const char* speakers[] = {"03", "08", "09", "10", "11", "12", "13", "14", "15", "16"};
  std::vector<std::string> names;
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i = 0; i < 535; ++i) {
      names.push_back(std::string("corpus/wav/") + speakers[i % 10] + "a0" + std::to_string(i % 10) +
                      codes[i % 7] + "a.wav");
    }
  }
  std::vector<emodb::UtteranceMeta> a, b;
  const double ms = seconds([&] { a = emodb::parse_manifest_serial(names, conv); });
  const double mp = seconds([&] { b = emodb::parse_manifest(names, conv); });
  report("manifest parse", ms, mp, a == b);
  return 0;
}
