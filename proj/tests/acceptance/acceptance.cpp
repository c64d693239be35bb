// Acceptance gate. One line per criterion; exit status is non-zero if any fails.
// Runs on bundled data and committed fixtures only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pathoscope/annotator.hpp"
#include "pathoscope/bundled.hpp"
#include "pathoscope/circumplex.hpp"
#include "pathoscope/emodb_audit.hpp"
#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/labelmap.hpp"
#include "pathoscope/pipeline.hpp"
#include "pathoscope/rankstats.hpp"

namespace {

using namespace pathoscope;

const std::filesystem::path kFixtures = PATHOSCOPE_FIXTURE_DIR;

// Collects failed sub-checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  const std::vector<std::string>& failures() const { return failures_; }
  int total() const { return total_; }

 private:
  std::vector<std::string> failures_;
  int total_ = 0;
};

std::string num(double v) { return format_double(v); }

void projection_weights(Checks& c) {
  struct Pair {
    EmotionClass cls;
    double a, v;
  };
  const Pair published[] = {
      {EmotionClass::kAngry, 0.75, -0.75},    {EmotionClass::kDisgusted, 0.60, -0.80},
      {EmotionClass::kFearful, 0.80, -0.65},  {EmotionClass::kHappy, 0.65, 0.90},
      {EmotionClass::kNeutral, 0.00, 0.00},   {EmotionClass::kOther, 0.10, 0.00},
      {EmotionClass::kSad, -0.30, -0.85},     {EmotionClass::kSurprised, 0.70, 0.20},
  };
  const auto w = circumplex::default_weight_table();
  for (const auto& p : published) {
    const auto pt = circumplex::project(ClassProbabilities::one_hot(p.cls), w);
    c.expect(pt.arousal() == p.a && pt.valence() == p.v,
             std::string(to_string(p.cls)) + " -> (" + num(pt.arousal()) + ", " + num(pt.valence()) + ")");
  }
  std::mt19937_64 rng(1);
  std::gamma_distribution<double> g(0.7, 1.0);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    std::array<double, kNumEmotionClasses> a{}, b{};
    double sa = 0, sb = 0;
    for (auto& x : a) sa += (x = g(rng));
    for (auto& x : b) sb += (x = g(rng));
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    const double l = u(rng);
    std::array<double, kNumEmotionClasses> m{};
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = l * a[k] + (1 - l) * b[k];
    const auto pa = circumplex::project(ClassProbabilities(a), w);
    const auto pb = circumplex::project(ClassProbabilities(b), w);
    const auto pm = circumplex::project(ClassProbabilities(m), w);
    worst = std::max({worst, std::abs(pm.arousal() - (l * pa.arousal() + (1 - l) * pb.arousal())),
                      std::abs(pm.valence() - (l * pa.valence() + (1 - l) * pb.valence()))});
  }
  c.expect(worst <= 1e-12, "mixture linearity error " + num(worst));
}

void correlation_suite(Checks& c) {
  const auto suite = pipeline::correlation_suite(pipeline::make_table(bundled_appendix_b()));
  const auto& gv = *suite.get("gemV_pathos").result;
  const auto& ga = *suite.get("gemA_pathos").result;
  const auto& ev = *suite.get("e2vV_pathos").result;
  const auto& ea = *suite.get("e2vA_pathos").result;
  c.expect(gv.rho >= 0.564 && gv.rho <= 0.764, "gemV_pathos rho " + num(gv.rho) + " outside [0.564, 0.764]");
  c.expect(gv.p_value < 0.01, "gemV_pathos p " + num(gv.p_value));
  c.expect(ga.rho >= -0.635 && ga.rho <= -0.435, "gemA_pathos rho " + num(ga.rho) + " outside [-0.635, -0.435]");
  c.expect(ga.p_value < 0.01, "gemA_pathos p " + num(ga.p_value));
  c.expect(std::abs(ev.rho) <= 0.30, "e2vV_pathos |rho| " + num(std::abs(ev.rho)));
  c.expect(ev.p_value > 0.05, "e2vV_pathos p " + num(ev.p_value));
  c.expect(ea.p_value > 0.05, "e2vA_pathos p " + num(ea.p_value));
  for (const auto& cmp : suite.comparisons) c.expect(cmp.result && cmp.result->n == 41, cmp.name + " n");
}

// Brute force: enumerate ranks by counting, then textbook Pearson in long double.
std::optional<long double> oracle_rho(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<long double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double below = 0, tied = 0;
      for (std::size_t j = 0; j < n; ++j) {
        below += v[j] < v[i];
        tied += v[j] == v[i];
      }
      r[i] = below + (tied + 1) / 2;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

void spearman_oracle(Checks& c) {
  std::mt19937_64 rng(20260305);
  std::size_t cases = 0, mismatches = 0;
  long double worst = 0;
  for (std::size_t n = 3; n <= 8; ++n) {
    std::size_t space = 1;
    for (std::size_t i = 0; i < n; ++i) space *= 3;
    for (std::size_t code = 0; code < space; ++code) {
      std::vector<double> x(n);
      for (std::size_t i = 0, k = code; i < n; ++i, k /= 3) x[i] = static_cast<double>(k % 3);
      for (int draw = 0; draw < 2; ++draw) {
        std::vector<double> y(n);
        for (auto& v : y) v = static_cast<double>(rng() % 3);
        const auto expected = oracle_rho(x, y);
        if (!expected) continue;
        const long double err = std::abs(rankstats::spearman(x, y).rho - *expected);
        worst = std::max(worst, err);
        mismatches += err > 1e-12L;
        ++cases;
      }
    }
  }
  c.expect(cases >= 10000, "only " + std::to_string(cases) + " non-degenerate cases");
  c.expect(mismatches == 0, std::to_string(mismatches) + " cases off by more than 1e-12 (worst " +
                                num(static_cast<double>(worst)) + ")");
}

void speaker_matrix(Checks& c) {
  const auto metas = emodb::parse_manifest(emodb::read_manifest(kFixtures / "emodb_manifest.txt"),
                                           emodb::default_convention());
  const auto m = emodb::build_matrix(metas);
  const auto expected = bundled_table6_counts();
  for (const auto& [speaker, row] : expected.rows()) {
    for (auto e : kCorpusEmotions) {
      c.expect(m.count(speaker, e) == row.counts[index_of(e)],
               "cell (" + speaker + ", " + std::string(to_string(e)) + ") = " +
                   std::to_string(m.count(speaker, e)));
    }
    c.expect(m.has_speaker(speaker) && m.gender(speaker) == row.gender, "gender of " + speaker);
  }
  c.expect(m.rows().size() == expected.rows().size(), "speaker count");
  c.expect(m.count("16", CorpusEmotion::kDisgust) == 11, "(16, Disgust) != 11");
  c.expect(m.grand_total() == 535, "grand total " + std::to_string(m.grand_total()));
  const auto gaps = emodb::detect_gaps(m, 0);
  c.expect(gaps == std::vector<emodb::Gap>{{"08", CorpusEmotion::kDisgust, 0}},
           "gaps at threshold 0: " + std::to_string(gaps.size()) + " cells");
}

void label_match_rates(Checks& c) {
  const auto metas = emodb::parse_manifest(emodb::read_manifest(kFixtures / "emodb_manifest.txt"),
                                           emodb::default_convention());
  const auto parsed =
      annotator::parse_response(read_text_file(kFixtures / "emodb_table2_annotations.json"));
  c.expect(parsed.rejected.empty(), "fixture annotations rejected");
  const auto r = labelmap::match_report(emodb::label_annotations(metas, parsed.response.annotations),
                                        labelmap::default_mapping_table());
  auto near = [&](const std::string& what, double got, double want) {
    c.expect(std::abs(got - want) <= 0.05, what + " " + num(got) + " vs " + num(want));
  };
  near("Neutral", r.per_category.at(CorpusEmotion::kNeutral).match_pct, 65.8);
  near("Boredom", r.per_category.at(CorpusEmotion::kBoredom).match_pct, 12.3);
  near("Disgust", r.per_category.at(CorpusEmotion::kDisgust).match_pct, 0.0);
  near("Total", r.total_match_pct, 30.1);
  c.expect(r.total_n == 535, "n = " + std::to_string(r.total_n));
}

void timeseries_export(Checks& c) {
  const auto series = bundled_figure1_series();
  const auto frame = pipeline::frame_from_figure1(series);
  const std::string csv = pipeline::timeseries_csv(frame);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  c.expect(line == "index,gem_valence,e2v_arousal,pathos", "header '" + line + "'");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() < 4) cells.resize(4);
    const std::size_t i = rows++;
    if (i >= series.size()) continue;
    c.expect(cells[0] == std::to_string(i), "index column at row " + std::to_string(i));
    c.expect(std::stod(cells[1]) == *series.gem_valence[i], "gem_valence at " + std::to_string(i));
    if (i == 42) c.expect(cells[3] == "1", "pathos at 42 is '" + cells[3] + "'");
  }
  c.expect(rows == 51, std::to_string(rows) + " data rows");
  const std::string svg1 = pipeline::timeseries_svg(frame);
  const std::string svg2 = pipeline::timeseries_svg(pipeline::frame_from_figure1(bundled_figure1_series()));
  c.expect(!svg1.empty() && svg1 == svg2, "SVG differs between runs");
}

void descriptive_sanity(Checks& c) {
  Diagnostics d;
  const auto stats = pipeline::descriptive_suite(pipeline::make_table(bundled_appendix_b()), d);
  std::map<pipeline::Channel, rankstats::DescriptiveStats> by;
  for (const auto& [ch, s] : stats) by[ch] = s;
  c.expect(by.size() == 5, "channels reported: " + std::to_string(by.size()));
  c.expect(by[pipeline::Channel::kE2vArousal].max == 0.75,
           "e2v arousal max " + num(by[pipeline::Channel::kE2vArousal].max));
  c.expect(by[pipeline::Channel::kPathos].min == -2, "pathos min " + num(by[pipeline::Channel::kPathos].min));
  // Published mean signs: + - + + -
  const std::pair<pipeline::Channel, int> signs[] = {
      {pipeline::Channel::kGemArousal, 1},  {pipeline::Channel::kGemValence, -1},
      {pipeline::Channel::kE2vArousal, 1},  {pipeline::Channel::kE2vValence, 1},
      {pipeline::Channel::kPathos, -1}};
  for (const auto& [ch, sign] : signs) {
    c.expect(by[ch].mean * sign > 0,
             std::string(pipeline::channel_name(ch)) + " mean " + num(by[ch].mean));
  }
}

void degenerate_statistics(Checks& c) {
  auto raises_degenerate = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const DegenerateStatisticsError& e) {
      return e.exit_code() == ExitCode::kDegenerate;
    } catch (...) {
      return false;
    }
    return false;
  };
  const std::vector<double> flat{1, 1, 1, 1, 1}, ramp{1, 2, 3, 4, 5};
  c.expect(raises_degenerate([&] { rankstats::spearman(flat, ramp); }), "constant x");
  c.expect(raises_degenerate([&] { rankstats::spearman(ramp, flat); }), "constant y");
  c.expect(raises_degenerate([&] {
             rankstats::spearman(std::vector<double>{1, 2}, std::vector<double>{2, 1});
           }),
           "n = 2");
  c.expect(raises_degenerate([&] {
             rankstats::spearman(flat, ramp, rankstats::PValueMethod::kPermutation);
           }),
           "constant x, permutation");
  auto table = pipeline::make_table(bundled_appendix_b());
  table.rows.resize(2);
  const auto suite = pipeline::correlation_suite(table);
  bool all_unavailable = true;
  for (const auto& cmp : suite.comparisons) all_unavailable &= !cmp.result && !cmp.unavailable_reason.empty();
  c.expect(all_unavailable, "two-row suite still reports results");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Checks&);
  };
  const Criterion criteria[] = {
      {"projection weights and mixture linearity", projection_weights},
      {"correlation suite on bundled segments", correlation_suite},
      {"spearman against enumerated-rank oracle", spearman_oracle},
      {"speaker x emotion matrix from manifest", speaker_matrix},
      {"open-ended label match rates", label_match_rates},
      {"time-series export", timeseries_export},
      {"descriptive extrema and mean signs", descriptive_sanity},
      {"degenerate statistics", degenerate_statistics},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = error.empty() && checks.failures().empty();
    failed += !ok;
    std::printf("[%s] %s (%d checks, %.0f ms)", ok ? "PASS" : "FAIL", cr.name, checks.total(), ms);
    if (!error.empty()) std::printf(" - exception: %s", error.c_str());
    for (const auto& f : checks.failures()) std::printf(" - %s", f.c_str());
    std::printf("\n");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
