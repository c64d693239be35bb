#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "pathoscope/bundled.hpp"
#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/pipeline.hpp"
#include "pathoscope/resources.hpp"

namespace {

using namespace pathoscope;
using namespace pathoscope::pipeline;

const std::filesystem::path kFixtures = PATHOSCOPE_FIXTURE_DIR;

IngestSources speech_sources() {
  IngestSources s;
  s.segments = read_text_file(kFixtures / "banaszak_segments51.json");
  s.llm_annotations = read_text_file(kFixtures / "banaszak_llm41.json");
  s.trust_scores = read_text_file(kFixtures / "banaszak_trust51.json");
  return s;
}

AnalysisTable bundled_table() { return make_table(bundled_appendix_b()); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Ingest, BundledSegmentsArriveFullyPopulated) {
  Diagnostics d;
  IngestSources s;
  s.segments = std::string(resources::appendix_b_json());
  const auto t = ingest_documents(s, circumplex::default_weight_table(), d);
  ASSERT_EQ(t.rows.size(), 41u);
  for (const auto& r : t.rows) {
    EXPECT_TRUE(r.e2v_point && r.llm_annotation && r.pathos) << r.segment_id;
  }
  EXPECT_TRUE(d.entries().empty());
}

TEST(Ingest, SegmentsOnlyLeavesMeasurementsAbsent) {
  Diagnostics d;
  IngestSources s;
  s.segments = read_text_file(kFixtures / "banaszak_segments51.json");
  const auto t = ingest_documents(s, circumplex::default_weight_table(), d);
  ASSERT_EQ(t.rows.size(), 51u);
  for (const auto& r : t.rows) {
    EXPECT_FALSE(r.e2v_point || r.llm_annotation || r.pathos || r.e2v_probs);
  }
}

TEST(Ingest, JoinAndFilter) {
  Diagnostics d;
  const auto t = ingest_documents(speech_sources(), circumplex::default_weight_table(), d);
  ASSERT_EQ(t.rows.size(), 51u);
  const auto f = apply_relevance_filter(t, d);
  ASSERT_EQ(f.rows.size(), 41u);
  EXPECT_TRUE(d.has(warning_code::kFilteredRows));
  for (const auto& r : f.rows) {
    EXPECT_TRUE(r.llm_annotation.has_value()) << r.segment_id;
    EXPECT_TRUE(r.pathos.has_value()) << r.segment_id;
  }
}

TEST(Ingest, ProjectsE2vProbabilities) {
  Diagnostics d;
  auto s = speech_sources();
  s.e2v_probs = read_text_file(kFixtures / "e2v_probs_sample.json");
  const auto t = ingest_documents(s, circumplex::default_weight_table(), d);
  const auto doc = parse_e2v_probs(*s.e2v_probs);
  std::size_t projected = 0;
  for (const auto& r : t.rows) {
    if (!r.e2v_probs) continue;
    ++projected;
    EXPECT_EQ(*r.e2v_point, circumplex::project(*r.e2v_probs, circumplex::default_weight_table()));
    EXPECT_EQ(*r.e2v_probs, doc.probs.at(r.segment_id));
  }
  EXPECT_EQ(projected, doc.probs.size());
  EXPECT_NE(t.provenance.at("e2v").find("emotion2vec_plus_large"), std::string::npos);
}

TEST(Ingest, UnknownIdInAnyChannelIsJoinError) {
  const auto weights = circumplex::default_weight_table();
  Diagnostics d;
  auto s = speech_sources();
  s.trust_scores = R"({"s9999": {"pathos": 0, "relevant": true}})";
  try {
    ingest_documents(s, weights, d);
    FAIL() << "expected JoinError";
  } catch (const JoinError& e) {
    EXPECT_NE(std::string(e.what()).find("s9999"), std::string::npos);
  }
  s = speech_sources();
  s.llm_annotations = R"({"annotations": {"s9999": {"primary_emotion": "x", "secondary_emotion": null,
      "arousal": 0, "valence": 0, "rhetorical_function": "x", "confidence": 0.5}}})";
  EXPECT_THROW(ingest_documents(s, weights, d), JoinError);
  s = speech_sources();
  Json probs = Json::object();
  for (auto c : kEmotionClasses) probs[std::string(to_string(c))] = 0.125;
  s.e2v_probs = Json{{"s9999", probs}}.dump();
  EXPECT_THROW(ingest_documents(s, weights, d), JoinError);
}

TEST(Ingest, DegradedAnnotationIsDroppedWithWarning) {
  Diagnostics d;
  auto s = speech_sources();
  Json llm = Json::parse(*s.llm_annotations);
  llm["annotations"]["s0042"]["valence"] = 1.7;
  s.llm_annotations = llm.dump();
  const auto t = ingest_documents(s, circumplex::default_weight_table(), d);
  EXPECT_TRUE(d.has(warning_code::kDegradedAnnotation));
  for (const auto& r : t.rows) {
    if (r.segment_id == "s0042") EXPECT_FALSE(r.llm_annotation.has_value());
  }
}

TEST(Ingest, PathsRecordProvenance) {
  Diagnostics d;
  IngestPaths p{kFixtures / "banaszak_segments51.json", kFixtures / "e2v_probs_sample.json",
                kFixtures / "banaszak_llm41.json", kFixtures / "banaszak_trust51.json"};
  const auto t = ingest(p, circumplex::default_weight_table(), d);
  EXPECT_EQ(t.provenance.at("trust"), p.trust_scores->string());
  EXPECT_NE(t.provenance.at("e2v").find("e2v_probs_sample.json"), std::string::npos);
  EXPECT_THROW(ingest(IngestPaths{kFixtures / "nope.json"}, circumplex::default_weight_table(), d),
               InputError);
}

TEST(MakeTable, SortsAndRejectsDuplicates) {
  auto rows = bundled_appendix_b();
  std::reverse(rows.begin(), rows.end());
  const auto t = make_table(rows);
  EXPECT_TRUE(std::is_sorted(t.rows.begin(), t.rows.end(),
                             [](const auto& a, const auto& b) { return a.start_s < b.start_s; }));
  rows.push_back(rows.front());
  EXPECT_THROW(make_table(rows), InputError);
}

TEST(RelevanceFilter, IdentityAndEmpty) {
  Diagnostics d;
  const auto t = bundled_table();
  EXPECT_EQ(apply_relevance_filter(t, d).rows, t.rows);
  EXPECT_FALSE(d.has(warning_code::kFilteredRows));
  auto none = t;
  for (auto& r : none.rows) {
    r.relevant = false;
    r.pathos.reset();
  }
  EXPECT_TRUE(apply_relevance_filter(none, d).rows.empty());
  EXPECT_TRUE(d.has(warning_code::kEmptyTable));
}

TEST(RelevanceFilterProperty, RetainedRowsUntouched) {
  Diagnostics d;
  const auto t = ingest_documents(speech_sources(), circumplex::default_weight_table(), d);
  const auto f = apply_relevance_filter(t, d);
  std::size_t j = 0;
  for (const auto& r : t.rows) {
    if (!r.relevant) continue;
    ASSERT_LT(j, f.rows.size());
    EXPECT_EQ(f.rows[j++], r);
  }
  EXPECT_EQ(j, f.rows.size());
}

TEST(CorrelationSuite, BundledNamesAndCounts) {
  const auto s = correlation_suite(bundled_table());
  ASSERT_EQ(s.comparisons.size(), 6u);
  for (const char* name :
       {"gemV_pathos", "gemA_pathos", "e2vV_pathos", "e2vA_pathos", "e2vA_gemA", "e2vV_gemV"}) {
    const auto& c = s.get(name);
    ASSERT_TRUE(c.result.has_value()) << name;
    EXPECT_EQ(c.result->n, 41u);
    EXPECT_EQ(c.n_pairs, 41u);
  }
  EXPECT_THROW(s.get("gaze"), InputError);
  EXPECT_GT(s.get("gemV_pathos").result->rho, 0);
  EXPECT_LT(s.get("gemV_pathos").result->p_value, 0.001);
  EXPECT_LE(std::abs(s.get("e2vV_pathos").result->rho), 0.30);
  EXPECT_GT(s.get("e2vV_pathos").result->p_value, 0.05);
}

TEST(CorrelationSuite, DuplicateChannelGivesUnitRho) {
  auto t = bundled_table();
  for (auto& r : t.rows) r.llm_annotation->valence = r.pathos->value() / 2.0;
  EXPECT_DOUBLE_EQ(correlation_suite(t).get("gemV_pathos").result->rho, 1.0);
}

TEST(CorrelationSuite, MissingChannelMarksUnavailable) {
  Diagnostics d;
  const auto t = apply_relevance_filter(
      ingest_documents(speech_sources(), circumplex::default_weight_table(), d), d);
  const auto s = correlation_suite(t, rankstats::PValueMethod::kTApprox, {}, &d);
  EXPECT_TRUE(s.get("gemV_pathos").result.has_value());
  EXPECT_FALSE(s.get("e2vV_pathos").result.has_value());
  EXPECT_EQ(s.get("e2vV_pathos").n_pairs, 0u);
  EXPECT_FALSE(s.get("e2vV_pathos").unavailable_reason.empty());
  EXPECT_TRUE(d.has(warning_code::kComparisonUnavailable));
  const auto csv = lines(correlations_csv(s));
  EXPECT_EQ(csv[3], "e2vV_pathos,,,0");
}

TEST(CorrelationSuiteProperty, RowOrderInvariant) {
  auto rows = bundled_appendix_b();
  const auto reference = correlations_csv(correlation_suite(make_table(rows)));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(rows.begin(), rows.end(), rng);
    Diagnostics d;
    IngestSources s;
    s.segments = serialize_segments(rows);
    EXPECT_EQ(correlations_csv(correlation_suite(ingest_documents(s, circumplex::default_weight_table(), d))),
              reference);
  }
}

TEST(CorrelationSuiteProperty, PreRankedChannelsGiveSameRho) {
  const auto t = bundled_table();
  const auto s = correlation_suite(t);
  for (const auto& c : s.comparisons) {
    const auto [x, y] = rankstats::pairwise_complete(channel_values(t, c.x), channel_values(t, c.y));
    const auto r = rankstats::spearman(rankstats::average_ranks(x), rankstats::average_ranks(y));
    EXPECT_NEAR(r.rho, c.result->rho, 1e-12) << c.name;
  }
}

TEST(DescriptiveSuite, BundledExtremaAndSigns) {
  Diagnostics d;
  const auto stats = descriptive_suite(bundled_table(), d);
  ASSERT_EQ(stats.size(), 5u);
  std::map<Channel, rankstats::DescriptiveStats> by;
  for (const auto& [c, s] : stats) by[c] = s;
  EXPECT_EQ(by[Channel::kE2vArousal].max, 0.75);
  EXPECT_EQ(by[Channel::kPathos].min, -2);
  EXPECT_GT(by[Channel::kGemArousal].mean, 0);
  EXPECT_LT(by[Channel::kGemValence].mean, 0);
  EXPECT_GT(by[Channel::kE2vArousal].mean, 0);
  EXPECT_GT(by[Channel::kE2vValence].mean, 0);
  EXPECT_LT(by[Channel::kPathos].mean, 0);
  EXPECT_DOUBLE_EQ(by[Channel::kPathos].mean, -19.0 / 41.0);
}

TEST(DescriptiveSuite, SingleRowAndEmptyChannel) {
  Diagnostics d;
  auto t = bundled_table();
  t.rows.resize(1);
  t.rows[0].e2v_point.reset();
  const auto stats = descriptive_suite(t, d);
  EXPECT_EQ(stats.size(), 3u);
  for (const auto& [c, s] : stats) EXPECT_EQ(s.sd, 0.0);
  EXPECT_TRUE(d.has(warning_code::kEmptyChannel));
}

TEST(Rhetoric, BundledDistribution) {
  const auto r = rhetoric_distribution(bundled_table());
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].label, "Kritik");
  EXPECT_EQ(r[0].n, 14u);
  EXPECT_EQ(r[1].label, "Sarkasmus");
  std::size_t total = 0;
  double pct = 0;
  for (const auto& c : r) {
    total += c.n;
    pct += c.pct;
  }
  EXPECT_EQ(total, 41u);
  EXPECT_NEAR(pct, 100.0, 1e-9);
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_TRUE(r[i - 1].n > r[i].n || (r[i - 1].n == r[i].n && r[i - 1].label < r[i].label));
  }
}

TEST(Rhetoric, EmptyAndUniform) {
  auto t = bundled_table();
  for (auto& r : t.rows) r.llm_annotation->rhetorical_function = "Appell";
  const auto one = rhetoric_distribution(t);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].pct, 100.0);
  for (auto& r : t.rows) r.llm_annotation.reset();
  EXPECT_TRUE(rhetoric_distribution(t).empty());
}

TEST(Timeseries, FigureCsv) {
  const auto f = bundled_figure1_series();
  const auto csv = lines(timeseries_csv(frame_from_figure1(f)));
  ASSERT_EQ(csv.size(), 52u);
  EXPECT_EQ(csv[0], "index,gem_valence,e2v_arousal,pathos");
  EXPECT_EQ(csv[1], "0,0.1,0.12,");
  EXPECT_EQ(csv[43].substr(csv[43].rfind(',')), ",1");
}

TEST(Timeseries, SelectChannels) {
  const auto frame = frame_from_figure1(bundled_figure1_series());
  const std::vector<std::string> pick{"pathos", "gem_valence"};
  const auto s = select_channels(frame, pick);
  EXPECT_EQ(s.channels, pick);
  EXPECT_EQ(s.columns[0][42], 1.0);
  const std::vector<std::string> bad{"gaze"};
  EXPECT_THROW(select_channels(frame, bad), InputError);
}

TEST(Timeseries, TableFrameHasAllChannels) {
  const auto frame = frame_from_table(bundled_table());
  EXPECT_EQ(frame.channels, (std::vector<std::string>{"gem_arousal", "gem_valence", "e2v_arousal",
                                                      "e2v_valence", "pathos"}));
  EXPECT_EQ(frame.length, 41u);
}

TEST(Timeseries, SvgStructure) {
  const auto svg = timeseries_svg(frame_from_figure1(bundled_figure1_series()));
  EXPECT_EQ(svg, timeseries_svg(frame_from_figure1(bundled_figure1_series())));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t circles = 0, polylines = 0;
  for (auto p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++polylines;
  EXPECT_EQ(circles, 46u);
  EXPECT_EQ(polylines, 2u);
}

TEST(OutputDeterminism, IdenticalInputsGiveIdenticalCsv) {
  auto run = [] {
    Diagnostics d;
    auto s = speech_sources();
    s.e2v_probs = read_text_file(kFixtures / "e2v_probs_sample.json");
    const auto t = apply_relevance_filter(ingest_documents(s, circumplex::default_weight_table(), d), d);
    return correlations_csv(correlation_suite(t)) + descriptives_csv(descriptive_suite(t, d)) +
           rhetoric_csv(rhetoric_distribution(t)) + timeseries_csv(frame_from_table(t));
  };
  EXPECT_EQ(run(), run());
}

TEST(CsvWriters, Headers) {
  Diagnostics d;
  const auto t = bundled_table();
  EXPECT_EQ(lines(correlations_csv(correlation_suite(t)))[0], "comparison,rho,p,n");
  EXPECT_EQ(lines(descriptives_csv(descriptive_suite(t, d)))[0], "channel,n,mean,sd,min,max");
  EXPECT_EQ(lines(rhetoric_csv(rhetoric_distribution(t)))[0], "rhetorical_function,n,pct");
  RhetoricCount quoted{"a,\"b\"", 1, 100};
  EXPECT_EQ(lines(rhetoric_csv({quoted}))[1], "\"a,\"\"b\"\"\",1,100");
}

}  // namespace
