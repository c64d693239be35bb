#pragma once

// End-to-end analysis over the joined segment table: ingest, relevance
// filtering, correlation and descriptive suites, rhetorical distribution and
// time-series export.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathoscope/circumplex.hpp"
#include "pathoscope/core.hpp"
#include "pathoscope/diagnostics.hpp"
#include "pathoscope/rankstats.hpp"

namespace pathoscope::pipeline {

// Rows ordered by start time; segment ids unique.
struct AnalysisTable {
  std::vector<SegmentRecord> rows;
  std::map<std::string, std::string> provenance;  // channel -> source descriptor
};

// Validates ids (InputError on duplicates) and sorts rows by start_s.
AnalysisTable make_table(std::vector<SegmentRecord> rows,
                         std::map<std::string, std::string> provenance = {});

struct IngestSources {
  std::string segments;                      // segments.json text
  std::optional<std::string> e2v_probs;      // e2v_probs.json text
  std::optional<std::string> llm_annotations;  // response JSON text
  std::optional<std::string> trust_scores;   // trust_scores.json text
};

struct IngestPaths {
  std::filesystem::path segments;
  std::optional<std::filesystem::path> e2v_probs;
  std::optional<std::filesystem::path> llm_annotations;
  std::optional<std::filesystem::path> trust_scores;
};

// Left join of the channel documents onto the segments. Channel values replace
// whatever the segment file carried; e2v points are projected from the
// probabilities. An id present in a channel but not in the segments is a
// JoinError. Annotations that fail validation are dropped with a warning.
AnalysisTable ingest_documents(const IngestSources& sources,
                               const circumplex::WeightTable& weights,
                               Diagnostics& diagnostics);
AnalysisTable ingest(const IngestPaths& paths, const circumplex::WeightTable& weights,
                     Diagnostics& diagnostics);

// Drops rows with relevant == false; retained rows are untouched.
AnalysisTable apply_relevance_filter(const AnalysisTable& table, Diagnostics& diagnostics);

enum class Channel { kGemArousal, kGemValence, kE2vArousal, kE2vValence, kPathos };

inline constexpr std::array<Channel, 5> kChannels{Channel::kGemArousal, Channel::kGemValence,
                                                  Channel::kE2vArousal, Channel::kE2vValence,
                                                  Channel::kPathos};

std::string_view channel_name(Channel c);  // gem_arousal, gem_valence, ...
std::optional<Channel> channel_from_name(std::string_view name);

std::vector<std::optional<double>> channel_values(const AnalysisTable& table, Channel c);

struct Comparison {
  std::string name;
  Channel x;
  Channel y;
  std::size_t n_pairs = 0;
  std::optional<rankstats::CorrelationResult> result;  // absent when unavailable
  std::string unavailable_reason;
};

struct CorrelationSuiteResult {
  // gemV_pathos, gemA_pathos, e2vV_pathos, e2vA_pathos, e2vA_gemA, e2vV_gemV
  std::vector<Comparison> comparisons;

  const Comparison& get(std::string_view name) const;  // InputError for unknown names
};

// Pairwise-complete Spearman for the six comparisons. A comparison with too
// few pairs or a constant series is marked unavailable; the rest still run.
CorrelationSuiteResult correlation_suite(
    const AnalysisTable& table,
    rankstats::PValueMethod method = rankstats::PValueMethod::kTApprox,
    const rankstats::PermutationOptions& options = {}, Diagnostics* diagnostics = nullptr);

// One entry per channel with at least one value, in kChannels order; empty
// channels are skipped with a warning.
std::vector<std::pair<Channel, rankstats::DescriptiveStats>> descriptive_suite(
    const AnalysisTable& table, Diagnostics& diagnostics);

struct RhetoricCount {
  std::string label;
  std::size_t n = 0;
  double pct = 0.0;  // of annotated rows
};

// Descending by n, ties by label.
std::vector<RhetoricCount> rhetoric_distribution(const AnalysisTable& table);

// Index-aligned channels for plotting/export.
struct TimeSeriesFrame {
  std::vector<std::string> channels;
  std::vector<std::vector<std::optional<double>>> columns;
  std::size_t length = 0;
};

// All five channels, index = row position.
TimeSeriesFrame frame_from_table(const AnalysisTable& table);
// gem_valence, e2v_arousal, pathos.
TimeSeriesFrame frame_from_figure1(const Figure1Series& series);
// Keeps the named channels in the given order; InputError on unknown names.
TimeSeriesFrame select_channels(const TimeSeriesFrame& frame, std::span<const std::string> names);

// index,<channel>... ; absent values are empty cells.
std::string timeseries_csv(const TimeSeriesFrame& frame);
// Lines for continuous channels, point markers for pathos, y axis [-1.2, 1.2].
std::string timeseries_svg(const TimeSeriesFrame& frame);

std::string correlations_csv(const CorrelationSuiteResult& suite);
std::string descriptives_csv(const std::vector<std::pair<Channel, rankstats::DescriptiveStats>>& stats);
std::string rhetoric_csv(const std::vector<RhetoricCount>& counts);

}  // namespace pathoscope::pipeline
