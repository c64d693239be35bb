#pragma once

// Acted-corpus audit: decode speaker/text/emotion from filenames, build the
// speaker x emotion matrix, find structural gaps and produce a quality report.
// Audio content is never read.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pathoscope/core.hpp"
#include "pathoscope/labelmap.hpp"

namespace pathoscope::emodb {

struct CharSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t end() const { return start + length; }
};

struct FilenameConvention {
  std::string name;
  CharSpan speaker;
  CharSpan text;
  CharSpan emotion_code;  // length 1
  std::map<char, CorpusEmotion> code_table;
  std::map<std::string, Gender> gender_table;

  // Spans non-empty and non-overlapping; emotion code is a single character.
  void validate() const;
  std::size_t min_stem_length() const;
};

// Standard EMO-DB layout: speaker chars 0-1, text 2-4, emotion letter 5
// (W/L/E/A/F/N/T); genders from the corpus speaker table.
FilenameConvention default_convention();

// convention.json: {name, speaker:{start,length}, text:{...},
// emotion_code:{...}, codes:{letter: category}, genders:{speaker: "F"|"M"}}
FilenameConvention parse_convention(std::string_view json_text);
FilenameConvention load_convention(const std::filesystem::path& path);

struct UtteranceMeta {
  std::string speaker_id;
  std::string text_code;
  CorpusEmotion emotion = CorpusEmotion::kNeutral;
  Gender gender = Gender::kFemale;
  std::string filename;

  friend bool operator==(const UtteranceMeta&, const UtteranceMeta&) = default;
};

// Directory and extension are stripped before the spans are applied.
// Throws ParseError whose field() is "stem", "emotion_code" or "speaker".
UtteranceMeta parse_filename(std::string_view name, const FilenameConvention& conv);

// Filename stem as used for annotation keys: "dir/03a01Wa.wav" -> "03a01Wa".
std::string filename_stem(std::string_view name);

// manifest.txt: one filename per line; blank lines and trailing CR ignored.
std::vector<std::string> parse_manifest_text(std::string_view text);
std::vector<std::string> read_manifest(const std::filesystem::path& path);

// Parses every entry; on failure rethrows the error of the lowest index.
// The OpenMP and serial versions return identical results.
std::vector<UtteranceMeta> parse_manifest(std::span<const std::string> names,
                                          const FilenameConvention& conv);
std::vector<UtteranceMeta> parse_manifest_serial(std::span<const std::string> names,
                                                 const FilenameConvention& conv);

SpeakerEmotionMatrix build_matrix(std::span<const UtteranceMeta> metas);
// Also seeds an all-zero row for every speaker the convention knows.
SpeakerEmotionMatrix build_matrix(std::span<const UtteranceMeta> metas,
                                  const FilenameConvention& conv);

struct Gap {
  std::string speaker_id;
  CorpusEmotion emotion = CorpusEmotion::kAnger;
  int count = 0;

  friend bool operator==(const Gap&, const Gap&) = default;
};

// Every cell with count <= threshold, sorted by (count, speaker, emotion).
// Throws InputError for a negative threshold.
std::vector<Gap> detect_gaps(const SpeakerEmotionMatrix& matrix, int threshold);

// Pairs each utterance with the annotation keyed by its filename stem.
// Utterances without an annotation are skipped; an annotation whose stem is
// not in the manifest is a JoinError.
std::vector<labelmap::LabeledAnnotation> label_annotations(
    std::span<const UtteranceMeta> metas,
    const std::map<std::string, SegmentAnnotation>& annotations_by_stem);

// A category the annotator gets wrong while being sure of itself.
struct ConfidenceFlag {
  CorpusEmotion category = CorpusEmotion::kAnger;
  double match_pct = 0.0;
  double avg_conf = 0.0;
};

inline constexpr double kFlagMaxMatchPct = 20.0;
inline constexpr double kFlagMinConfidence = 0.75;
inline constexpr int kDefaultGapThreshold = 1;

struct AuditReport {
  std::string convention;
  SpeakerEmotionMatrix matrix;
  std::map<CorpusEmotion, int> category_totals;
  CorpusEmotion most_frequent = CorpusEmotion::kAnger;
  CorpusEmotion least_frequent = CorpusEmotion::kAnger;
  std::optional<double> imbalance_ratio;  // max/min category total; absent if min is 0
  int gap_threshold = kDefaultGapThreshold;
  std::vector<Gap> gaps;
  std::optional<labelmap::MatchReport> match;
  std::vector<ConfidenceFlag> flags;  // match < 20 % while confidence > 0.75
};

// Throws InputError for an empty matrix.
AuditReport audit_report(const SpeakerEmotionMatrix& matrix,
                         const std::optional<labelmap::MatchReport>& match,
                         std::string convention_name, int gap_threshold = kDefaultGapThreshold);

nlohmann::json audit_report_json(const AuditReport& report);
std::string audit_report_text(const AuditReport& report);

}  // namespace pathoscope::emodb
