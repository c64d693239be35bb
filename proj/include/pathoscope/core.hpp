#pragma once

// Shared domain types. All of them validate on construction and are plain
// values afterwards.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathoscope {

// ---------------------------------------------------------------------------
// Acoustic emotion classes (output space of the SER model).

enum class EmotionClass : std::uint8_t {
  kAngry,
  kDisgusted,
  kFearful,
  kHappy,
  kNeutral,
  kOther,
  kSad,
  kSurprised,
};

inline constexpr std::size_t kNumEmotionClasses = 8;

inline constexpr std::array<EmotionClass, kNumEmotionClasses> kEmotionClasses{
    EmotionClass::kAngry,   EmotionClass::kDisgusted, EmotionClass::kFearful,
    EmotionClass::kHappy,   EmotionClass::kNeutral,   EmotionClass::kOther,
    EmotionClass::kSad,     EmotionClass::kSurprised,
};

constexpr std::size_t index_of(EmotionClass c) { return static_cast<std::size_t>(c); }

std::string_view to_string(EmotionClass c);
std::optional<EmotionClass> emotion_class_from_string(std::string_view name);

// Probability distribution over the eight classes.
//
// Inputs whose sum is within kRenormalizeTolerance of 1 are divided by the
// sum; anything further off is rejected with SchemaError.
class ClassProbabilities {
 public:
  static constexpr double kRenormalizeTolerance = 1e-3;

  explicit ClassProbabilities(const std::array<double, kNumEmotionClasses>& probs);

  // Keys are the lowercase class names; every class exactly once.
  static ClassProbabilities from_map(const std::map<std::string, double>& by_name);
  static ClassProbabilities one_hot(EmotionClass c);

  double operator[](EmotionClass c) const { return probs_[index_of(c)]; }
  const std::array<double, kNumEmotionClasses>& values() const { return probs_; }

  friend bool operator==(const ClassProbabilities&, const ClassProbabilities&) = default;

 private:
  std::array<double, kNumEmotionClasses> probs_{};
};

// Continuous (arousal, valence) in [-1, +1]^2.
class CircumplexPoint {
 public:
  CircumplexPoint(double arousal, double valence);

  double arousal() const { return arousal_; }
  double valence() const { return valence_; }

  friend bool operator==(const CircumplexPoint&, const CircumplexPoint&) = default;

 private:
  double arousal_;
  double valence_;
};

// TRUST-Pathos: -2 (divisive) .. +2 (unifying).
class PathosScore {
 public:
  explicit PathosScore(int value);

  int value() const { return value_; }

  friend auto operator<=>(const PathosScore&, const PathosScore&) = default;

 private:
  int value_;
};

// One open-ended LLM annotation of a segment.
//
// `confidence` is optional because published segment tables omit it; live
// responses always carry it.
struct SegmentAnnotation {
  std::string primary_emotion;
  std::optional<std::string> secondary_emotion;
  double arousal = 0.0;
  double valence = 0.0;
  std::string rhetorical_function;
  std::optional<double> confidence;

  // Throws SchemaError naming the offending field.
  void validate() const;

  friend bool operator==(const SegmentAnnotation&, const SegmentAnnotation&) = default;
};

struct SegmentRecord {
  std::string segment_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string transcript;
  std::optional<ClassProbabilities> e2v_probs;
  std::optional<CircumplexPoint> e2v_point;
  std::optional<SegmentAnnotation> llm_annotation;
  std::optional<PathosScore> pathos;
  bool relevant = true;

  // end_s > start_s >= 0, non-empty id, irrelevant segments carry no pathos.
  void validate() const;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

// ---------------------------------------------------------------------------
// Acted-corpus categories.

enum class CorpusEmotion : std::uint8_t {
  kAnger,
  kBoredom,
  kDisgust,
  kFear,
  kHappiness,
  kNeutral,
  kSadness,
};

inline constexpr std::size_t kNumCorpusEmotions = 7;

inline constexpr std::array<CorpusEmotion, kNumCorpusEmotions> kCorpusEmotions{
    CorpusEmotion::kAnger,     CorpusEmotion::kBoredom, CorpusEmotion::kDisgust,
    CorpusEmotion::kFear,      CorpusEmotion::kHappiness, CorpusEmotion::kNeutral,
    CorpusEmotion::kSadness,
};

constexpr std::size_t index_of(CorpusEmotion c) { return static_cast<std::size_t>(c); }

std::string_view to_string(CorpusEmotion c);
std::optional<CorpusEmotion> corpus_emotion_from_string(std::string_view name);

enum class Gender : std::uint8_t { kFemale, kMale };

std::string_view to_string(Gender g);  // "F" / "M"
std::optional<Gender> gender_from_string(std::string_view code);

// Utterance counts per speaker x category.
class SpeakerEmotionMatrix {
 public:
  using Row = std::array<int, kNumCorpusEmotions>;

  struct SpeakerRow {
    Gender gender = Gender::kFemale;
    Row counts{};
    friend bool operator==(const SpeakerRow&, const SpeakerRow&) = default;
  };

  SpeakerEmotionMatrix() = default;
  // Throws SchemaError on a negative count.
  explicit SpeakerEmotionMatrix(std::map<std::string, SpeakerRow> rows);

  const std::map<std::string, SpeakerRow>& rows() const { return rows_; }
  std::vector<std::string> speakers() const;
  bool has_speaker(const std::string& speaker) const { return rows_.contains(speaker); }
  Gender gender(const std::string& speaker) const;

  // Unknown speakers count as zero.
  int count(const std::string& speaker, CorpusEmotion e) const;
  int row_total(const std::string& speaker) const;
  int column_total(CorpusEmotion e) const;
  int grand_total() const;

  friend bool operator==(const SpeakerEmotionMatrix&, const SpeakerEmotionMatrix&) = default;

 private:
  std::map<std::string, SpeakerRow> rows_;
};

// Three index-aligned series of the temporal figure. Absent entries are
// indices without a plotted value.
struct Figure1Series {
  std::vector<std::optional<double>> gem_valence;
  std::vector<std::optional<double>> e2v_arousal;
  std::vector<std::optional<double>> pathos;

  std::size_t size() const { return gem_valence.size(); }
};

}  // namespace pathoscope
