#include "pathoscope/core.hpp"

#include <cmath>
#include <numeric>

#include "pathoscope/error.hpp"

namespace pathoscope {
namespace {

constexpr std::array<std::string_view, kNumEmotionClasses> kEmotionClassNames{
    "angry", "disgusted", "fearful", "happy", "neutral", "other", "sad", "surprised"};

constexpr std::array<std::string_view, kNumCorpusEmotions> kCorpusEmotionNames{
    "Anger", "Boredom", "Disgust", "Fear", "Happiness", "Neutral", "Sadness"};

// Slack for values produced by sums of in-range terms.
constexpr double kBoundSlack = 1e-12;

bool within(double v, double lo, double hi) {
  return std::isfinite(v) && v >= lo - kBoundSlack && v <= hi + kBoundSlack;
}

std::string num(double v) { return std::to_string(v); }

}  // namespace

std::string_view to_string(EmotionClass c) { return kEmotionClassNames[index_of(c)]; }

std::optional<EmotionClass> emotion_class_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNumEmotionClasses; ++i) {
    if (kEmotionClassNames[i] == name) return kEmotionClasses[i];
  }
  return std::nullopt;
}

ClassProbabilities::ClassProbabilities(const std::array<double, kNumEmotionClasses>& probs) {
  for (std::size_t i = 0; i < kNumEmotionClasses; ++i) {
    const double p = probs[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw SchemaError("probability for class '" + std::string(kEmotionClassNames[i]) +
                        "' outside [0,1]: " + num(p));
    }
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw SchemaError("class probabilities sum to " + num(sum) + ", expected 1");
  }
  // Sums already at rounding level are kept as is so that serialize/parse is exact.
  const double scale = std::abs(sum - 1.0) <= 1e-12 ? 1.0 : sum;
  for (std::size_t i = 0; i < kNumEmotionClasses; ++i) probs_[i] = probs[i] / scale;
}

ClassProbabilities ClassProbabilities::from_map(const std::map<std::string, double>& by_name) {
  std::array<double, kNumEmotionClasses> probs{};
  std::array<bool, kNumEmotionClasses> seen{};
  for (const auto& [name, p] : by_name) {
    const auto c = emotion_class_from_string(name);
    if (!c) throw SchemaError("unknown emotion class '" + name + "'");
    probs[index_of(*c)] = p;
    seen[index_of(*c)] = true;
  }
  for (std::size_t i = 0; i < kNumEmotionClasses; ++i) {
    if (!seen[i]) {
      throw SchemaError("missing emotion class '" + std::string(kEmotionClassNames[i]) + "'");
    }
  }
  return ClassProbabilities(probs);
}

ClassProbabilities ClassProbabilities::one_hot(EmotionClass c) {
  std::array<double, kNumEmotionClasses> probs{};
  probs[index_of(c)] = 1.0;
  return ClassProbabilities(probs);
}

CircumplexPoint::CircumplexPoint(double arousal, double valence)
    : arousal_(arousal), valence_(valence) {
  if (!within(arousal, -1.0, 1.0)) throw SchemaError("arousal outside [-1,1]: " + num(arousal));
  if (!within(valence, -1.0, 1.0)) throw SchemaError("valence outside [-1,1]: " + num(valence));
}

PathosScore::PathosScore(int value) : value_(value) {
  if (value < -2 || value > 2) {
    throw SchemaError("pathos must be an integer in {-2..+2}, got " + std::to_string(value));
  }
}

void SegmentAnnotation::validate() const {
  if (primary_emotion.empty()) throw SchemaError("primary_emotion is empty");
  if (!within(arousal, -1.0, 1.0)) throw SchemaError("arousal outside [-1,1]: " + num(arousal));
  if (!within(valence, -1.0, 1.0)) throw SchemaError("valence outside [-1,1]: " + num(valence));
  if (confidence && !within(*confidence, 0.0, 1.0)) {
    throw SchemaError("confidence outside [0,1]: " + num(*confidence));
  }
}

void SegmentRecord::validate() const {
  if (segment_id.empty()) throw SchemaError("segment_id is empty");
  const std::string where = " (segment " + segment_id + ")";
  if (!std::isfinite(start_s) || !std::isfinite(end_s) || start_s < 0.0 || end_s <= start_s) {
    throw SchemaError("time span must satisfy end_s > start_s >= 0" + where);
  }
  if (!relevant && pathos) throw SchemaError("irrelevant segment carries a pathos score" + where);
  if (llm_annotation) {
    try {
      llm_annotation->validate();
    } catch (const SchemaError& e) {
      throw SchemaError(e.what() + where);
    }
  }
}

std::string_view to_string(CorpusEmotion c) { return kCorpusEmotionNames[index_of(c)]; }

std::optional<CorpusEmotion> corpus_emotion_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNumCorpusEmotions; ++i) {
    if (kCorpusEmotionNames[i] == name) return kCorpusEmotions[i];
  }
  return std::nullopt;
}

std::string_view to_string(Gender g) { return g == Gender::kFemale ? "F" : "M"; }

std::optional<Gender> gender_from_string(std::string_view code) {
  if (code == "F") return Gender::kFemale;
  if (code == "M") return Gender::kMale;
  return std::nullopt;
}

SpeakerEmotionMatrix::SpeakerEmotionMatrix(std::map<std::string, SpeakerRow> rows)
    : rows_(std::move(rows)) {
  for (const auto& [speaker, row] : rows_) {
    for (int c : row.counts) {
      if (c < 0) throw SchemaError("negative count for speaker " + speaker);
    }
  }
}

std::vector<std::string> SpeakerEmotionMatrix::speakers() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& [speaker, row] : rows_) out.push_back(speaker);
  return out;
}

Gender SpeakerEmotionMatrix::gender(const std::string& speaker) const {
  const auto it = rows_.find(speaker);
  if (it == rows_.end()) throw InputError("unknown speaker " + speaker);
  return it->second.gender;
}

int SpeakerEmotionMatrix::count(const std::string& speaker, CorpusEmotion e) const {
  const auto it = rows_.find(speaker);
  return it == rows_.end() ? 0 : it->second.counts[index_of(e)];
}

int SpeakerEmotionMatrix::row_total(const std::string& speaker) const {
  const auto it = rows_.find(speaker);
  if (it == rows_.end()) return 0;
  return std::accumulate(it->second.counts.begin(), it->second.counts.end(), 0);
}

int SpeakerEmotionMatrix::column_total(CorpusEmotion e) const {
  int total = 0;
  for (const auto& [speaker, row] : rows_) total += row.counts[index_of(e)];
  return total;
}

int SpeakerEmotionMatrix::grand_total() const {
  int total = 0;
  for (const auto& [speaker, row] : rows_) {
    total += std::accumulate(row.counts.begin(), row.counts.end(), 0);
  }
  return total;
}

}  // namespace pathoscope
