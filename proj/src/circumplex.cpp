#include "pathoscope/circumplex.hpp"

#include <cmath>

#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"

namespace pathoscope::circumplex {
namespace {

void check_column(const WeightTable::Column& column, const char* dimension) {
  for (EmotionClass c : kEmotionClasses) {
    const double w = column[index_of(c)];
    if (!std::isfinite(w) || w < -1.0 || w > 1.0) {
      throw SchemaError(std::string(dimension) + " weight for class '" + std::string(to_string(c)) +
                        "' outside [-1,1]");
    }
  }
}

WeightTable::Column read_column(const Json& doc, const char* dimension) {
  const auto it = doc.find(dimension);
  if (it == doc.end() || !it->is_object()) {
    throw SchemaError(std::string("weights: missing object '") + dimension + "'");
  }
  WeightTable::Column column{};
  std::array<bool, kNumEmotionClasses> seen{};
  for (const auto& [name, value] : it->items()) {
    const auto c = emotion_class_from_string(name);
    if (!c) throw SchemaError(std::string("weights: unknown class '") + name + "' in " + dimension);
    if (!value.is_number()) {
      throw SchemaError(std::string("weights: ") + dimension + " weight for class '" + name +
                        "' is not a number");
    }
    column[index_of(*c)] = value.get<double>();
    seen[index_of(*c)] = true;
  }
  for (EmotionClass c : kEmotionClasses) {
    if (!seen[index_of(c)]) {
      throw SchemaError(std::string("weights: missing class '") + std::string(to_string(c)) +
                        "' in " + dimension);
    }
  }
  return column;
}

}  // namespace

WeightTable::WeightTable(const Column& arousal, const Column& valence)
    : arousal_(arousal), valence_(valence) {
  check_column(arousal_, "arousal");
  check_column(valence_, "valence");
}

WeightTable default_weight_table() {
  // angry, disgusted, fearful, happy, neutral, other, sad, surprised
  return WeightTable({0.75, 0.60, 0.80, 0.65, 0.00, 0.10, -0.30, 0.70},
                     {-0.75, -0.80, -0.65, 0.90, 0.00, 0.00, -0.85, 0.20});
}

WeightTable parse_weight_table(std::string_view json_text) {
  // Duplicate class keys surface here as a strict-parse SchemaError.
  const Json doc = parse_json_strict(json_text, "weights");
  if (!doc.is_object()) throw SchemaError("weights: top level must be an object");
  return WeightTable(read_column(doc, "arousal"), read_column(doc, "valence"));
}

WeightTable load_weight_table(const std::filesystem::path& path) {
  return parse_weight_table(read_text_file(path));
}

CircumplexPoint project(const ClassProbabilities& probs, const WeightTable& weights) {
  double arousal = 0.0;
  double valence = 0.0;
  for (EmotionClass c : kEmotionClasses) {
    arousal += probs[c] * weights.arousal(c);
    valence += probs[c] * weights.valence(c);
  }
  return CircumplexPoint(arousal, valence);
}

std::vector<CircumplexPoint> project_all(std::span<const ClassProbabilities> probs,
                                         const WeightTable& weights) {
  std::vector<CircumplexPoint> out;
  out.reserve(probs.size());
  for (const auto& p : probs) out.push_back(project(p, weights));
  return out;
}

}  // namespace pathoscope::circumplex
