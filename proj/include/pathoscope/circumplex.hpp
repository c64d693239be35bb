#pragma once

// Post-hoc circumplex projection: continuous arousal/valence as the
// probability-weighted sum of per-class weights.
//
//   arousal = sum_k p_k * wA_k        valence = sum_k p_k * wV_k
//
// The result is not clamped. Weights are validated to [-1, +1] instead, which
// keeps every projection inside the unit square.

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "pathoscope/core.hpp"

namespace pathoscope::circumplex {

class WeightTable {
 public:
  using Column = std::array<double, kNumEmotionClasses>;

  // Throws SchemaError naming the class of any non-finite or out-of-range weight.
  WeightTable(const Column& arousal, const Column& valence);

  double arousal(EmotionClass c) const { return arousal_[index_of(c)]; }
  double valence(EmotionClass c) const { return valence_[index_of(c)]; }
  const Column& arousal_weights() const { return arousal_; }
  const Column& valence_weights() const { return valence_; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  Column arousal_;
  Column valence_;
};

// The published weights (Russell / Warriner-derived).
WeightTable default_weight_table();

// weights.json: {"arousal": {<class>: w, ...}, "valence": {...}} with all
// eight classes in each object. Missing, unknown or duplicated classes and
// weights outside [-1, +1] are SchemaErrors.
WeightTable parse_weight_table(std::string_view json_text);
WeightTable load_weight_table(const std::filesystem::path& path);

CircumplexPoint project(const ClassProbabilities& probs, const WeightTable& weights);

// Batch form; one output per input, order preserved.
std::vector<CircumplexPoint> project_all(std::span<const ClassProbabilities> probs,
                                         const WeightTable& weights);

}  // namespace pathoscope::circumplex
