#include "pathoscope/bundled.hpp"

#include <cmath>
#include <set>

#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/resources.hpp"

namespace pathoscope {
namespace {

constexpr std::size_t kAppendixBRows = 41;
constexpr std::size_t kFigureLength = 51;
constexpr std::size_t kFigurePathosMarkers = 46;

Json parse_bundle(std::string_view text, const char* name) {
  try {
    return parse_json_strict(text, name);
  } catch (const SchemaError& e) {
    throw IntegrityError("well_formed", e.what());
  }
}

std::vector<std::optional<double>> read_series(const Json& series, const char* key) {
  const auto it = series.find(key);
  if (it == series.end() || !it->is_array()) {
    throw IntegrityError("series_present", std::string("series '") + key + "' missing");
  }
  std::vector<std::optional<double>> out;
  for (const Json& v : *it) {
    if (v.is_null()) {
      out.emplace_back();
    } else if (v.is_number() && std::isfinite(v.get<double>())) {
      out.emplace_back(v.get<double>());
    } else {
      throw IntegrityError("series_numeric", std::string("non-numeric entry in '") + key + "'");
    }
  }
  return out;
}

std::size_t present(const std::vector<std::optional<double>>& s) {
  std::size_t n = 0;
  for (const auto& v : s) n += v.has_value();
  return n;
}

}  // namespace

std::vector<SegmentRecord> parse_appendix_b_bundle(std::string_view json_text) {
  const Json doc = parse_bundle(json_text, "appendix_b");
  if (!doc.is_array()) throw IntegrityError("well_formed", "top level must be an array");
  std::vector<SegmentRecord> records;
  for (const Json& item : doc) {
    try {
      records.push_back(segment_record_from_json(item));
    } catch (const SchemaError& e) {
      throw IntegrityError("record_schema", e.what());
    }
  }
  if (records.size() != kAppendixBRows) {
    throw IntegrityError("record_count", "expected " + std::to_string(kAppendixBRows) +
                                             " records, found " + std::to_string(records.size()));
  }
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.segment_id).second) {
      throw IntegrityError("unique_segment_ids", "duplicate " + r.segment_id);
    }
    if (!r.relevant || !r.pathos) {
      throw IntegrityError("relevant_with_pathos", r.segment_id + " lacks a retained pathos score");
    }
    if (!r.e2v_point || !r.llm_annotation) {
      throw IntegrityError("all_channels_present", r.segment_id + " lacks an e2v or LLM channel");
    }
  }
  return records;
}

Figure1Series parse_figure1_bundle(std::string_view json_text) {
  const Json doc = parse_bundle(json_text, "figure1_series");
  if (!doc.is_object() || !doc.contains("series") || !doc.contains("length")) {
    throw IntegrityError("well_formed", "expected {length, series}");
  }
  const Json& series = doc["series"];
  Figure1Series out;
  out.gem_valence = read_series(series, "gem_valence");
  out.e2v_arousal = read_series(series, "e2v_arousal");
  out.pathos = read_series(series, "pathos");

  const auto declared = doc["length"].is_number_unsigned() ? doc["length"].get<std::size_t>() : 0;
  for (const auto* s : {&out.gem_valence, &out.e2v_arousal, &out.pathos}) {
    if (s->size() != declared || declared != kFigureLength) {
      throw IntegrityError("aligned_length", "series lengths must all equal " +
                                                 std::to_string(kFigureLength));
    }
  }
  if (present(out.gem_valence) != kFigureLength || present(out.e2v_arousal) != kFigureLength) {
    throw IntegrityError("continuous_series_complete", "gem_valence and e2v_arousal need 51 points");
  }
  if (present(out.pathos) != kFigurePathosMarkers) {
    throw IntegrityError("pathos_marker_count", "expected 46 pathos markers, found " +
                                                    std::to_string(present(out.pathos)));
  }
  for (const auto& v : out.pathos) {
    if (v && (*v != std::round(*v) || *v < -2 || *v > 2)) {
      throw IntegrityError("pathos_scale", "pathos marker off the {-2..+2} scale");
    }
  }
  for (const auto* s : {&out.gem_valence, &out.e2v_arousal}) {
    for (const auto& v : *s) {
      if (v && (*v < -1.0 || *v > 1.0)) throw IntegrityError("series_range", "value outside [-1,1]");
    }
  }
  return out;
}

SpeakerEmotionMatrix parse_table6_bundle(std::string_view json_text) {
  const Json doc = parse_bundle(json_text, "table6_counts");
  if (!doc.is_object() || !doc.contains("speakers") || !doc["speakers"].is_array()) {
    throw IntegrityError("well_formed", "expected a speakers array");
  }
  std::map<std::string, SpeakerEmotionMatrix::SpeakerRow> rows;
  for (const Json& s : doc["speakers"]) {
    const std::string speaker = s.value("speaker", "");
    const auto gender = gender_from_string(s.value("gender", ""));
    if (speaker.empty() || !gender) throw IntegrityError("speaker_gender", "bad speaker entry");
    SpeakerEmotionMatrix::SpeakerRow row;
    row.gender = *gender;
    if (!s.contains("counts") || !s["counts"].is_object()) {
      throw IntegrityError("categories", "speaker " + speaker + " has no counts object");
    }
    const Json& counts = s["counts"];
    if (counts.size() != kNumCorpusEmotions) {
      throw IntegrityError("categories", "speaker " + speaker + " must list all 7 categories");
    }
    int sum = 0;
    for (const auto& [name, value] : counts.items()) {
      const auto e = corpus_emotion_from_string(name);
      if (!e) throw IntegrityError("categories", "unknown category " + name);
      if (!value.is_number_integer() || value.get<int>() < 0) {
        throw IntegrityError("non_negative_counts", "speaker " + speaker + ", " + name);
      }
      row.counts[index_of(*e)] = value.get<int>();
      sum += value.get<int>();
    }
    if (sum != s.value("total", -1)) {
      throw IntegrityError("row_total", "speaker " + speaker + " cells sum to " + std::to_string(sum) +
                                            ", Total column says " +
                                            std::to_string(s.value("total", -1)));
    }
    if (!rows.emplace(speaker, row).second) {
      throw IntegrityError("unique_speakers", "duplicate speaker " + speaker);
    }
  }
  SpeakerEmotionMatrix matrix(std::move(rows));
  if (!doc.contains("column_totals") || !doc["column_totals"].is_object()) {
    throw IntegrityError("column_total", "column_totals missing");
  }
  const Json& columns = doc["column_totals"];
  for (CorpusEmotion e : kCorpusEmotions) {
    const int declared = columns.value(std::string(to_string(e)), -1);
    if (matrix.column_total(e) != declared) {
      throw IntegrityError("column_total", std::string(to_string(e)) + " sums to " +
                                               std::to_string(matrix.column_total(e)) +
                                               ", declared " + std::to_string(declared));
    }
  }
  if (matrix.grand_total() != doc.value("grand_total", -1)) {
    throw IntegrityError("grand_total", "cells sum to " + std::to_string(matrix.grand_total()));
  }
  return matrix;
}

std::vector<SegmentRecord> bundled_appendix_b() {
  return parse_appendix_b_bundle(resources::appendix_b_json());
}

Figure1Series bundled_figure1_series() {
  return parse_figure1_bundle(resources::figure1_series_json());
}

SpeakerEmotionMatrix bundled_table6_counts() {
  return parse_table6_bundle(resources::table6_counts_json());
}

BundledDataset load_bundled_dataset(std::string_view name) {
  if (name == "appendix_b") return bundled_appendix_b();
  if (name == "figure1_series") return bundled_figure1_series();
  if (name == "table6_counts") return bundled_table6_counts();
  throw InputError("unknown bundled dataset '" + std::string(name) +
                   "' (expected appendix_b, figure1_series or table6_counts)");
}

}  // namespace pathoscope
