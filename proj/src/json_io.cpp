#include "pathoscope/json_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pathoscope/error.hpp"

namespace pathoscope {
namespace {

const Json& require(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_number()) throw SchemaError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string require_string(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

// Absent key and explicit null both map to nullopt.
const Json* optional_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + " must be a JSON object");
}

}  // namespace

Json parse_json_strict(std::string_view text, std::string_view what) {
  // One key set per open object; the callback sees keys before values.
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  const Json::parser_callback_t cb = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        if (!open_objects.empty()) open_objects.pop_back();
        break;
      case Json::parse_event_t::key:
        if (!open_objects.empty() && !open_objects.back().insert(parsed.get<std::string>()).second &&
            duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default:
        break;
    }
    return true;
  };
  Json out;
  try {
    out = Json::parse(text.begin(), text.end(), cb);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!duplicate.empty()) {
    throw SchemaError(std::string(what) + ": duplicate key '" + duplicate + "'");
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("write failed for " + path.string());
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const ClassProbabilities& probs) {
  Json j = Json::object();
  for (EmotionClass c : kEmotionClasses) j[std::string(to_string(c))] = probs[c];
  return j;
}

Json to_json(const CircumplexPoint& point) {
  return Json{{"arousal", point.arousal()}, {"valence", point.valence()}};
}

Json to_json(const SegmentAnnotation& a) {
  Json j = Json::object();
  j["primary_emotion"] = a.primary_emotion;
  j["secondary_emotion"] = a.secondary_emotion ? Json(*a.secondary_emotion) : Json(nullptr);
  j["arousal"] = a.arousal;
  j["valence"] = a.valence;
  j["rhetorical_function"] = a.rhetorical_function;
  j["confidence"] = a.confidence ? Json(*a.confidence) : Json(nullptr);
  return j;
}

Json to_json(const SegmentRecord& r) {
  Json j = Json::object();
  j["segment_id"] = r.segment_id;
  j["start_s"] = r.start_s;
  j["end_s"] = r.end_s;
  j["transcript"] = r.transcript;
  j["e2v_probs"] = r.e2v_probs ? to_json(*r.e2v_probs) : Json(nullptr);
  j["e2v_point"] = r.e2v_point ? to_json(*r.e2v_point) : Json(nullptr);
  j["llm_annotation"] = r.llm_annotation ? to_json(*r.llm_annotation) : Json(nullptr);
  j["pathos"] = r.pathos ? Json(r.pathos->value()) : Json(nullptr);
  j["relevant"] = r.relevant;
  return j;
}

ClassProbabilities class_probabilities_from_json(const Json& j) {
  require_object(j, "class probabilities");
  std::map<std::string, double> by_name;
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number()) throw SchemaError("probability for '" + name + "' must be a number");
    by_name[name] = value.get<double>();
  }
  return ClassProbabilities::from_map(by_name);
}

CircumplexPoint circumplex_point_from_json(const Json& j) {
  require_object(j, "circumplex point");
  return CircumplexPoint(require_number(j, "arousal"), require_number(j, "valence"));
}

SegmentAnnotation segment_annotation_from_json(const Json& j) {
  require_object(j, "annotation");
  SegmentAnnotation a;
  a.primary_emotion = require_string(j, "primary_emotion");
  if (const Json* v = optional_field(j, "secondary_emotion")) {
    if (!v->is_string()) throw SchemaError("field 'secondary_emotion' must be a string or null");
    a.secondary_emotion = v->get<std::string>();
  }
  a.arousal = require_number(j, "arousal");
  a.valence = require_number(j, "valence");
  a.rhetorical_function = require_string(j, "rhetorical_function");
  if (const Json* v = optional_field(j, "confidence")) {
    if (!v->is_number()) throw SchemaError("field 'confidence' must be a number or null");
    a.confidence = v->get<double>();
  }
  return a;
}

SegmentRecord segment_record_from_json(const Json& j) {
  require_object(j, "segment record");
  SegmentRecord r;
  r.segment_id = require_string(j, "segment_id");
  try {
    r.start_s = require_number(j, "start_s");
    r.end_s = require_number(j, "end_s");
    if (const Json* v = optional_field(j, "transcript")) {
      if (!v->is_string()) throw SchemaError("field 'transcript' must be a string");
      r.transcript = v->get<std::string>();
    }
    if (const Json* v = optional_field(j, "e2v_probs")) r.e2v_probs = class_probabilities_from_json(*v);
    if (const Json* v = optional_field(j, "e2v_point")) r.e2v_point = circumplex_point_from_json(*v);
    if (const Json* v = optional_field(j, "llm_annotation")) {
      r.llm_annotation = segment_annotation_from_json(*v);
    }
    if (const Json* v = optional_field(j, "pathos")) {
      if (!v->is_number_integer()) throw SchemaError("field 'pathos' must be an integer or null");
      r.pathos = PathosScore(v->get<int>());
    }
    if (const Json* v = optional_field(j, "relevant")) {
      if (!v->is_boolean()) throw SchemaError("field 'relevant' must be a boolean");
      r.relevant = v->get<bool>();
    }
  } catch (const SchemaError& e) {
    throw SchemaError(std::string(e.what()) + " (segment " + r.segment_id + ")");
  }
  r.validate();
  return r;
}

std::vector<SegmentRecord> parse_segments(std::string_view text) {
  const Json doc = parse_json_strict(text, "segments");
  if (!doc.is_array()) throw SchemaError("segments: top level must be an array");
  std::vector<SegmentRecord> out;
  out.reserve(doc.size());
  for (const Json& item : doc) out.push_back(segment_record_from_json(item));
  return out;
}

std::string serialize_segments(const std::vector<SegmentRecord>& records) {
  Json doc = Json::array();
  for (const auto& r : records) doc.push_back(to_json(r));
  return doc.dump(2) + "\n";
}

E2vProbsDocument parse_e2v_probs(std::string_view text) {
  const Json doc = parse_json_strict(text, "e2v_probs");
  require_object(doc, "e2v_probs");
  E2vProbsDocument out;
  for (const auto& [id, value] : doc.items()) {
    if (id == "_meta") {
      out.meta = value;
      continue;
    }
    try {
      out.probs.emplace(id, class_probabilities_from_json(value));
    } catch (const SchemaError& e) {
      throw SchemaError("e2v_probs: segment " + id + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, TrustScore> parse_trust_scores(std::string_view text) {
  const Json doc = parse_json_strict(text, "trust_scores");
  require_object(doc, "trust_scores");
  std::map<std::string, TrustScore> out;
  for (const auto& [id, value] : doc.items()) {
    try {
      require_object(value, "trust score");
      TrustScore score;
      if (const Json* v = optional_field(value, "pathos")) {
        if (!v->is_number_integer()) throw SchemaError("field 'pathos' must be an integer or null");
        score.pathos = PathosScore(v->get<int>());
      }
      const Json& rel = require(value, "relevant");
      if (!rel.is_boolean()) throw SchemaError("field 'relevant' must be a boolean");
      score.relevant = rel.get<bool>();
      if (!score.relevant && score.pathos) {
        throw SchemaError("irrelevant segment carries a pathos score");
      }
      out.emplace(id, score);
    } catch (const SchemaError& e) {
      throw SchemaError("trust_scores: segment " + id + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pathoscope
