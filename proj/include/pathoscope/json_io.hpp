#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pathoscope/core.hpp"

namespace pathoscope {

using Json = nlohmann::json;

// Parses `text`, rejecting syntax errors and duplicate keys within one object.
// `what` names the document in error messages.
Json parse_json_strict(std::string_view text, std::string_view what);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

Json to_json(const ClassProbabilities& probs);
Json to_json(const CircumplexPoint& point);
Json to_json(const SegmentAnnotation& annotation);
Json to_json(const SegmentRecord& record);

ClassProbabilities class_probabilities_from_json(const Json& j);
CircumplexPoint circumplex_point_from_json(const Json& j);
// Does not call validate(); range problems are left to the caller so that
// annotation ingestion can degrade per segment.
SegmentAnnotation segment_annotation_from_json(const Json& j);
SegmentRecord segment_record_from_json(const Json& j);

// segments.json: array of SegmentRecord objects.
std::vector<SegmentRecord> parse_segments(std::string_view text);
std::string serialize_segments(const std::vector<SegmentRecord>& records);

// e2v_probs.json: object segment_id -> eight-class probability object. A
// top-level "_meta" object (model id/version written by the producer) is
// carried through untouched.
struct E2vProbsDocument {
  std::map<std::string, ClassProbabilities> probs;
  Json meta;
};
E2vProbsDocument parse_e2v_probs(std::string_view text);

// trust_scores.json: object segment_id -> {pathos: int|null, relevant: bool}.
struct TrustScore {
  std::optional<PathosScore> pathos;
  bool relevant = true;
};
std::map<std::string, TrustScore> parse_trust_scores(std::string_view text);

}  // namespace pathoscope
