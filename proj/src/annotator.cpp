#include "pathoscope/annotator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <exception>
#include <optional>
#include <thread>

#include "httplib.h"
#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"

namespace pathoscope::annotator {
namespace {

constexpr std::string_view kInstructions =
    "You receive the audio of one complete speech along with its full transcript. "
    "Each transcript segment carries a segment_id and its start and end time in seconds. "
    "Listen to the whole speech and judge every segment in its context.\n"
    "For each segment report:\n"
    "(a) primary_emotion: the emotion you perceive, named freely in your own words; "
    "secondary_emotion: a further emotion if present, or null if there is none. "
    "No list of categories is given and none should be assumed.\n"
    "(b) arousal: degree of activation from -1 (very calm) to +1 (highly activated).\n"
    "(c) valence: from -1 (very unpleasant) to +1 (very pleasant).\n"
    "(d) rhetorical_function: the rhetorical role of the segment, named freely.\n"
    "(e) confidence: your confidence in this assessment, from 0 to 1.\n"
    "Reply with JSON only, shaped as "
    "{\"annotations\": {\"<segment_id>\": {\"primary_emotion\": ..., \"secondary_emotion\": ..., "
    "\"arousal\": ..., \"valence\": ..., \"rhetorical_function\": ..., \"confidence\": ...}}}.";

// Acoustic classes, then the corpus categories ("neutral" belongs to both).
constexpr std::array<std::string_view, 14> kForbidden{
    "angry", "disgusted", "fearful", "happy", "neutral",   "other",  "sad", "surprised",
    "anger", "boredom",   "disgust", "fear",  "happiness", "sadness"};

std::vector<TranscriptEntry> to_entries(std::span<const SegmentRecord> segments) {
  std::vector<TranscriptEntry> out;
  out.reserve(segments.size());
  std::set<std::string> seen;
  for (const auto& s : segments) {
    if (!seen.insert(s.segment_id).second) {
      throw InputError("duplicate segment id " + s.segment_id);
    }
    out.push_back(TranscriptEntry{s.segment_id, s.start_s, s.end_s, s.transcript});
  }
  return out;
}

ParsedResponse parse_impl(std::string_view payload, const std::set<std::string>* expected) {
  Json doc;
  try {
    doc = parse_json_strict(payload, "annotation response");
  } catch (const SchemaError& e) {
    throw ProtocolError(e.what());
  }
  if (!doc.is_object() || !doc.contains("annotations") || !doc["annotations"].is_object()) {
    throw ProtocolError("annotation response: expected an object with an 'annotations' object");
  }
  ParsedResponse out;
  for (const auto& [id, value] : doc["annotations"].items()) {
    if (expected && !expected->contains(id)) {
      throw ProtocolError("annotation response: unknown segment id '" + id + "'");
    }
    try {
      SegmentAnnotation a = segment_annotation_from_json(value);
      a.validate();
      out.response.annotations.emplace(id, std::move(a));
    } catch (const SchemaError& e) {
      out.rejected.push_back(SegmentDiagnostic{id, e.what()});
    }
  }
  return out;
}

}  // namespace

std::string_view default_instructions() { return kInstructions; }

std::span<const std::string_view> forbidden_category_words() { return kForbidden; }

void check_open_ended(std::string_view instructions) {
  std::string word;
  auto flush = [&word]() {
    if (!word.empty() && std::find(kForbidden.begin(), kForbidden.end(), word) != kForbidden.end()) {
      throw InputError("instructions name the emotion category '" + word + "'");
    }
    word.clear();
  };
  for (char ch : instructions) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
}

AnnotationRequest build_request(std::string audio_ref, std::span<const SegmentRecord> segments,
                                std::string_view instructions) {
  if (segments.empty()) throw InputError("build_request: no segments");
  check_open_ended(instructions);
  return AnnotationRequest{std::move(audio_ref), to_entries(segments), std::string(instructions)};
}

std::vector<AnnotationRequest> build_per_segment_requests(std::span<const SegmentRecord> segments,
                                                          std::span<const std::string> audio_refs,
                                                          std::string_view instructions) {
  if (segments.size() != audio_refs.size()) {
    throw InputError("build_per_segment_requests: one audio reference per segment required");
  }
  check_open_ended(instructions);
  const auto entries = to_entries(segments);
  std::vector<AnnotationRequest> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out.push_back(AnnotationRequest{audio_refs[i], {entries[i]}, std::string(instructions)});
  }
  return out;
}

std::string request_body(const AnnotationRequest& request) {
  Json segments = Json::array();
  for (const auto& e : request.segments) {
    segments.push_back(
        {{"segment_id", e.segment_id}, {"start_s", e.start_s}, {"end_s", e.end_s}, {"text", e.text}});
  }
  Json doc = {{"audio_ref", request.audio_ref},
              {"segments", segments},
              {"instructions", request.instructions}};
  return doc.dump();
}

ParsedResponse parse_response(std::string_view payload) { return parse_impl(payload, nullptr); }

ParsedResponse parse_response(std::string_view payload, const std::set<std::string>& expected_ids) {
  return parse_impl(payload, &expected_ids);
}

std::string serialize_response(const AnnotationResponse& response) {
  Json annotations = Json::object();
  for (const auto& [id, a] : response.annotations) annotations[id] = to_json(a);
  return Json{{"annotations", annotations}}.dump(2) + "\n";
}

std::string FixtureTransport::exchange(const std::string& /*body*/) {
  if (!std::filesystem::exists(path_)) throw InputError("fixture not found: " + path_.string());
  return read_text_file(path_);
}

HttpTransport::HttpTransport(std::string endpoint, std::string bearer_token,
                             std::chrono::seconds timeout)
    : token_(std::move(bearer_token)), timeout_(timeout) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("endpoint must start with http:// or https://: " + endpoint);
  }
  const std::string scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw InputError("unsupported scheme " + scheme);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw InputError("this build has no TLS support; use an http:// endpoint");
#endif
  const auto path_start = endpoint.find('/', scheme_end + 3);
  origin_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
}

std::string HttpTransport::exchange(const std::string& body) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  const auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw TransportError("POST " + origin_ + path_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("POST " + origin_ + path_ + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

ParsedResponse annotate(const AnnotationRequest& request, Transport& transport,
                        const RetryPolicy& retry) {
  std::set<std::string> ids;
  for (const auto& e : request.segments) ids.insert(e.segment_id);
  const std::string body = request_body(request);

  if (!transport.is_live()) return parse_response(transport.exchange(body), ids);

  const int attempts = std::max(1, retry.max_attempts);
  auto backoff = retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      return parse_response(transport.exchange(body), ids);
    } catch (const TransportError& e) {
      last_error = e.what();
    } catch (const ProtocolError& e) {
      last_error = e.what();
    }
    if (attempt < attempts) {
      if (retry.sleep) {
        retry.sleep(backoff);
      } else {
        std::this_thread::sleep_for(backoff);
      }
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * retry.backoff_multiplier));
    }
  }
  throw TransportError("annotation failed after " + std::to_string(attempts) +
                       " attempts: " + last_error);
}

std::vector<ParsedResponse> annotate_each(std::span<const AnnotationRequest> requests,
                                          Transport& transport, std::size_t parallelism,
                                          const RetryPolicy& retry) {
  std::vector<std::optional<ParsedResponse>> results(requests.size());
  std::vector<std::exception_ptr> errors(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        results[i] = annotate(requests[i], transport, retry);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, requests.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ParsedResponse> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace pathoscope::annotator
