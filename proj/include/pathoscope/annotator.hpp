#pragma once

// Open-ended LLM annotation client.
//
// Wire contract (provider agnostic):
//   request  POST <endpoint>, JSON {audio_ref, segments: [{segment_id, start_s,
//            end_s, text}], instructions}, "Authorization: Bearer <token>"
//   response JSON {annotations: {<segment_id>: {primary_emotion,
//            secondary_emotion, arousal, valence, rhetorical_function,
//            confidence}}}
// Fixture files hold a response body verbatim.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathoscope/core.hpp"

namespace pathoscope::annotator {

// Environment variable holding the bearer credential for live requests.
inline constexpr const char* kCredentialEnvVar = "PATHOSCOPE_API_TOKEN";
inline constexpr std::string_view kInstructionTemplateVersion = "open-ended-v1";

struct TranscriptEntry {
  std::string segment_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
};

struct AnnotationRequest {
  std::string audio_ref;  // opaque; resolved by the deployment
  std::vector<TranscriptEntry> segments;
  std::string instructions;
};

// Asks for fields (a)-(e) per segment without naming any emotion category.
std::string_view default_instructions();

// Emotion category names that must never appear in instructions: the eight
// acoustic classes and the seven corpus categories, lowercase.
std::span<const std::string_view> forbidden_category_words();

// Throws InputError when `instructions` names any forbidden category
// (case-insensitive, whole word).
void check_open_ended(std::string_view instructions);

// Whole-speech request. Throws InputError on an empty list or duplicate ids.
AnnotationRequest build_request(std::string audio_ref, std::span<const SegmentRecord> segments,
                                std::string_view instructions = default_instructions());

// Per-utterance mode for corpus audits: one request per segment, each with its
// own audio reference. audio_refs.size() must equal segments.size().
std::vector<AnnotationRequest> build_per_segment_requests(
    std::span<const SegmentRecord> segments, std::span<const std::string> audio_refs,
    std::string_view instructions = default_instructions());

std::string request_body(const AnnotationRequest& request);

struct AnnotationResponse {
  std::map<std::string, SegmentAnnotation> annotations;
  friend bool operator==(const AnnotationResponse&, const AnnotationResponse&) = default;
};

// An annotation dropped because it failed validation.
struct SegmentDiagnostic {
  std::string segment_id;
  std::string message;
};

struct ParsedResponse {
  AnnotationResponse response;
  std::vector<SegmentDiagnostic> rejected;
};

// Validates a response payload. Bad individual annotations are moved to
// `rejected`; a payload that is not JSON or lacks the annotations object is a
// ProtocolError. With `expected_ids`, an id outside that set is a
// ProtocolError naming the id.
ParsedResponse parse_response(std::string_view payload);
ParsedResponse parse_response(std::string_view payload, const std::set<std::string>& expected_ids);

std::string serialize_response(const AnnotationResponse& response);

class Transport {
 public:
  virtual ~Transport() = default;
  // Sends one request body and returns the raw response payload.
  virtual std::string exchange(const std::string& body) = 0;
  // Live transports are retried; fixtures are not.
  virtual bool is_live() const = 0;
};

// Replays a recorded response; the request body is ignored.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path path) : path_(std::move(path)) {}
  std::string exchange(const std::string& body) override;  // InputError if missing
  bool is_live() const override { return false; }

 private:
  std::filesystem::path path_;
};

// HTTP(S) POST of the JSON request body. Non-2xx status and connection
// failures raise TransportError.
class HttpTransport : public Transport {
 public:
  HttpTransport(std::string endpoint, std::string bearer_token,
                std::chrono::seconds timeout = std::chrono::seconds(300));
  std::string exchange(const std::string& body) override;
  bool is_live() const override { return true; }

 private:
  std::string origin_;
  std::string path_;
  std::string token_;
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double backoff_multiplier = 2.0;
  // Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Sends the request and validates the reply against the request's ids.
// Live transports are retried on transport and protocol errors with
// exponential backoff; after the last attempt a TransportError is thrown.
// Fixture replays fail immediately.
ParsedResponse annotate(const AnnotationRequest& request, Transport& transport,
                        const RetryPolicy& retry = {});

// Runs independent requests with at most `parallelism` in flight. Results are
// in request order. The transport must tolerate concurrent exchange() calls.
std::vector<ParsedResponse> annotate_each(std::span<const AnnotationRequest> requests,
                                          Transport& transport, std::size_t parallelism,
                                          const RetryPolicy& retry = {});

}  // namespace pathoscope::annotator
