#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pathoscope {

// Machine-parsable warning codes written to stderr as "warning[<code>]: ...".
namespace warning_code {
inline constexpr std::string_view kFilteredRows = "W101-filtered-rows";
inline constexpr std::string_view kEmptyTable = "W102-empty-table";
inline constexpr std::string_view kUnmatchedLabel = "W201-unmatched-label";
inline constexpr std::string_view kDegradedAnnotation = "W301-degraded-annotation";
inline constexpr std::string_view kEmptyChannel = "W401-empty-channel";
inline constexpr std::string_view kComparisonUnavailable = "W501-comparison-unavailable";
}  // namespace warning_code

struct Diagnostic {
  std::string code;
  std::string message;
};

// Collects warnings in emission order. Not thread-safe.
class Diagnostics {
 public:
  void warn(std::string_view code, std::string message) {
    entries_.push_back(Diagnostic{std::string(code), std::move(message)});
  }
  const std::vector<Diagnostic>& entries() const { return entries_; }
  bool has(std::string_view code) const {
    for (const auto& d : entries_) {
      if (d.code == code) return true;
    }
    return false;
  }

 private:
  std::vector<Diagnostic> entries_;
};

}  // namespace pathoscope
