#pragma once

// Semantic matching of free-text emotion labels onto the closed corpus
// categories, and match-rate reporting over annotated utterances.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathoscope/core.hpp"

namespace pathoscope::labelmap {

// Trim surrounding whitespace and case-fold ASCII and Latin-1 letters
// ("Ä" -> "ä"). Diacritics and "ß" are kept.
std::string normalize_label(std::string_view label);

class MappingTable {
 public:
  MappingTable() = default;

  // Throws SchemaError when two labels normalize to the same key.
  static MappingTable from_entries(std::span<const std::pair<std::string, CorpusEmotion>> entries);

  std::optional<CorpusEmotion> find(std::string_view label) const;
  const std::map<std::string, CorpusEmotion>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, CorpusEmotion> entries_;  // keyed by normalized label
};

// Shipped default: the corpus categories in German and English plus the
// labels observed in the bundled speech annotations.
MappingTable default_mapping_table();

// mapping.json: flat object label -> category name.
MappingTable parse_mapping(std::string_view json_text);
MappingTable load_mapping(const std::filesystem::path& path);

// nullopt means Unmatched. Throws InputError on an empty label.
std::optional<CorpusEmotion> canonicalize(std::string_view label, const MappingTable& table);

struct LabeledAnnotation {
  CorpusEmotion ground_truth;
  SegmentAnnotation annotation;
};

struct CategoryMatch {
  std::size_t n = 0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;  // label not in the mapping table at all
  double match_pct = 0.0;
  std::optional<double> avg_conf;  // absent when no record carried a confidence
};

struct MatchReport {
  std::map<CorpusEmotion, CategoryMatch> per_category;  // categories with n > 0
  std::size_t total_n = 0;
  std::size_t total_matched = 0;
  std::size_t total_unmatched = 0;
  double total_match_pct = 0.0;  // micro average over records
  std::optional<double> total_avg_conf;
  std::map<std::string, std::size_t> unmatched_labels;  // raw label -> occurrences
};

// Only primary labels take part in matching. Throws InputError when empty.
MatchReport match_report(std::span<const LabeledAnnotation> records, const MappingTable& table);

// category,n,match_pct,avg_conf with a closing Total row.
std::string match_report_csv(const MatchReport& report);

}  // namespace pathoscope::labelmap
