#include "pathoscope/labelmap.hpp"

#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/resources.hpp"

namespace pathoscope::labelmap {
namespace {

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

}  // namespace

std::string normalize_label(std::string_view label) {
  std::size_t begin = 0;
  std::size_t end = label.size();
  while (begin < end && is_space(static_cast<unsigned char>(label[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(label[end - 1]))) --end;

  std::string out(label.substr(begin, end - begin));
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      // U+00C0..U+00DE (except U+00D7, the multiplication sign) fold by +0x20.
      auto next = static_cast<unsigned char>(out[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) out[i + 1] = static_cast<char>(next + 0x20);
      ++i;
    }
  }
  return out;
}

MappingTable MappingTable::from_entries(
    std::span<const std::pair<std::string, CorpusEmotion>> entries) {
  MappingTable table;
  for (const auto& [label, category] : entries) {
    const std::string key = normalize_label(label);
    if (key.empty()) throw SchemaError("mapping: empty label");
    if (!table.entries_.emplace(key, category).second) {
      throw SchemaError("mapping: duplicate label '" + label + "' (normalized '" + key + "')");
    }
  }
  return table;
}

std::optional<CorpusEmotion> MappingTable::find(std::string_view label) const {
  const auto it = entries_.find(normalize_label(label));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

MappingTable parse_mapping(std::string_view json_text) {
  const Json doc = parse_json_strict(json_text, "mapping");
  if (!doc.is_object()) throw SchemaError("mapping: top level must be an object");
  std::vector<std::pair<std::string, CorpusEmotion>> entries;
  for (const auto& [label, value] : doc.items()) {
    if (!value.is_string()) throw SchemaError("mapping: target of '" + label + "' must be a string");
    const auto category = corpus_emotion_from_string(value.get<std::string>());
    if (!category) {
      throw SchemaError("mapping: unknown target category '" + value.get<std::string>() +
                        "' for label '" + label + "'");
    }
    entries.emplace_back(label, *category);
  }
  return MappingTable::from_entries(entries);
}

MappingTable load_mapping(const std::filesystem::path& path) {
  return parse_mapping(read_text_file(path));
}

MappingTable default_mapping_table() { return parse_mapping(resources::default_mapping_json()); }

std::optional<CorpusEmotion> canonicalize(std::string_view label, const MappingTable& table) {
  if (normalize_label(label).empty()) throw InputError("canonicalize: empty label");
  return table.find(label);
}

MatchReport match_report(std::span<const LabeledAnnotation> records, const MappingTable& table) {
  if (records.empty()) throw InputError("match_report: no records");
  struct Acc {
    std::size_t n = 0, matched = 0, unmatched = 0, conf_n = 0;
    double conf_sum = 0.0;
  };
  std::map<CorpusEmotion, Acc> acc;
  MatchReport report;
  for (const auto& rec : records) {
    Acc& a = acc[rec.ground_truth];
    ++a.n;
    const auto mapped = table.find(rec.annotation.primary_emotion);
    if (!mapped) {
      ++a.unmatched;
      ++report.unmatched_labels[rec.annotation.primary_emotion];
    } else if (*mapped == rec.ground_truth) {
      ++a.matched;
    }
    if (rec.annotation.confidence) {
      a.conf_sum += *rec.annotation.confidence;
      ++a.conf_n;
    }
  }
  double conf_sum = 0.0;
  std::size_t conf_n = 0;
  for (const auto& [category, a] : acc) {
    CategoryMatch m;
    m.n = a.n;
    m.matched = a.matched;
    m.unmatched = a.unmatched;
    m.match_pct = 100.0 * static_cast<double>(a.matched) / static_cast<double>(a.n);
    if (a.conf_n > 0) m.avg_conf = a.conf_sum / static_cast<double>(a.conf_n);
    report.per_category.emplace(category, m);
    report.total_n += a.n;
    report.total_matched += a.matched;
    report.total_unmatched += a.unmatched;
    conf_sum += a.conf_sum;
    conf_n += a.conf_n;
  }
  report.total_match_pct =
      100.0 * static_cast<double>(report.total_matched) / static_cast<double>(report.total_n);
  if (conf_n > 0) report.total_avg_conf = conf_sum / static_cast<double>(conf_n);
  return report;
}

std::string match_report_csv(const MatchReport& report) {
  std::string out = "category,n,match_pct,avg_conf\n";
  auto row = [&out](std::string_view name, std::size_t n, double pct,
                    const std::optional<double>& conf) {
    out += name;
    out += ',' + std::to_string(n) + ',' + format_double(pct) + ',';
    if (conf) out += format_double(*conf);
    out += '\n';
  };
  for (const auto& [category, m] : report.per_category) {
    row(to_string(category), m.n, m.match_pct, m.avg_conf);
  }
  row("Total", report.total_n, report.total_match_pct, report.total_avg_conf);
  return out;
}

}  // namespace pathoscope::labelmap
