#include "pathoscope/emodb_audit.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/resources.hpp"

namespace pathoscope::emodb {
namespace {

CharSpan read_span(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_object()) {
    throw SchemaError(std::string("convention: missing span '") + key + "'");
  }
  const auto start = it->find("start");
  const auto length = it->find("length");
  if (start == it->end() || length == it->end() || !start->is_number_unsigned() ||
      !length->is_number_unsigned()) {
    throw SchemaError(std::string("convention: span '") + key + "' needs unsigned start/length");
  }
  return CharSpan{start->get<std::size_t>(), length->get<std::size_t>()};
}

bool overlaps(const CharSpan& a, const CharSpan& b) {
  return a.start < b.end() && b.start < a.end();
}

std::string pct(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(1);
  ss << v;
  return ss.str();
}

std::string fixed2(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(2);
  ss << v;
  return ss.str();
}

}  // namespace

void FilenameConvention::validate() const {
  if (speaker.length == 0 || text.length == 0) throw SchemaError("convention: empty span");
  if (emotion_code.length != 1) throw SchemaError("convention: emotion_code span must be 1 char");
  if (overlaps(speaker, text) || overlaps(speaker, emotion_code) || overlaps(text, emotion_code)) {
    throw SchemaError("convention: spans overlap");
  }
  if (code_table.empty()) throw SchemaError("convention: empty code table");
}

std::size_t FilenameConvention::min_stem_length() const {
  return std::max({speaker.end(), text.end(), emotion_code.end()});
}

FilenameConvention parse_convention(std::string_view json_text) {
  const Json doc = parse_json_strict(json_text, "convention");
  if (!doc.is_object()) throw SchemaError("convention: top level must be an object");
  FilenameConvention conv;
  conv.name = doc.value("name", "unnamed");
  conv.speaker = read_span(doc, "speaker");
  conv.text = read_span(doc, "text");
  conv.emotion_code = read_span(doc, "emotion_code");
  if (!doc.contains("codes") || !doc["codes"].is_object()) {
    throw SchemaError("convention: missing object 'codes'");
  }
  for (const auto& [code, value] : doc["codes"].items()) {
    if (code.size() != 1) throw SchemaError("convention: code '" + code + "' must be one char");
    const auto category =
        value.is_string() ? corpus_emotion_from_string(value.get<std::string>()) : std::nullopt;
    if (!category) throw SchemaError("convention: code '" + code + "' maps to an unknown category");
    conv.code_table.emplace(code[0], *category);
  }
  if (!doc.contains("genders") || !doc["genders"].is_object()) {
    throw SchemaError("convention: missing object 'genders'");
  }
  for (const auto& [speaker, value] : doc["genders"].items()) {
    const auto g = value.is_string() ? gender_from_string(value.get<std::string>()) : std::nullopt;
    if (!g) throw SchemaError("convention: speaker " + speaker + " needs gender F or M");
    conv.gender_table.emplace(speaker, *g);
  }
  conv.validate();
  return conv;
}

FilenameConvention load_convention(const std::filesystem::path& path) {
  return parse_convention(read_text_file(path));
}

FilenameConvention default_convention() {
  return parse_convention(resources::default_convention_json());
}

std::string filename_stem(std::string_view name) {
  const auto slash = name.find_last_of("/\\");
  if (slash != std::string_view::npos) name.remove_prefix(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) name = name.substr(0, dot);
  return std::string(name);
}

UtteranceMeta parse_filename(std::string_view name, const FilenameConvention& conv) {
  const std::string stem = filename_stem(name);
  if (stem.size() < conv.min_stem_length()) {
    throw ParseError("stem", "'" + std::string(name) + "' is shorter than " +
                                 std::to_string(conv.min_stem_length()) + " characters");
  }
  UtteranceMeta meta;
  meta.filename = std::string(name);
  meta.speaker_id = stem.substr(conv.speaker.start, conv.speaker.length);
  meta.text_code = stem.substr(conv.text.start, conv.text.length);
  const char code = stem[conv.emotion_code.start];
  const auto emotion = conv.code_table.find(code);
  if (emotion == conv.code_table.end()) {
    throw ParseError("emotion_code",
                     "unknown code '" + std::string(1, code) + "' in '" + std::string(name) + "'");
  }
  meta.emotion = emotion->second;
  const auto gender = conv.gender_table.find(meta.speaker_id);
  if (gender == conv.gender_table.end()) {
    throw ParseError("speaker",
                     "unknown speaker '" + meta.speaker_id + "' in '" + std::string(name) + "'");
  }
  meta.gender = gender->second;
  return meta;
}

std::vector<std::string> parse_manifest_text(std::string_view text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty()) names.emplace_back(line);
    pos = eol + 1;
  }
  return names;
}

std::vector<std::string> read_manifest(const std::filesystem::path& path) {
  return parse_manifest_text(read_text_file(path));
}

std::vector<UtteranceMeta> parse_manifest_serial(std::span<const std::string> names,
                                                 const FilenameConvention& conv) {
  std::vector<UtteranceMeta> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(parse_filename(name, conv));
  return out;
}

std::vector<UtteranceMeta> parse_manifest(std::span<const std::string> names,
                                          const FilenameConvention& conv) {
  const auto count = static_cast<long long>(names.size());
  std::vector<UtteranceMeta> out(names.size());
  std::vector<std::optional<ParseError>> errors(names.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = parse_filename(names[k], conv);
    } catch (const ParseError& e) {
      errors[k] = e;
    }
  }
  for (auto& e : errors) {
    if (e) throw *e;
  }
  return out;
}

SpeakerEmotionMatrix build_matrix(std::span<const UtteranceMeta> metas) {
  std::map<std::string, SpeakerEmotionMatrix::SpeakerRow> rows;
  for (const auto& m : metas) {
    auto& row = rows[m.speaker_id];
    row.gender = m.gender;
    ++row.counts[index_of(m.emotion)];
  }
  return SpeakerEmotionMatrix(std::move(rows));
}

SpeakerEmotionMatrix build_matrix(std::span<const UtteranceMeta> metas,
                                  const FilenameConvention& conv) {
  std::map<std::string, SpeakerEmotionMatrix::SpeakerRow> rows;
  for (const auto& [speaker, gender] : conv.gender_table) rows[speaker].gender = gender;
  for (const auto& m : metas) {
    auto& row = rows[m.speaker_id];
    row.gender = m.gender;
    ++row.counts[index_of(m.emotion)];
  }
  return SpeakerEmotionMatrix(std::move(rows));
}

std::vector<Gap> detect_gaps(const SpeakerEmotionMatrix& matrix, int threshold) {
  if (threshold < 0) throw InputError("detect_gaps: threshold must be >= 0");
  std::vector<Gap> gaps;
  for (const auto& [speaker, row] : matrix.rows()) {
    for (CorpusEmotion e : kCorpusEmotions) {
      const int c = row.counts[index_of(e)];
      if (c <= threshold) gaps.push_back(Gap{speaker, e, c});
    }
  }
  std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) {
    return std::tie(a.count, a.speaker_id, a.emotion) < std::tie(b.count, b.speaker_id, b.emotion);
  });
  return gaps;
}

std::vector<labelmap::LabeledAnnotation> label_annotations(
    std::span<const UtteranceMeta> metas,
    const std::map<std::string, SegmentAnnotation>& annotations_by_stem) {
  std::map<std::string, const UtteranceMeta*> by_stem;
  for (const auto& m : metas) by_stem.emplace(filename_stem(m.filename), &m);
  for (const auto& [stem, a] : annotations_by_stem) {
    if (!by_stem.contains(stem)) throw JoinError("annotation for '" + stem + "' has no manifest entry");
  }
  std::vector<labelmap::LabeledAnnotation> out;
  for (const auto& m : metas) {
    const auto it = annotations_by_stem.find(filename_stem(m.filename));
    if (it != annotations_by_stem.end()) out.push_back({m.emotion, it->second});
  }
  return out;
}

AuditReport audit_report(const SpeakerEmotionMatrix& matrix,
                         const std::optional<labelmap::MatchReport>& match,
                         std::string convention_name, int gap_threshold) {
  if (matrix.grand_total() == 0) throw InputError("audit_report: matrix is empty");
  AuditReport r;
  r.convention = std::move(convention_name);
  r.matrix = matrix;
  for (CorpusEmotion e : kCorpusEmotions) r.category_totals[e] = matrix.column_total(e);
  // Ties resolve to the earlier category in canonical order.
  for (CorpusEmotion e : kCorpusEmotions) {
    if (r.category_totals[e] > r.category_totals[r.most_frequent]) r.most_frequent = e;
    if (r.category_totals[e] < r.category_totals[r.least_frequent]) r.least_frequent = e;
  }
  const int lo = r.category_totals[r.least_frequent];
  if (lo > 0) r.imbalance_ratio = static_cast<double>(r.category_totals[r.most_frequent]) / lo;
  r.gap_threshold = gap_threshold;
  r.gaps = detect_gaps(matrix, gap_threshold);
  r.match = match;
  if (match) {
    for (const auto& [category, m] : match->per_category) {
      if (m.avg_conf && m.match_pct < kFlagMaxMatchPct && *m.avg_conf > kFlagMinConfidence) {
        r.flags.push_back(ConfidenceFlag{category, m.match_pct, *m.avg_conf});
      }
    }
  }
  return r;
}

nlohmann::json audit_report_json(const AuditReport& r) {
  Json j = Json::object();
  j["convention"] = r.convention;
  Json speakers = Json::array();
  for (const auto& [speaker, row] : r.matrix.rows()) {
    Json counts = Json::object();
    for (CorpusEmotion e : kCorpusEmotions) counts[std::string(to_string(e))] = row.counts[index_of(e)];
    speakers.push_back({{"speaker", speaker},
                        {"gender", std::string(to_string(row.gender))},
                        {"counts", counts},
                        {"total", r.matrix.row_total(speaker)}});
  }
  j["matrix"] = {{"speakers", speakers}, {"grand_total", r.matrix.grand_total()}};
  Json totals = Json::object();
  for (const auto& [e, n] : r.category_totals) totals[std::string(to_string(e))] = n;
  j["category_totals"] = totals;
  j["imbalance"] = {{"most_frequent", std::string(to_string(r.most_frequent))},
                    {"least_frequent", std::string(to_string(r.least_frequent))},
                    {"ratio", r.imbalance_ratio ? Json(*r.imbalance_ratio) : Json(nullptr)}};
  Json gaps = Json::array();
  for (const auto& g : r.gaps) {
    gaps.push_back({{"speaker", g.speaker_id}, {"emotion", std::string(to_string(g.emotion))},
                    {"count", g.count}});
  }
  j["gaps"] = {{"threshold", r.gap_threshold}, {"cells", gaps}};
  if (r.match) {
    Json categories = Json::object();
    for (const auto& [e, m] : r.match->per_category) {
      categories[std::string(to_string(e))] = {
          {"n", m.n},
          {"matched", m.matched},
          {"unmatched", m.unmatched},
          {"match_pct", m.match_pct},
          {"avg_conf", m.avg_conf ? Json(*m.avg_conf) : Json(nullptr)}};
    }
    j["annotation"] = {
        {"per_category", categories},
        {"total_n", r.match->total_n},
        {"total_match_pct", r.match->total_match_pct},
        {"total_avg_conf", r.match->total_avg_conf ? Json(*r.match->total_avg_conf) : Json(nullptr)},
        {"unmatched_labels", r.match->unmatched_labels}};
    Json flags = Json::array();
    for (const auto& f : r.flags) {
      flags.push_back({{"category", std::string(to_string(f.category))},
                       {"match_pct", f.match_pct},
                       {"avg_conf", f.avg_conf}});
    }
    j["confident_but_wrong"] = flags;
  } else {
    j["annotation"] = nullptr;
    j["confident_but_wrong"] = Json::array();
  }
  return j;
}

std::string audit_report_text(const AuditReport& r) {
  std::ostringstream out;
  out << "Corpus audit (filename convention: " << r.convention << ")\n\n";
  out << "Speaker  G";
  for (CorpusEmotion e : kCorpusEmotions) out << "  " << to_string(e).substr(0, 3);
  out << "  Total\n";
  for (const auto& [speaker, row] : r.matrix.rows()) {
    out << speaker << std::string(speaker.size() < 7 ? 7 - speaker.size() : 1, ' ') << "  "
        << to_string(row.gender);
    for (CorpusEmotion e : kCorpusEmotions) {
      std::string cell = std::to_string(row.counts[index_of(e)]);
      out << std::string(5 - std::min<std::size_t>(cell.size(), 4), ' ') << cell;
    }
    out << "  " << r.matrix.row_total(speaker) << '\n';
  }
  out << "Total     ";
  for (CorpusEmotion e : kCorpusEmotions) {
    std::string cell = std::to_string(r.category_totals.at(e));
    out << std::string(5 - std::min<std::size_t>(cell.size(), 4), ' ') << cell;
  }
  out << "  " << r.matrix.grand_total() << "\n\n";

  const double total = r.matrix.grand_total();
  out << "Most frequent:  " << to_string(r.most_frequent) << " (n = "
      << r.category_totals.at(r.most_frequent) << ", "
      << pct(100.0 * r.category_totals.at(r.most_frequent) / total) << " %)\n";
  out << "Least frequent: " << to_string(r.least_frequent) << " (n = "
      << r.category_totals.at(r.least_frequent) << ", "
      << pct(100.0 * r.category_totals.at(r.least_frequent) / total) << " %)\n";
  out << "Imbalance ratio: " << (r.imbalance_ratio ? fixed2(*r.imbalance_ratio) : "undefined")
      << "\n\n";

  out << "Cells with count <= " << r.gap_threshold << ":\n";
  if (r.gaps.empty()) out << "  none\n";
  for (const auto& g : r.gaps) {
    out << "  speaker " << g.speaker_id << ", " << to_string(g.emotion) << ": " << g.count << '\n';
  }
  if (r.match) {
    out << "\nAnnotation match rates (n = " << r.match->total_n << ", total "
        << pct(r.match->total_match_pct) << " %";
    if (r.match->total_avg_conf) out << ", mean confidence " << fixed2(*r.match->total_avg_conf);
    out << "):\n";
    for (const auto& [e, m] : r.match->per_category) {
      out << "  " << to_string(e) << ": " << pct(m.match_pct) << " % of " << m.n;
      if (m.avg_conf) out << ", confidence " << fixed2(*m.avg_conf);
      if (m.unmatched) out << ", " << m.unmatched << " unmapped labels";
      out << '\n';
    }
    out << "\nConfident but wrong (match < " << kFlagMaxMatchPct << " %, confidence > "
        << kFlagMinConfidence << "):\n";
    if (r.flags.empty()) out << "  none\n";
    for (const auto& f : r.flags) {
      out << "  " << to_string(f.category) << ": " << pct(f.match_pct) << " % match at confidence "
          << fixed2(f.avg_conf) << '\n';
    }
  }
  return out.str();
}

}  // namespace pathoscope::emodb
