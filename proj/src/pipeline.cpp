#include "pathoscope/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "pathoscope/annotator.hpp"
#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"

namespace pathoscope::pipeline {
namespace {

struct ComparisonSpec {
  const char* name;
  Channel x;
  Channel y;
};

constexpr std::array<ComparisonSpec, 6> kComparisons{{
    {"gemV_pathos", Channel::kGemValence, Channel::kPathos},
    {"gemA_pathos", Channel::kGemArousal, Channel::kPathos},
    {"e2vV_pathos", Channel::kE2vValence, Channel::kPathos},
    {"e2vA_pathos", Channel::kE2vArousal, Channel::kPathos},
    {"e2vA_gemA", Channel::kE2vArousal, Channel::kGemArousal},
    {"e2vV_gemV", Channel::kE2vValence, Channel::kGemValence},
}};

constexpr std::array<std::string_view, 5> kChannelNames{"gem_arousal", "gem_valence",
                                                        "e2v_arousal", "e2v_valence", "pathos"};

std::size_t find_row(const std::map<std::string, std::size_t>& index, const std::string& id,
                     std::string_view channel) {
  const auto it = index.find(id);
  if (it == index.end()) {
    throw JoinError("unknown segment_id '" + id + "' in " + std::string(channel));
  }
  return it->second;
}

// Fixed two-decimal coordinate text.
std::string coord(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Style {
  const char* color;
  const char* dash;  // empty for solid
};

Style style_for(std::string_view channel) {
  if (channel == "gem_valence") return {"#008080", ""};
  if (channel == "e2v_arousal") return {"#1f4fd1", "6 4"};
  if (channel == "gem_arousal") return {"#c0392b", ""};
  if (channel == "e2v_valence") return {"#7f8c8d", "2 3"};
  return {"#8e44ad", ""};
}

}  // namespace

AnalysisTable make_table(std::vector<SegmentRecord> rows,
                         std::map<std::string, std::string> provenance) {
  std::set<std::string> ids;
  for (const auto& r : rows) {
    if (!ids.insert(r.segment_id).second) throw InputError("duplicate segment id " + r.segment_id);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SegmentRecord& a, const SegmentRecord& b) {
    return a.start_s < b.start_s;
  });
  return AnalysisTable{std::move(rows), std::move(provenance)};
}

AnalysisTable ingest_documents(const IngestSources& sources,
                               const circumplex::WeightTable& weights,
                               Diagnostics& diagnostics) {
  std::vector<SegmentRecord> rows = parse_segments(sources.segments);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!index.emplace(rows[i].segment_id, i).second) {
      throw InputError("duplicate segment id " + rows[i].segment_id);
    }
  }
  std::map<std::string, std::string> provenance{{"segments", "segments"}};

  if (sources.e2v_probs) {
    const auto doc = parse_e2v_probs(*sources.e2v_probs);
    for (const auto& [id, probs] : doc.probs) {
      auto& row = rows[find_row(index, id, "e2v_probs")];
      row.e2v_probs = probs;
      row.e2v_point = circumplex::project(probs, weights);
    }
    std::string source = "e2v_probs";
    if (doc.meta.is_object() && doc.meta.contains("model_id") && doc.meta["model_id"].is_string()) {
      source += " (" + doc.meta["model_id"].get<std::string>() + ")";
    }
    provenance["e2v"] = source;
  }

  if (sources.llm_annotations) {
    const auto parsed = annotator::parse_response(*sources.llm_annotations);
    for (const auto& [id, annotation] : parsed.response.annotations) {
      rows[find_row(index, id, "llm_annotations")].llm_annotation = annotation;
    }
    for (const auto& bad : parsed.rejected) {
      rows[find_row(index, bad.segment_id, "llm_annotations")].llm_annotation.reset();
      diagnostics.warn(warning_code::kDegradedAnnotation,
                       "segment " + bad.segment_id + ": annotation dropped: " + bad.message);
    }
    provenance["llm"] = "llm_annotations";
  }

  if (sources.trust_scores) {
    for (const auto& [id, score] : parse_trust_scores(*sources.trust_scores)) {
      auto& row = rows[find_row(index, id, "trust_scores")];
      row.pathos = score.pathos;
      row.relevant = score.relevant;
    }
    provenance["trust"] = "trust_scores";
  }

  for (const auto& r : rows) r.validate();
  return make_table(std::move(rows), std::move(provenance));
}

AnalysisTable ingest(const IngestPaths& paths, const circumplex::WeightTable& weights,
                     Diagnostics& diagnostics) {
  IngestSources sources;
  sources.segments = read_text_file(paths.segments);
  if (paths.e2v_probs) sources.e2v_probs = read_text_file(*paths.e2v_probs);
  if (paths.llm_annotations) sources.llm_annotations = read_text_file(*paths.llm_annotations);
  if (paths.trust_scores) sources.trust_scores = read_text_file(*paths.trust_scores);
  AnalysisTable table = ingest_documents(sources, weights, diagnostics);
  table.provenance["segments"] = paths.segments.string();
  if (paths.e2v_probs) {
    const auto model = table.provenance["e2v"].substr(std::string("e2v_probs").size());
    table.provenance["e2v"] = paths.e2v_probs->string() + model;
  }
  if (paths.llm_annotations) table.provenance["llm"] = paths.llm_annotations->string();
  if (paths.trust_scores) table.provenance["trust"] = paths.trust_scores->string();
  return table;
}

AnalysisTable apply_relevance_filter(const AnalysisTable& table, Diagnostics& diagnostics) {
  AnalysisTable out;
  out.provenance = table.provenance;
  for (const auto& r : table.rows) {
    if (r.relevant) out.rows.push_back(r);
  }
  const std::size_t removed = table.rows.size() - out.rows.size();
  if (removed > 0) {
    diagnostics.warn(warning_code::kFilteredRows,
                     std::to_string(removed) + " of " + std::to_string(table.rows.size()) +
                         " segments removed by the relevance filter");
  }
  if (out.rows.empty()) {
    diagnostics.warn(warning_code::kEmptyTable, "no segments left after the relevance filter");
  }
  return out;
}

std::string_view channel_name(Channel c) { return kChannelNames[static_cast<std::size_t>(c)]; }

std::optional<Channel> channel_from_name(std::string_view name) {
  for (Channel c : kChannels) {
    if (channel_name(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<std::optional<double>> channel_values(const AnalysisTable& table, Channel c) {
  std::vector<std::optional<double>> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    switch (c) {
      case Channel::kGemArousal:
        out.push_back(r.llm_annotation ? std::optional(r.llm_annotation->arousal) : std::nullopt);
        break;
      case Channel::kGemValence:
        out.push_back(r.llm_annotation ? std::optional(r.llm_annotation->valence) : std::nullopt);
        break;
      case Channel::kE2vArousal:
        out.push_back(r.e2v_point ? std::optional(r.e2v_point->arousal()) : std::nullopt);
        break;
      case Channel::kE2vValence:
        out.push_back(r.e2v_point ? std::optional(r.e2v_point->valence()) : std::nullopt);
        break;
      case Channel::kPathos:
        out.push_back(r.pathos ? std::optional<double>(r.pathos->value()) : std::nullopt);
        break;
    }
  }
  return out;
}

const Comparison& CorrelationSuiteResult::get(std::string_view name) const {
  for (const auto& c : comparisons) {
    if (c.name == name) return c;
  }
  throw InputError("unknown comparison " + std::string(name));
}

CorrelationSuiteResult correlation_suite(const AnalysisTable& table,
                                         rankstats::PValueMethod method,
                                         const rankstats::PermutationOptions& options,
                                         Diagnostics* diagnostics) {
  CorrelationSuiteResult suite;
  for (const auto& spec : kComparisons) {
    Comparison c{spec.name, spec.x, spec.y, 0, std::nullopt, {}};
    const auto xs = channel_values(table, spec.x);
    const auto ys = channel_values(table, spec.y);
    const auto [x, y] = rankstats::pairwise_complete(xs, ys);
    c.n_pairs = x.size();
    try {
      c.result = rankstats::spearman(x, y, method, options);
    } catch (const DegenerateStatisticsError& e) {
      c.unavailable_reason = e.what();
      if (diagnostics) {
        diagnostics->warn(warning_code::kComparisonUnavailable, c.name + ": " + e.what());
      }
    }
    suite.comparisons.push_back(std::move(c));
  }
  return suite;
}

std::vector<std::pair<Channel, rankstats::DescriptiveStats>> descriptive_suite(
    const AnalysisTable& table, Diagnostics& diagnostics) {
  std::vector<std::pair<Channel, rankstats::DescriptiveStats>> out;
  for (Channel c : kChannels) {
    std::vector<double> values;
    for (const auto& v : channel_values(table, c)) {
      if (v) values.push_back(*v);
    }
    if (values.empty()) {
      diagnostics.warn(warning_code::kEmptyChannel,
                       "channel " + std::string(channel_name(c)) + " has no values");
      continue;
    }
    out.emplace_back(c, rankstats::describe(values));
  }
  return out;
}

std::vector<RhetoricCount> rhetoric_distribution(const AnalysisTable& table) {
  std::map<std::string, std::size_t> counts;
  std::size_t annotated = 0;
  for (const auto& r : table.rows) {
    if (!r.llm_annotation) continue;
    ++annotated;
    ++counts[r.llm_annotation->rhetorical_function];
  }
  std::vector<RhetoricCount> out;
  for (const auto& [label, n] : counts) {
    out.push_back(RhetoricCount{label, n, 100.0 * static_cast<double>(n) / annotated});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RhetoricCount& a, const RhetoricCount& b) { return a.n > b.n; });
  return out;
}

TimeSeriesFrame frame_from_table(const AnalysisTable& table) {
  TimeSeriesFrame f;
  f.length = table.rows.size();
  for (Channel c : kChannels) {
    f.channels.emplace_back(channel_name(c));
    f.columns.push_back(channel_values(table, c));
  }
  return f;
}

TimeSeriesFrame frame_from_figure1(const Figure1Series& series) {
  TimeSeriesFrame f;
  f.length = series.size();
  f.channels = {"gem_valence", "e2v_arousal", "pathos"};
  f.columns = {series.gem_valence, series.e2v_arousal, series.pathos};
  return f;
}

TimeSeriesFrame select_channels(const TimeSeriesFrame& frame, std::span<const std::string> names) {
  TimeSeriesFrame out;
  out.length = frame.length;
  for (const auto& name : names) {
    const auto it = std::find(frame.channels.begin(), frame.channels.end(), name);
    if (it == frame.channels.end()) {
      std::string known;
      for (const auto& c : frame.channels) known += (known.empty() ? "" : ", ") + c;
      throw InputError("unknown channel '" + name + "' (available: " + known + ")");
    }
    out.channels.push_back(name);
    out.columns.push_back(frame.columns[static_cast<std::size_t>(it - frame.channels.begin())]);
  }
  return out;
}

std::string timeseries_csv(const TimeSeriesFrame& frame) {
  std::string out = "index";
  for (const auto& c : frame.channels) out += ',' + c;
  out += '\n';
  for (std::size_t i = 0; i < frame.length; ++i) {
    out += std::to_string(i);
    for (const auto& column : frame.columns) {
      out += ',';
      if (column[i]) out += format_double(*column[i]);
    }
    out += '\n';
  }
  return out;
}

std::string timeseries_svg(const TimeSeriesFrame& frame) {
  constexpr double kWidth = 900, kHeight = 360;
  constexpr double kLeft = 60, kRight = 20, kTop = 20, kBottom = 70;
  constexpr double kYMin = -1.2, kYMax = 1.2;
  const double x_max = static_cast<double>(frame.length) + 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double i) { return kLeft + i / x_max * plot_w; };
  auto py = [&](double v) { return kTop + (kYMax - v) / (kYMax - kYMin) * plot_h; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
       coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + ' ' + coord(kHeight) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + coord(kWidth) + "\" height=\"" + coord(kHeight) +
       "\" fill=\"white\"/>\n";
  // grid and axes
  for (double v = kYMin; v <= kYMax + 1e-9; v += 0.4) {
    s += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(py(v)) + "\" x2=\"" +
         coord(kLeft + plot_w) + "\" y2=\"" + coord(py(v)) +
         "\" stroke=\"#dddddd\" stroke-dasharray=\"1 2\"/>\n";
    s += "<text x=\"" + coord(kLeft - 6) + "\" y=\"" + coord(py(v) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + coord(v == 0.0 ? 0.0 : v).substr(0, 5) +
         "</text>\n";
  }
  for (std::size_t i = 0; i <= frame.length; i += 10) {
    s += "<text x=\"" + coord(px(static_cast<double>(i))) + "\" y=\"" + coord(kTop + plot_h + 16) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + std::to_string(i) + "</text>\n";
  }
  s += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" + coord(plot_w) +
       "\" height=\"" + coord(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + coord(kLeft + plot_w / 2) + "\" y=\"" + coord(kTop + plot_h + 34) +
       "\" font-size=\"12\" text-anchor=\"middle\">Segment index</text>\n";

  for (std::size_t c = 0; c < frame.channels.size(); ++c) {
    const auto& name = frame.channels[c];
    const auto& column = frame.columns[c];
    const Style st = style_for(name);
    s += "<g id=\"" + xml_escape(name) + "\">\n";
    if (name == "pathos") {
      for (std::size_t i = 0; i < frame.length; ++i) {
        if (!column[i]) continue;
        s += "<circle cx=\"" + coord(px(static_cast<double>(i))) + "\" cy=\"" +
             coord(py(*column[i])) + "\" r=\"4.00\" fill=\"" + st.color + "\"/>\n";
      }
    } else {
      // one polyline per run of present values
      std::string points;
      auto flush = [&]() {
        if (points.empty()) return;
        s += "<polyline fill=\"none\" stroke=\"" + std::string(st.color) + "\" stroke-width=\"1.50\"";
        if (*st.dash) s += " stroke-dasharray=\"" + std::string(st.dash) + "\"";
        s += " points=\"" + points + "\"/>\n";
        points.clear();
      };
      for (std::size_t i = 0; i < frame.length; ++i) {
        if (!column[i]) {
          flush();
          continue;
        }
        if (!points.empty()) points += ' ';
        points += coord(px(static_cast<double>(i))) + ',' + coord(py(*column[i]));
      }
      flush();
    }
    s += "</g>\n";
    const double lx = kLeft + static_cast<double>(c) * 180.0;
    const double ly = kHeight - 14;
    s += "<rect x=\"" + coord(lx) + "\" y=\"" + coord(ly - 9) + "\" width=\"12.00\" height=\"8.00\" fill=\"" +
         st.color + "\"/>\n";
    s += "<text x=\"" + coord(lx + 16) + "\" y=\"" + coord(ly) + "\" font-size=\"12\">" +
         xml_escape(name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string correlations_csv(const CorrelationSuiteResult& suite) {
  std::string out = "comparison,rho,p,n\n";
  for (const auto& c : suite.comparisons) {
    out += c.name + ',';
    if (c.result) out += format_double(c.result->rho) + ',' + format_double(c.result->p_value);
    else out += ',';
    out += ',' + std::to_string(c.n_pairs) + '\n';
  }
  return out;
}

std::string descriptives_csv(
    const std::vector<std::pair<Channel, rankstats::DescriptiveStats>>& stats) {
  std::string out = "channel,n,mean,sd,min,max\n";
  for (const auto& [c, s] : stats) {
    out += std::string(channel_name(c)) + ',' + std::to_string(s.n) + ',' + format_double(s.mean) +
           ',' + format_double(s.sd) + ',' + format_double(s.min) + ',' + format_double(s.max) + '\n';
  }
  return out;
}

std::string rhetoric_csv(const std::vector<RhetoricCount>& counts) {
  std::string out = "rhetorical_function,n,pct\n";
  for (const auto& c : counts) {
    out += csv_field(c.label) + ',' + std::to_string(c.n) + ',' + format_double(c.pct) + '\n';
  }
  return out;
}

}  // namespace pathoscope::pipeline
