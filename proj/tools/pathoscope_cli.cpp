// pathoscope: command-line front end.
//
// Exit codes: 0 ok, 2 input/schema, 3 join, 4 transport, 5 degenerate statistics.
// Warnings go to stderr as "warning[<code>]: <message>".

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathoscope/annotator.hpp"
#include "pathoscope/bundled.hpp"
#include "pathoscope/circumplex.hpp"
#include "pathoscope/diagnostics.hpp"
#include "pathoscope/emodb_audit.hpp"
#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"
#include "pathoscope/labelmap.hpp"
#include "pathoscope/pipeline.hpp"
#include "pathoscope/rankstats.hpp"

namespace {

using namespace pathoscope;

// Unmatched labels listed individually before the rest are summarized.
constexpr std::size_t kMaxUnmatchedWarnings = 10;

void emit(const std::string& path, std::string_view text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

circumplex::WeightTable weights_from(const std::string& path) {
  return path.empty() ? circumplex::default_weight_table() : circumplex::load_weight_table(path);
}

struct TableOptions {
  bool bundled = false;
  std::string segments;
  std::string e2v;
  std::string llm;
  std::string trust;
  std::string weights;
  bool keep_irrelevant = false;
  bool filter_opt_in = false;  // ingest: filter only when --filter is given
  bool filter = false;
};

void add_table_options(CLI::App* sub, TableOptions& o, bool filter_flag_is_opt_in = false) {
  auto* bundled = sub->add_flag("--bundled", o.bundled, "Use the bundled 41-segment dataset");
  auto* segments = sub->add_option("--segments", o.segments, "segments.json");
  bundled->excludes(segments);
  sub->add_option("--e2v", o.e2v, "e2v_probs.json (segment_id -> eight-class probabilities)")
      ->excludes(bundled);
  sub->add_option("--llm", o.llm, "LLM annotations in response format")->excludes(bundled);
  sub->add_option("--trust", o.trust, "trust_scores.json (segment_id -> {pathos, relevant})")
      ->excludes(bundled);
  sub->add_option("--weights", o.weights, "Circumplex weights JSON (default: built-in table)");
  o.filter_opt_in = filter_flag_is_opt_in;
  if (filter_flag_is_opt_in) {
    sub->add_flag("--filter", o.filter, "Drop segments marked irrelevant");
  } else {
    sub->add_flag("--keep-irrelevant", o.keep_irrelevant,
                  "Skip the relevance filter and analyse every segment");
  }
}

pipeline::AnalysisTable load_table(const TableOptions& o, Diagnostics& diagnostics) {
  pipeline::AnalysisTable table;
  if (o.bundled) {
    table = pipeline::make_table(bundled_appendix_b(), {{"segments", "bundled:appendix_b"}});
  } else {
    if (o.segments.empty()) throw InputError("either --bundled or --segments is required");
    pipeline::IngestPaths paths{o.segments, opt_path(o.e2v), opt_path(o.llm), opt_path(o.trust)};
    table = pipeline::ingest(paths, weights_from(o.weights), diagnostics);
  }
  if (o.filter_opt_in ? !o.filter : o.keep_irrelevant) return table;
  return pipeline::apply_relevance_filter(table, diagnostics);
}

std::vector<emodb::UtteranceMeta> load_manifest(const std::string& manifest,
                                                const std::string& convention) {
  const auto conv = convention.empty() ? emodb::default_convention() : emodb::load_convention(convention);
  const auto names = emodb::read_manifest(manifest);
  return emodb::parse_manifest(names, conv);
}

labelmap::MatchReport corpus_match(const std::vector<emodb::UtteranceMeta>& metas,
                                   const std::string& annotations, const std::string& mapping,
                                   Diagnostics& diagnostics) {
  const auto parsed = annotator::parse_response(read_text_file(annotations));
  for (const auto& bad : parsed.rejected) {
    diagnostics.warn(warning_code::kDegradedAnnotation, bad.segment_id + ": " + bad.message);
  }
  const auto records = emodb::label_annotations(metas, parsed.response.annotations);
  const auto table = mapping.empty() ? labelmap::default_mapping_table() : labelmap::load_mapping(mapping);
  auto report = labelmap::match_report(records, table);
  std::size_t listed = 0;
  std::size_t rest = 0;
  for (const auto& [label, n] : report.unmatched_labels) {
    if (listed < kMaxUnmatchedWarnings) {
      diagnostics.warn(warning_code::kUnmatchedLabel,
                       "'" + label + "' (" + std::to_string(n) + "x) has no mapping");
      ++listed;
    } else {
      rest += n;
    }
  }
  if (rest > 0) {
    diagnostics.warn(warning_code::kUnmatchedLabel,
                     std::to_string(rest) + " further occurrences of unmapped labels");
  }
  return report;
}

std::vector<std::string> split_channels(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string::npos ? csv.size() : comma;
    if (end > start) out.push_back(csv.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion-channel analysis for political speech and acted-corpus audits."};
  app.require_subcommand(1);
  app.footer(std::string("Live annotation reads its bearer credential from $") +
             annotator::kCredentialEnvVar +
             ".\nExit codes: 0 ok, 2 input/schema, 3 join, 4 transport, 5 degenerate statistics.");

  Diagnostics diagnostics;
  std::vector<std::pair<CLI::App*, std::function<void()>>> commands;
  std::string out;

  // project
  std::string probs_path, project_weights;
  auto* project = app.add_subcommand("project", "Project e2v class probabilities onto arousal/valence");
  project->add_option("--probs", probs_path, "e2v_probs.json")->required();
  project->add_option("--weights", project_weights, "Circumplex weights JSON");
  project->add_option("-o,--output", out, "Output JSON (default stdout)");
  commands.emplace_back(project, [&] {
    const auto weights = weights_from(project_weights);
    const auto doc = parse_e2v_probs(read_text_file(probs_path));
    Json result = Json::object();
    for (const auto& [id, p] : doc.probs) result[id] = to_json(circumplex::project(p, weights));
    emit(out, result.dump(2) + "\n");
  });

  // correlate
  TableOptions corr_opts;
  std::string method_name = "t_approx";
  rankstats::PermutationOptions perm;
  bool strict = false;
  auto* correlate = app.add_subcommand("correlate", "Spearman correlation suite (correlations.csv)");
  add_table_options(correlate, corr_opts);
  correlate->add_option("--method", method_name, "p-value method")
      ->check(CLI::IsMember({"t_approx", "permutation"}));
  correlate->add_option("--permutations", perm.permutations, "Permutation draws")
      ->check(CLI::PositiveNumber);
  correlate->add_option("--seed", perm.seed, "Permutation seed");
  correlate->add_flag("--strict", strict, "Fail (exit 5) when any comparison is unavailable");
  correlate->add_option("-o,--output", out, "Output CSV (default stdout)");
  commands.emplace_back(correlate, [&] {
    const auto table = load_table(corr_opts, diagnostics);
    const auto method = *rankstats::p_value_method_from_string(method_name);
    const auto suite = pipeline::correlation_suite(table, method, perm, &diagnostics);
    for (const auto& c : suite.comparisons) {
      if (strict && !c.result) throw DegenerateStatisticsError(c.name + ": " + c.unavailable_reason);
    }
    emit(out, pipeline::correlations_csv(suite));
  });

  // describe
  TableOptions desc_opts;
  auto* describe = app.add_subcommand("describe", "Descriptive statistics per channel (descriptives.csv)");
  add_table_options(describe, desc_opts);
  describe->add_option("-o,--output", out, "Output CSV (default stdout)");
  commands.emplace_back(describe, [&] {
    const auto table = load_table(desc_opts, diagnostics);
    emit(out, pipeline::descriptives_csv(pipeline::descriptive_suite(table, diagnostics)));
  });

  // rhetoric
  TableOptions rhet_opts;
  auto* rhetoric = app.add_subcommand("rhetoric", "Rhetorical-function distribution (rhetoric.csv)");
  add_table_options(rhetoric, rhet_opts);
  rhetoric->add_option("-o,--output", out, "Output CSV (default stdout)");
  commands.emplace_back(rhetoric, [&] {
    const auto table = load_table(rhet_opts, diagnostics);
    emit(out, pipeline::rhetoric_csv(pipeline::rhetoric_distribution(table)));
  });

  // timeseries
  TableOptions ts_opts;
  bool figure1 = false;
  std::string channels_arg, format = "csv";
  auto* timeseries = app.add_subcommand("timeseries", "Export per-segment channels as CSV or SVG");
  add_table_options(timeseries, ts_opts);
  timeseries->add_flag("--figure1", figure1, "Use the bundled 51-point series")
      ->excludes("--bundled")
      ->excludes("--segments");
  timeseries->add_option("--channels", channels_arg, "Comma-separated channel names (default all)");
  timeseries->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  timeseries->add_option("-o,--output", out, "Output file (default stdout)");
  commands.emplace_back(timeseries, [&] {
    pipeline::TimeSeriesFrame frame =
        figure1 ? pipeline::frame_from_figure1(bundled_figure1_series())
                : pipeline::frame_from_table(load_table(ts_opts, diagnostics));
    if (!channels_arg.empty()) frame = pipeline::select_channels(frame, split_channels(channels_arg));
    emit(out, format == "svg" ? pipeline::timeseries_svg(frame) : pipeline::timeseries_csv(frame));
  });

  // emodb-audit
  std::string manifest, convention, annotations, mapping, audit_format = "json";
  bool bundled_counts = false;
  int gap_threshold = emodb::kDefaultGapThreshold;
  auto* audit = app.add_subcommand("emodb-audit", "Corpus audit from filename metadata (audit.json)");
  auto* manifest_opt = audit->add_option("--manifest", manifest, "File list, one name per line");
  audit->add_flag("--bundled-counts", bundled_counts, "Audit the bundled speaker x emotion counts")
      ->excludes(manifest_opt);
  audit->add_option("--convention", convention, "Filename convention JSON");
  audit->add_option("--annotations", annotations, "Annotations keyed by filename stem")
      ->needs(manifest_opt);
  audit->add_option("--mapping", mapping, "Label mapping JSON (default: built-in)");
  audit->add_option("--gap-threshold", gap_threshold, "Report cells with count <= threshold")
      ->check(CLI::NonNegativeNumber);
  audit->add_option("--format", audit_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  audit->add_option("-o,--output", out, "Output file (default stdout)");
  commands.emplace_back(audit, [&] {
    std::optional<SpeakerEmotionMatrix> matrix;
    std::optional<labelmap::MatchReport> match;
    std::string conv_name;
    if (bundled_counts) {
      matrix = bundled_table6_counts();
      conv_name = "bundled:table6_counts";
    } else {
      if (manifest.empty()) throw InputError("either --manifest or --bundled-counts is required");
      const auto conv = convention.empty() ? emodb::default_convention() : emodb::load_convention(convention);
      const auto metas = emodb::parse_manifest(emodb::read_manifest(manifest), conv);
      matrix = emodb::build_matrix(metas, conv);
      conv_name = conv.name;
      if (!annotations.empty()) match = corpus_match(metas, annotations, mapping, diagnostics);
    }
    const auto report = emodb::audit_report(*matrix, match, conv_name, gap_threshold);
    emit(out, audit_format == "text" ? emodb::audit_report_text(report)
                                     : emodb::audit_report_json(report).dump(2) + "\n");
  });

  // match-rate
  std::string mr_manifest, mr_convention, mr_annotations, mr_mapping;
  auto* match_rate = app.add_subcommand("match-rate", "Open-ended label match rates per category (CSV)");
  match_rate->add_option("--manifest", mr_manifest, "File list, one name per line")->required();
  match_rate->add_option("--annotations", mr_annotations, "Annotations keyed by filename stem")->required();
  match_rate->add_option("--convention", mr_convention, "Filename convention JSON");
  match_rate->add_option("--mapping", mr_mapping, "Label mapping JSON (default: built-in)");
  match_rate->add_option("-o,--output", out, "Output CSV (default stdout)");
  commands.emplace_back(match_rate, [&] {
    const auto metas = load_manifest(mr_manifest, mr_convention);
    emit(out, labelmap::match_report_csv(corpus_match(metas, mr_annotations, mr_mapping, diagnostics)));
  });

  // annotate
  std::string an_segments, audio_ref, fixture, endpoint, audio_ref_template;
  bool per_segment = false, print_request = false;
  int retries = annotator::RetryPolicy{}.max_attempts;
  int timeout_s = 300;
  std::size_t jobs = 1;
  auto* annotate = app.add_subcommand(
      "annotate", std::string("Open-ended LLM annotation (live or fixture replay). Live mode sends $") +
                      annotator::kCredentialEnvVar + " as a bearer token.");
  annotate->add_option("--segments", an_segments, "segments.json")->required();
  auto* ref_opt = annotate->add_option("--audio-ref", audio_ref, "Reference to the full speech audio");
  auto* per_opt = annotate->add_flag("--per-segment", per_segment, "One request per segment");
  annotate->add_option("--audio-ref-template", audio_ref_template,
                       "Per-segment audio reference; {id} is replaced by the segment id")
      ->needs(per_opt);
  per_opt->excludes(ref_opt);
  auto* fixture_opt = annotate->add_option("--fixture", fixture, "Replay a recorded response");
  annotate->add_option("--endpoint", endpoint, "Live endpoint URL")->excludes(fixture_opt);
  annotate->add_option("--retries", retries, "Attempts per live request")->check(CLI::PositiveNumber);
  annotate->add_option("--timeout", timeout_s, "Live request timeout in seconds")->check(CLI::PositiveNumber);
  annotate->add_option("--jobs", jobs, "Concurrent per-segment requests")->check(CLI::PositiveNumber);
  annotate->add_flag("--print-request", print_request, "Write the request body(ies) and exit");
  annotate->add_option("-o,--output", out, "Output response JSON (default stdout)");
  commands.emplace_back(annotate, [&] {
    const auto segments = parse_segments(read_text_file(an_segments));
    std::vector<annotator::AnnotationRequest> requests;
    if (per_segment) {
      if (audio_ref_template.find("{id}") == std::string::npos) {
        throw InputError("--per-segment needs --audio-ref-template containing {id}");
      }
      std::vector<std::string> refs;
      for (const auto& s : segments) {
        std::string ref = audio_ref_template;
        ref.replace(ref.find("{id}"), 4, s.segment_id);
        refs.push_back(std::move(ref));
      }
      requests = annotator::build_per_segment_requests(segments, refs);
    } else {
      if (audio_ref.empty()) throw InputError("--audio-ref is required");
      requests.push_back(annotator::build_request(audio_ref, segments));
    }
    if (print_request) {
      std::string bodies;
      for (const auto& r : requests) bodies += annotator::request_body(r) + "\n";
      emit(out, bodies);
      return;
    }
    std::unique_ptr<annotator::Transport> transport;
    if (!fixture.empty()) {
      transport = std::make_unique<annotator::FixtureTransport>(fixture);
    } else if (!endpoint.empty()) {
      const char* token = std::getenv(annotator::kCredentialEnvVar);
      transport = std::make_unique<annotator::HttpTransport>(endpoint, token ? token : "",
                                                             std::chrono::seconds(timeout_s));
    } else {
      throw InputError("either --fixture or --endpoint is required");
    }
    annotator::RetryPolicy retry;
    retry.max_attempts = retries;
    annotator::AnnotationResponse merged;
    for (const auto& parsed : annotator::annotate_each(requests, *transport, jobs, retry)) {
      for (const auto& bad : parsed.rejected) {
        diagnostics.warn(warning_code::kDegradedAnnotation, bad.segment_id + ": " + bad.message);
      }
      merged.annotations.insert(parsed.response.annotations.begin(), parsed.response.annotations.end());
    }
    emit(out, annotator::serialize_response(merged));
  });

  // ingest
  TableOptions ingest_opts;
  auto* ingest = app.add_subcommand("ingest", "Join channel files onto the segments and write segments.json");
  add_table_options(ingest, ingest_opts, true);
  ingest->add_option("-o,--output", out, "Output segments JSON (default stdout)");
  commands.emplace_back(ingest, [&] {
    const auto table = load_table(ingest_opts, diagnostics);
    emit(out, serialize_segments(table.rows));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kInput);
  }

  auto flush_warnings = [&] {
    for (const auto& d : diagnostics.entries()) {
      std::cerr << "warning[" << d.code << "]: " << d.message << "\n";
    }
  };
  try {
    for (auto& [sub, run] : commands) {
      if (sub->parsed()) run();
    }
  } catch (const Error& e) {
    flush_warnings();
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    flush_warnings();
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kInput);
  }
  flush_warnings();
  return 0;
}
