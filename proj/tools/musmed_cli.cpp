// musmed command-line front end.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "musmed/digest.hpp"
#include "musmed/dsp.hpp"
#include "musmed/evaluation.hpp"
#include "musmed/session.hpp"
#include "musmed/wav.hpp"

using namespace musmed;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kBackend = 3, kExhausted = 4 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kBackendRejected:
    case ErrorCode::kBadAudio:
    case ErrorCode::kGenerationFailed:
      return kBackend;
    default:
      return kInput;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

// One row per non-empty line, comma-separated numbers; '#' starts a comment line.
std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) {
      const auto b = f.find_first_not_of(" \t"), e = f.find_last_not_of(" \t");
      if (b == std::string::npos) throw Error(ErrorCode::kMalformedLine, path + ":" + std::to_string(lineno) + ": empty field");
      f = f.substr(b, e - b + 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::kMalformedLine, path + ":" + std::to_string(lineno) + ": not a number '" + f + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<int> to_labels(const std::vector<double>& row) {
  std::vector<int> out;
  for (double v : row) {
    if (v != 0.0 && v != 1.0) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// Flags that override a base config only when given on the command line.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> from, to, backend, endpoint, instrument, genre, mapping, stats, classifier;
  std::optional<double> duration, clip_duration, conditioning, temperature, timeout, tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> top_m;
  std::optional<int> max_retries;
  bool validate = false;
  std::optional<double> trim_threshold, trim_frame, trim_hop, peak, fraction, hp_cutoff, hp_q, gate_pct,
      gate_alpha, gate_floor;
  bool normalize_before_trim = false;

  void add_dsp(CLI::App* app) {
    app->add_option("--dsp-trim-threshold-dbfs", trim_threshold, "Silence threshold (default -50)");
    app->add_option("--dsp-trim-frame-ms", trim_frame, "Trim frame length (default 20)");
    app->add_option("--dsp-trim-hop-ms", trim_hop, "Trim hop (default 10)");
    app->add_option("--dsp-normalize-peak-dbfs", peak, "Per-clip peak target (default -1)");
    app->add_flag("--dsp-normalize-before-trim", normalize_before_trim, "Normalize before trimming");
    app->add_option("--dsp-crossfade-fraction", fraction, "Overlap as a fraction of the previous clip (default 0.25)");
    app->add_option("--dsp-highpass-cutoff-hz", hp_cutoff, "High-pass cutoff (default 40)");
    app->add_option("--dsp-highpass-q", hp_q, "High-pass Q (default 0.7071)");
    app->add_option("--dsp-gate-percentile", gate_pct, "Gate noise-floor percentile (default 10)");
    app->add_option("--dsp-gate-threshold-factor", gate_alpha, "Gate threshold factor (default 4)");
    app->add_option("--dsp-gate-floor", gate_floor, "Gain of gated bins (default 0.1)");
  }

  void add_session(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags override it")->check(CLI::ExistingFile);
    app->add_option("--from", from, "Start emotion (default stressed)");
    app->add_option("--to", to, "Goal emotion (default calm)");
    app->add_option("--duration", duration, "Target session length in seconds (default 900)");
    app->add_option("--clip-duration", clip_duration, "Generated clip length in seconds (default 30)");
    app->add_option("--conditioning", conditioning, "Seconds of the previous clip fed back (default 10)");
    app->add_option("--temperature", temperature, "Instrument/genre switch probability (default 0.3)");
    app->add_option("--seed", seed, "Session seed (default 0)");
    app->add_option("--backend", backend, "stub or remote")->check(CLI::IsMember({"stub", "remote"}));
    app->add_option("--endpoint", endpoint, "Generation service URL")->envname("MUSMED_ENDPOINT");
    app->add_option("--timeout", timeout, "Remote request timeout in seconds (default 120)");
    app->add_option("--instrument", instrument, "Initial instrument (default piano)");
    app->add_option("--genre", genre, "Initial genre (default classical)");
    app->add_option("--mapping", mapping, "Mood-tag to emotion mapping TSV");
    app->add_option("--stats", stats, "Tag statistics JSON from `musmed stats`");
    app->add_flag("--validate", validate, "Check each clip with the classifier");
    app->add_option("--classifier", classifier, "Classifier command, run as `<cmd> <wav>`");
    app->add_option("--top-m", top_m, "Classifier tags considered (default 3)");
    app->add_option("--tolerance", tolerance, "Angular match tolerance in degrees (default 45)");
    app->add_option("--max-retries", max_retries, "Regenerations per clip on mismatch (default 3)");
    add_dsp(app);
  }

  void apply_dsp(DspConfig& d) const {
    auto set = [](auto& field, const auto& opt) {
      if (opt) field = *opt;
    };
    set(d.trim_threshold_dbfs, trim_threshold);
    set(d.trim_frame_ms, trim_frame);
    set(d.trim_hop_ms, trim_hop);
    set(d.normalize_peak_dbfs, peak);
    set(d.crossfade_fraction, fraction);
    set(d.highpass_cutoff_hz, hp_cutoff);
    set(d.highpass_q, hp_q);
    set(d.gate_percentile, gate_pct);
    set(d.gate_threshold_factor, gate_alpha);
    set(d.gate_floor, gate_floor);
    if (normalize_before_trim) d.normalize_before_trim = true;
  }

  SessionConfig build(SessionConfig c) const {
    if (!config_path.empty()) c = config_from_json(read_file(config_path), c);
    auto set = [](auto& field, const auto& opt) {
      if (opt) field = *opt;
    };
    set(c.start_emotion, from);
    set(c.goal_emotion, to);
    set(c.target_duration_s, duration);
    set(c.clip_duration_s, clip_duration);
    set(c.conditioning_s, conditioning);
    set(c.temperature, temperature);
    set(c.seed, seed);
    set(c.backend, backend);
    set(c.endpoint, endpoint);
    set(c.timeout_s, timeout);
    set(c.initial_instrument, instrument);
    set(c.initial_genre, genre);
    set(c.mapping_path, mapping);
    set(c.stats_path, stats);
    set(c.validation.classifier_command, classifier);
    set(c.validation.top_m, top_m);
    set(c.validation.tolerance_deg, tolerance);
    set(c.validation.max_retries, max_retries);
    if (validate) c.validation.enabled = true;
    c.start_emotion = to_lower(c.start_emotion);
    c.goal_emotion = to_lower(c.goal_emotion);
    apply_dsp(c.dsp);
    return c;
  }
};

int cmd_plan(const ConfigFlags& flags, bool show_config) {
  const auto config = flags.build({});
  if (show_config) {
    std::cout << config_to_json(config);
    return kOk;
  }
  config.validate();
  const auto plan = plan_session(config, load_mapping(config), load_stats(config));
  std::cout << "path:";
  for (std::size_t i = 0; i < plan.path.states.size(); ++i) {
    std::cout << (i ? " -> " : " ") << plan.path.states[i] << " (" << plan.allocation[i] << ")";
  }
  std::cout << "\nsegments: " << plan.segments.size() << "\n";
  const std::size_t clip = static_cast<std::size_t>(std::llround(config.clip_duration_s * kCanonicalSampleRate));
  const auto total = assembled_length(std::vector<std::size_t>(plan.segments.size(), clip), config.dsp.crossfade_fraction);
  std::cout << "untrimmed duration: " << double(total) / kCanonicalSampleRate << " s (" << total << " samples)\n";
  for (const auto& s : plan.segments) {
    std::cout << s.index << "\t" << s.emotion << "\t" << render_prompt(s.prompt);
    for (const auto& e : s.events) std::cout << "\t[" << e << "]";
    std::cout << "\n";
  }
  return kOk;
}

int cmd_stats(const std::string& tsv, const std::string& out) {
  std::ifstream in(tsv);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + tsv);
  const auto parsed = parse_jamendo_tsv(in);
  for (const auto& issue : parsed.errors) spdlog::warn("{}:{}: {}", tsv, issue.line, issue.message);
  if (parsed.records.empty()) throw Error(ErrorCode::kStatsFormat, "no usable records in " + tsv);
  const auto stats = compute_tag_stats(parsed.records);
  save_tag_stats(stats, out);
  std::cout << "records: " << parsed.records.size() << "\nskipped lines: " << parsed.errors.size()
            << "\nmoods: " << stats.per_mood.size() << "\nwrote " << out << "\n";
  return parsed.errors.empty() ? kOk : kInput;
}

int cmd_generate(const ConfigFlags& flags, const std::string& from_manifest, const std::string& out) {
  SessionConfig base;
  if (!from_manifest.empty()) base = config_from_manifest(read_file(from_manifest));
  const auto config = flags.build(base);
  config.validate();
  if (config.validation.enabled && config.validation.classifier_command.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--validate needs --classifier");
  }
  const auto mapping = load_mapping(config);
  const auto plan = plan_session(config, mapping, load_stats(config));
  auto backend = make_backend(config);
  std::unique_ptr<EmotionClassifier> classifier;
  if (config.validation.enabled) classifier = std::make_unique<CommandClassifier>(config.validation.classifier_command);

  spdlog::info("{} segments over {} states with the {} backend", plan.segments.size(), plan.path.states.size(),
               backend->name());
  const auto outcome = run_session(plan, config, *backend, mapping, classifier.get());
  const auto manifest_path = manifest_path_for(out);
  write_file(manifest_path, manifest_to_json(outcome.manifest));
  if (outcome.failure) {
    std::cerr << "generation failed: " << outcome.manifest.error << "\npartial manifest: " << manifest_path << "\n";
    return exit_code_for(*outcome.failure);
  }
  write_file(out, std::string_view(reinterpret_cast<const char*>(outcome.wav.data()), outcome.wav.size()));
  std::cout << "wrote " << out << " (" << outcome.manifest.duration_s << " s, sha256 "
            << outcome.manifest.output_digest << ")\nmanifest " << manifest_path << "\n";
  return outcome.validation_exhausted ? kExhausted : kOk;
}

int cmd_post(const ConfigFlags& flags, const std::vector<std::string>& inputs, const std::string& out, bool no_trim) {
  DspConfig dsp;
  flags.apply_dsp(dsp);
  dsp.validate();
  std::vector<AudioClip> clips;
  for (const auto& path : inputs) {
    auto clip = read_wav_file(path);
    check_clip(clip);
    if (!no_trim && !dsp.normalize_before_trim) clip = trim_silence(clip, dsp);
    clip = normalize_peak(clip, dsp.normalize_peak_dbfs);
    if (!no_trim && dsp.normalize_before_trim) clip = trim_silence(clip, dsp);
    clips.push_back(std::move(clip));
  }
  const auto result = finalize_session_audio(crossfade_concat(clips, dsp.crossfade_fraction), dsp);
  write_wav_file(result, WavEncoding::kFloat32, out);
  std::cout << "wrote " << out << " (" << result.duration_s() << " s)\n";
  return kOk;
}

int cmd_eval_hamming(const std::string& truth_path, const std::string& scores_path, double threshold, bool jaccard) {
  const auto truth = read_csv(truth_path), scores = read_csv(scores_path);
  if (truth.size() != scores.size() || truth.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "truth and scores need the same non-zero number of rows");
  }
  double sum = 0.0, jsum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto labels = to_labels(truth[i]);
    sum += hamming_score(labels, scores[i], threshold);
    if (jaccard) jsum += jaccard_accuracy(labels, scores[i], threshold);
  }
  std::cout << "hamming_score " << sum / double(truth.size()) << "\n";
  if (jaccard) std::cout << "jaccard_accuracy " << jsum / double(truth.size()) << "\n";
  std::cout << "rows " << truth.size() << "\n";
  return kOk;
}

// Rows are clips, columns are tags; AP is taken per tag and averaged over tags with positives.
int cmd_eval_auprc(const std::string& scores_path, const std::string& labels_path) {
  const auto scores = read_csv(scores_path), labels = read_csv(labels_path);
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels need the same non-zero number of rows");
  }
  const std::size_t tags = scores[0].size();
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < tags; ++t) {
    std::vector<double> s;
    std::vector<int> y;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].size() != tags || labels[i].size() != tags) {
        throw Error(ErrorCode::kLengthMismatch, "row " + std::to_string(i + 1) + " has the wrong width");
      }
      s.push_back(scores[i][t]);
      y.push_back(to_labels({labels[i][t]})[0]);
    }
    if (std::find(y.begin(), y.end(), 1) == y.end()) continue;
    sum += auprc(s, y);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::kNoPositives, "no tag has a positive label");
  std::cout << "auprc " << sum / double(used) << "\ntags " << used << " of " << tags << "\n";
  return kOk;
}

int cmd_eval_clap(const std::string& audio_path, const std::string& text_path) {
  const auto audio = read_csv(audio_path), text = read_csv(text_path);
  if (audio.size() != text.size() || audio.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "embedding files need the same non-zero number of rows");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < audio.size(); ++i) {
    const double s = clap_style_score(audio[i], text[i]);
    std::cout << i << "\t" << s << "\n";
    sum += s;
  }
  std::cout << "mean " << sum / double(audio.size()) << "\n";
  return kOk;
}

int cmd_eval_kappa(const std::string& path) {
  std::vector<std::vector<int>> counts;
  for (const auto& row : read_csv(path)) {
    std::vector<int> r;
    for (double v : row) {
      if (v != std::floor(v)) throw Error(ErrorCode::kInvalidArgument, "counts must be integers");
      r.push_back(static_cast<int>(v));
    }
    counts.push_back(std::move(r));
  }
  const auto k = fleiss_kappa(counts);
  std::cout << "kappa " << k.kappa << "\nobserved " << k.observed << "\nexpected " << k.expected << "\n";
  return kOk;
}

int cmd_eval_match(const std::string& probs_path, const std::string& intended, const std::string& mapping_path,
                   std::size_t top_m, double tolerance) {
  std::map<std::string, double> probs;
  try {
    for (const auto& [tag, p] : nlohmann::json::parse(read_file(probs_path)).get<std::map<std::string, double>>()) {
      probs[to_lower(tag)] = p;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, probs_path + " is not a JSON tag map: " + e.what());
  }
  const auto mapping = mapping_path.empty() ? default_mood_mapping() : MoodMapping::load(mapping_path);
  const auto m = emotion_match(probs, to_lower(intended), mapping, top_m, tolerance);
  nlohmann::json j = {{"match", m.match},
                      {"angular_error_deg", m.angular_error_deg},
                      {"closest_emotion", m.closest_emotion},
                      {"closest_tag", m.closest_tag}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

// Ratings TSV: tag, then one emotion label per rater. Every row needs the same rater count.
int cmd_validate_mapping(const std::string& ratings_path, const std::string& mapping_path) {
  std::istringstream in(read_file(ratings_path));
  const auto& emotions = canonical_emotions();
  std::vector<std::vector<int>> counts;
  std::vector<std::string> tags;
  std::vector<std::vector<std::string>> votes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, '\t')) fields.push_back(to_lower(field));
    if (fields.size() < 3) {
      throw Error(ErrorCode::kMalformedLine, ratings_path + ":" + std::to_string(lineno) + ": need a tag and two ratings");
    }
    std::vector<int> row(emotions.size(), 0);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto it = std::find(emotions.begin(), emotions.end(), fields[i]);
      if (it == emotions.end()) {
        throw Error(ErrorCode::kUnknownEmotion, ratings_path + ":" + std::to_string(lineno) + ": '" + fields[i] + "'");
      }
      ++row[static_cast<std::size_t>(it - emotions.begin())];
    }
    tags.push_back(fields[0]);
    votes.emplace_back(fields.begin() + 1, fields.end());
    counts.push_back(std::move(row));
  }
  const auto k = fleiss_kappa(counts);
  std::cout << "subjects " << counts.size() << "\nkappa " << k.kappa << "\n";
  const auto mapping = mapping_path.empty() ? default_mood_mapping() : MoodMapping::load(mapping_path);
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!mapping.contains(tags[i])) continue;
    for (const auto& v : votes[i]) agree += v == mapping.map(tags[i]), ++total;
  }
  if (total) std::cout << "rater agreement with mapping " << double(agree) / double(total) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("musmed"));

  CLI::App app{"Emotion-trajectory music sessions: planning, generation and post-production"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  ConfigFlags flags;

  auto* plan = app.add_subcommand("plan", "Print the emotion path and per-segment prompts");
  bool show_config = false;
  plan->add_flag("--show-config", show_config, "Print the effective config as JSON and exit");
  flags.add_session(plan);

  auto* stats = app.add_subcommand("stats", "Compute mood-conditioned tag statistics from an MTG-Jamendo TSV");
  std::string stats_in, stats_out;
  stats->add_option("tsv", stats_in, "autotagging_moodtheme.tsv or an excerpt")->required();
  stats->add_option("-o,--out", stats_out, "Statistics JSON to write")->required();

  auto* generate = app.add_subcommand("generate", "Render a full session to WAV plus manifest");
  std::string out, from_manifest;
  generate->add_option("-o,--out", out, "Output WAV path")->required();
  generate->add_option("--from-manifest", from_manifest, "Reuse the config echoed in a manifest")
      ->check(CLI::ExistingFile);
  flags.add_session(generate);

  auto* post = app.add_subcommand("post", "Trim, normalize, crossfade and filter existing WAV clips");
  std::vector<std::string> post_inputs;
  std::string post_out;
  bool no_trim = false;
  post->add_option("inputs", post_inputs, "Clips in playback order")->required()->check(CLI::ExistingFile);
  post->add_option("-o,--out", post_out, "Output WAV path")->required();
  post->add_flag("--no-trim", no_trim, "Skip silence trimming");
  flags.add_dsp(post);

  auto* eval = app.add_subcommand("eval", "Evaluation metrics over file inputs");
  eval->require_subcommand(1);
  std::string a_path, b_path, intended, mapping_path;
  double threshold = 0.5, tolerance = 45.0;
  std::size_t top_m = 3;
  bool jaccard = false;
  auto* hamming = eval->add_subcommand("hamming", "Mean per-clip 1 - Hamming loss");
  hamming->add_option("--truth", a_path, "CSV of 0/1 labels, one clip per row")->required()->check(CLI::ExistingFile);
  hamming->add_option("--scores", b_path, "CSV of scores in [0, 1]")->required()->check(CLI::ExistingFile);
  hamming->add_option("--threshold", threshold, "Decision threshold (default 0.5)");
  hamming->add_flag("--jaccard", jaccard, "Also print intersection-over-union accuracy");
  auto* auprc_cmd = eval->add_subcommand("auprc", "Tag-averaged average precision");
  auprc_cmd->add_option("--scores", a_path, "CSV, one clip per row, one tag per column")->required()->check(CLI::ExistingFile);
  auprc_cmd->add_option("--labels", b_path, "CSV of 0/1 labels, same shape")->required()->check(CLI::ExistingFile);
  auto* clap = eval->add_subcommand("clap", "100 x cosine between paired embeddings");
  clap->add_option("--audio", a_path, "Audio embeddings, one vector per row")->required()->check(CLI::ExistingFile);
  clap->add_option("--text", b_path, "Text embeddings, one vector per row")->required()->check(CLI::ExistingFile);
  auto* kappa = eval->add_subcommand("kappa", "Fleiss' kappa over a subjects x categories count matrix");
  kappa->add_option("counts", a_path, "CSV count matrix")->required()->check(CLI::ExistingFile);
  auto* match = eval->add_subcommand("match", "Check classifier output against an intended emotion");
  match->add_option("--probs", a_path, "JSON object {tag: probability}")->required()->check(CLI::ExistingFile);
  match->add_option("--intended", intended, "Intended emotion")->required();
  match->add_option("--mapping", mapping_path, "Mood-tag mapping TSV (default: built-in)")->check(CLI::ExistingFile);
  match->add_option("--top-m", top_m, "Tags considered (default 3)");
  match->add_option("--tolerance", tolerance, "Degrees (default 45)");

  auto* vmap = app.add_subcommand("validate-mapping", "Inter-rater agreement for a tag-to-emotion rating file");
  vmap->add_option("ratings", a_path, "TSV: tag, then one emotion per rater")->required()->check(CLI::ExistingFile);
  vmap->add_option("--mapping", mapping_path, "Mapping to compare against (default: built-in)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*plan) return cmd_plan(flags, show_config);
    if (*stats) return cmd_stats(stats_in, stats_out);
    if (*generate) return cmd_generate(flags, from_manifest, out);
    if (*post) return cmd_post(flags, post_inputs, post_out, no_trim);
    if (*hamming) return cmd_eval_hamming(a_path, b_path, threshold, jaccard);
    if (*auprc_cmd) return cmd_eval_auprc(a_path, b_path);
    if (*clap) return cmd_eval_clap(a_path, b_path);
    if (*kappa) return cmd_eval_kappa(a_path);
    if (*match) return cmd_eval_match(a_path, intended, mapping_path, top_m, tolerance);
    if (*vmap) return cmd_validate_mapping(a_path, mapping_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kUsage;
}
