#include "musmed/session.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "musmed/digest.hpp"
#include "musmed/rng.hpp"
#include "musmed/wav.hpp"

namespace musmed {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

json dsp_to_json(const DspConfig& d) {
  return {
      {"trim_threshold_dbfs", d.trim_threshold_dbfs},
      {"trim_frame_ms", d.trim_frame_ms},
      {"trim_hop_ms", d.trim_hop_ms},
      {"normalize_peak_dbfs", d.normalize_peak_dbfs},
      {"normalize_before_trim", d.normalize_before_trim},
      {"crossfade_fraction", d.crossfade_fraction},
      {"highpass_cutoff_hz", d.highpass_cutoff_hz},
      {"highpass_q", d.highpass_q},
      {"gate_percentile", d.gate_percentile},
      {"gate_threshold_factor", d.gate_threshold_factor},
      {"gate_floor", d.gate_floor},
  };
}

json config_json(const SessionConfig& c) {
  return {
      {"start_emotion", c.start_emotion},
      {"goal_emotion", c.goal_emotion},
      {"target_duration_s", c.target_duration_s},
      {"clip_duration_s", c.clip_duration_s},
      {"conditioning_s", c.conditioning_s},
      {"temperature", c.temperature},
      {"seed", c.seed},
      {"backend", c.backend},
      {"endpoint", c.endpoint},
      {"timeout_s", c.timeout_s},
      {"initial_instrument", c.initial_instrument},
      {"initial_genre", c.initial_genre},
      {"mapping_path", c.mapping_path},
      {"stats_path", c.stats_path},
      {"dsp", dsp_to_json(c.dsp)},
      {"validation",
       {
           {"enabled", c.validation.enabled},
           {"classifier_command", c.validation.classifier_command},
           {"top_m", c.validation.top_m},
           {"tolerance_deg", c.validation.tolerance_deg},
           {"max_retries", c.validation.max_retries},
       }},
  };
}

// Reads optional keys into fields; finish() rejects keys nobody asked for.
class FieldReader {
 public:
  FieldReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error(ErrorCode::kInvalidArgument, where_ + " must be an object");
  }
  template <typename T>
  FieldReader& get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return *this;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kInvalidArgument, where_ + "." + key + " has the wrong type");
    }
    return *this;
  }
  const json* child(const char* key) {
    seen_.push_back(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw Error(ErrorCode::kInvalidArgument, "unknown config key " + where_ + "." + key);
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

SessionConfig config_from(const json& j, SessionConfig c) {
  FieldReader r(j, "config");
  r.get("start_emotion", c.start_emotion)
      .get("goal_emotion", c.goal_emotion)
      .get("target_duration_s", c.target_duration_s)
      .get("clip_duration_s", c.clip_duration_s)
      .get("conditioning_s", c.conditioning_s)
      .get("temperature", c.temperature)
      .get("seed", c.seed)
      .get("backend", c.backend)
      .get("endpoint", c.endpoint)
      .get("timeout_s", c.timeout_s)
      .get("initial_instrument", c.initial_instrument)
      .get("initial_genre", c.initial_genre)
      .get("mapping_path", c.mapping_path)
      .get("stats_path", c.stats_path);
  if (const json* d = r.child("dsp")) {
    FieldReader dr(*d, "dsp");
    auto& x = c.dsp;
    dr.get("trim_threshold_dbfs", x.trim_threshold_dbfs)
        .get("trim_frame_ms", x.trim_frame_ms)
        .get("trim_hop_ms", x.trim_hop_ms)
        .get("normalize_peak_dbfs", x.normalize_peak_dbfs)
        .get("normalize_before_trim", x.normalize_before_trim)
        .get("crossfade_fraction", x.crossfade_fraction)
        .get("highpass_cutoff_hz", x.highpass_cutoff_hz)
        .get("highpass_q", x.highpass_q)
        .get("gate_percentile", x.gate_percentile)
        .get("gate_threshold_factor", x.gate_threshold_factor)
        .get("gate_floor", x.gate_floor);
    dr.finish();
  }
  if (const json* v = r.child("validation")) {
    FieldReader vr(*v, "validation");
    auto& x = c.validation;
    vr.get("enabled", x.enabled)
        .get("classifier_command", x.classifier_command)
        .get("top_m", x.top_m)
        .get("tolerance_deg", x.tolerance_deg)
        .get("max_retries", x.max_retries);
    vr.finish();
  }
  r.finish();
  return c;
}

json match_json(const std::optional<EmotionMatch>& m) {
  if (!m) return nullptr;
  return {{"match", m->match},
          {"angular_error_deg", m->angular_error_deg},
          {"closest_emotion", m->closest_emotion},
          {"closest_tag", m->closest_tag}};
}

}  // namespace

void SessionConfig::validate() const {
  require(is_canonical_emotion(start_emotion), "unknown start emotion '" + start_emotion + "'");
  require(is_canonical_emotion(goal_emotion), "unknown goal emotion '" + goal_emotion + "'");
  require(clip_duration_s >= 1.0 && clip_duration_s <= 120.0, "clip_duration_s must lie in [1, 120]");
  require(target_duration_s >= clip_duration_s, "target duration must be at least one clip");
  require(conditioning_s >= 0.0 && conditioning_s < clip_duration_s,
          "conditioning_s must lie in [0, clip_duration_s)");
  require(temperature >= 0.0 && temperature <= 1.0, "temperature must lie in [0, 1]");
  require(backend == "stub" || backend == "remote", "backend must be 'stub' or 'remote'");
  require(timeout_s > 0.0, "timeout_s must be positive");
  PromptSpec initial{"x", "x", initial_instrument, initial_genre};
  musmed::validate(initial);
  dsp.validate();
  require(validation.top_m >= 1, "validation.top_m must be at least 1");
  require(validation.max_retries >= 0, "validation.max_retries must be non-negative");
  require(validation.tolerance_deg >= 0.0 && validation.tolerance_deg <= 180.0,
          "validation.tolerance_deg must lie in [0, 180]");
  for (const auto* path : {&mapping_path, &stats_path}) {
    if (!path->empty() && !std::filesystem::exists(*path)) {
      throw Error(ErrorCode::kIo, "missing file " + *path);
    }
  }
}

std::string config_to_json(const SessionConfig& config) { return config_json(config).dump(2) + "\n"; }

SessionConfig config_from_json(const std::string& text, SessionConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from(j, std::move(base));
}

std::size_t segment_count(double target_s, double clip_s, double fraction) {
  require(clip_s > 0.0 && fraction >= 0.0 && fraction < 1.0, "invalid clip length or fraction");
  if (target_s <= clip_s) return 1;
  const double steps = (target_s - clip_s) / (clip_s * (1.0 - fraction));
  return static_cast<std::size_t>(std::ceil(steps - 1e-9)) + 1;
}

std::vector<std::size_t> allocate_segments(std::size_t n, std::size_t states) {
  require(states >= 1, "need at least one state");
  require(n >= states, "fewer segments than path states");
  std::vector<std::size_t> out(states, n / states);
  for (std::size_t i = 0; i < n % states; ++i) ++out[i];
  return out;
}

std::size_t assembled_length(const std::vector<std::size_t>& clip_lengths, double fraction) {
  if (clip_lengths.empty()) return 0;
  std::size_t total = clip_lengths[0];
  for (std::size_t i = 1; i < clip_lengths.size(); ++i) {
    total += clip_lengths[i] - crossfade_overlap(clip_lengths[i - 1], fraction);
  }
  return total;
}

SessionPlan plan_session(const SessionConfig& config, const MoodMapping& mapping,
                         const TagStats& stats) {
  SessionPlan plan;
  plan.path = plan_path(config.start_emotion, config.goal_emotion);
  const std::size_t n = std::max(
      segment_count(config.target_duration_s, config.clip_duration_s, config.dsp.crossfade_fraction),
      plan.path.states.size());
  plan.allocation = allocate_segments(n, plan.path.states.size());

  const TransitionPolicy policy{config.temperature, config.seed};
  std::size_t index = 0;
  for (std::size_t s = 0; s < plan.path.states.size(); ++s) {
    for (std::size_t k = 0; k < plan.allocation[s]; ++k, ++index) {
      PlannedSegment seg;
      seg.index = index;
      seg.emotion = plan.path.states[s];
      if (index == 0) {
        const auto mood = select_mood(seg.emotion, stats, mapping);
        seg.prompt = {mood.tag, seg.emotion, to_lower(config.initial_instrument),
                      to_lower(config.initial_genre)};
        seg.mood_from_stats = mood.from_stats;
      } else {
        auto t = sample_transition(plan.segments.back().prompt, seg.emotion, stats, mapping, policy,
                                   index);
        seg.prompt = std::move(t.spec);
        seg.instrument_redrawn = t.instrument_redrawn;
        seg.genre_redrawn = t.genre_redrawn;
        seg.events = std::move(t.events);
        seg.mood_from_stats = select_mood(seg.emotion, stats, mapping).from_stats;
      }
      if (!seg.mood_from_stats) seg.events.push_back("MoodNotInStats:" + seg.prompt.mood_tag);
      plan.segments.push_back(std::move(seg));
    }
  }
  return plan;
}

std::map<std::string, double> CommandClassifier::classify(const AudioClip& clip) {
  auto pattern = (std::filesystem::temp_directory_path() / "musmed-clf-XXXXXX.wav").string();
  const int fd = ::mkstemps(pattern.data(), 4);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot create temporary WAV");
  ::close(fd);
  struct Cleanup {
    std::string path;
    ~Cleanup() { std::filesystem::remove(path); }
  } cleanup{pattern};
  write_wav_file(clip, WavEncoding::kFloat32, pattern);

  const std::string cmd = command_ + " '" + pattern + "'";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw Error(ErrorCode::kIo, "cannot run classifier: " + command_);
  std::string output;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, got);
  const int status = ::pclose(pipe);
  if (status != 0) throw Error(ErrorCode::kIo, "classifier exited with status " + std::to_string(status));

  std::map<std::string, double> probs;
  try {
    const json parsed = json::parse(output);
    if (!parsed.is_object()) throw Error(ErrorCode::kIo, "classifier output is not a JSON object");
    for (const auto& [tag, p] : parsed.items()) probs[to_lower(tag)] = p.get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("classifier output is not a JSON tag map: ") + e.what());
  }
  return probs;
}

std::string manifest_to_json(const SessionManifest& m) {
  json segments = json::array();
  for (const auto& s : m.segments) {
    segments.push_back({
        {"index", s.index},
        {"emotion", s.emotion},
        {"mood_tag", s.mood_tag},
        {"prompt", s.prompt},
        {"instrument", s.instrument},
        {"genre", s.genre},
        {"generation_seed", s.generation_seed},
        {"retries", s.retries},
        {"match", match_json(s.match)},
        {"validation_exhausted", s.validation_exhausted},
        {"trimmed_head", s.trimmed_head},
        {"trimmed_tail", s.trimmed_tail},
        {"pre_normalization_peak", s.pre_normalization_peak},
        {"length_samples", s.length_samples},
        {"conditioning_digest", s.conditioning_digest},
        {"content_digest", s.content_digest},
        {"events", s.events},
    });
  }
  json j = {
      {"format", "musmed-session-manifest"},
      {"format_version", m.format_version},
      {"status", m.status},
      {"config", config_json(m.config)},
      {"seeds",
       {{"session", m.config.seed},
        {"transition_stream", m.config.seed ^ kTransitionDomain},
        {"generation_stream", m.config.seed ^ kGenerationDomain}}},
      {"path", m.path},
      {"planned_segments", m.planned_segments},
      {"segments", std::move(segments)},
      {"total_samples", m.total_samples},
      {"sample_rate", kCanonicalSampleRate},
      {"duration_s", m.duration_s},
      {"output_digest", m.output_digest},
  };
  if (!m.error.empty()) j["error"] = m.error;
  return j.dump(2) + "\n";
}

SessionConfig config_from_manifest(const std::string& manifest_text) {
  json j;
  try {
    j = json::parse(manifest_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "musmed-session-manifest" || !j.contains("config")) {
    throw Error(ErrorCode::kInvalidArgument, "not a session manifest");
  }
  if (j.value("format_version", 0) != kManifestFormatVersion) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported manifest format_version");
  }
  return config_from(j["config"], SessionConfig{});
}

std::uint64_t generation_seed(std::uint64_t session_seed, std::size_t segment, int attempt) {
  return stream_seed(stream_seed(session_seed ^ kGenerationDomain, segment),
                     static_cast<std::uint64_t>(attempt));
}

SessionOutcome run_session(const SessionPlan& plan, const SessionConfig& config,
                           GeneratorBackend& backend, const MoodMapping& mapping,
                           EmotionClassifier* classifier) {
  SessionOutcome outcome;
  auto& manifest = outcome.manifest;
  manifest.config = config;
  manifest.path = plan.path.states;
  manifest.planned_segments = plan.segments.size();

  const bool validating = config.validation.enabled && classifier != nullptr;
  const int attempts = validating ? 1 + config.validation.max_retries : 1;
  std::vector<AudioClip> processed;
  processed.reserve(plan.segments.size());

  try {
    for (const auto& seg : plan.segments) {
      SegmentRecord rec;
      rec.index = seg.index;
      rec.emotion = seg.emotion;
      rec.mood_tag = seg.prompt.mood_tag;
      rec.prompt = render_prompt(seg.prompt);
      rec.instrument = seg.prompt.instrument;
      rec.genre = seg.prompt.genre;
      rec.events = seg.events;

      GenerationRequest request;
      request.prompt = rec.prompt;
      request.duration_s = config.clip_duration_s;
      if (!processed.empty() && config.conditioning_s > 0.0) {
        request.conditioning = tail(processed.back(), config.conditioning_s);
        rec.conditioning_digest = clip_digest(*request.conditioning);
      }

      AudioClip kept;
      TrimBounds bounds;
      for (int attempt = 0; attempt < attempts; ++attempt) {
        request.seed = generation_seed(config.seed, seg.index, attempt);
        const AudioClip raw = generate(backend, request);
        AudioClip staged = config.dsp.normalize_before_trim
                               ? normalize_peak(raw, config.dsp.normalize_peak_dbfs)
                               : raw;
        bounds = find_trim_bounds(staged, config.dsp);
        rec.pre_normalization_peak = peak_abs(raw);
        rec.trimmed_head = bounds.start;
        rec.trimmed_tail = staged.size() - bounds.end;
        rec.generation_seed = *request.seed;
        rec.retries = attempt;
        kept = trim_silence(staged, config.dsp);
        if (!validating) break;

        const auto probs = classifier->classify(kept);
        try {
          rec.match = emotion_match(probs, seg.emotion, mapping, config.validation.top_m,
                                    config.validation.tolerance_deg);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoMappableTags) throw;
          rec.match = EmotionMatch{};
          rec.match->angular_error_deg = 180.0;
          rec.events.push_back("NoMappableTags");
        }
        if (rec.match->match) break;
        if (attempt + 1 == attempts) {
          rec.validation_exhausted = true;
          outcome.validation_exhausted = true;
        }
      }
      if (!config.dsp.normalize_before_trim) kept = normalize_peak(kept, config.dsp.normalize_peak_dbfs);
      rec.length_samples = kept.size();
      rec.content_digest = clip_digest(kept);
      spdlog::info("segment {}/{} [{}] \"{}\" retries={}", seg.index + 1, plan.segments.size(),
                   seg.emotion, rec.prompt, rec.retries);
      manifest.segments.push_back(std::move(rec));
      processed.push_back(std::move(kept));
    }

    const auto assembled = crossfade_concat(processed, config.dsp.crossfade_fraction);
    const auto final_audio = finalize_session_audio(assembled, config.dsp);
    outcome.wav = encode_wav(final_audio, WavEncoding::kFloat32);
    manifest.total_samples = final_audio.size();
    manifest.duration_s = final_audio.duration_s();
    manifest.output_digest = sha256_hex(outcome.wav);
    manifest.status = outcome.validation_exhausted ? "validation_exhausted" : "ok";
  } catch (const Error& e) {
    outcome.failure = e.code();
    outcome.wav.clear();
    manifest.status = "failed";
    manifest.error = e.what();
    spdlog::error("session failed after {} segments: {}", manifest.segments.size(), e.what());
  }
  return outcome;
}

MoodMapping load_mapping(const SessionConfig& config) {
  return config.mapping_path.empty() ? default_mood_mapping() : MoodMapping::load(config.mapping_path);
}

TagStats load_stats(const SessionConfig& config) {
  return config.stats_path.empty() ? TagStats{} : load_tag_stats(config.stats_path);
}

std::unique_ptr<GeneratorBackend> make_backend(const SessionConfig& config) {
  if (config.backend == "stub") return std::make_unique<StubBackend>();
  RemoteConfig rc;
  rc.endpoint = config.endpoint;
  rc.timeout = std::chrono::milliseconds(static_cast<long long>(config.timeout_s * 1000.0));
  return std::make_unique<RemoteBackend>(rc);
}

std::string manifest_path_for(const std::string& wav_path) {
  std::filesystem::path p(wav_path);
  p.replace_extension(".manifest.json");
  return p.string();
}

}  // namespace musmed
