#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "musmed/audio.hpp"
#include "musmed/dsp.hpp"
#include "musmed/emotion.hpp"
#include "musmed/error.hpp"
#include "musmed/evaluation.hpp"
#include "musmed/generator.hpp"
#include "musmed/prompt.hpp"
#include "musmed/tags.hpp"

namespace musmed {

struct ValidationConfig {
  bool enabled = false;
  std::string classifier_command;  // invoked as `<command> <wav path>`
  std::size_t top_m = 3;
  double tolerance_deg = 45.0;
  int max_retries = 3;
};

struct SessionConfig {
  std::string start_emotion = "stressed";
  std::string goal_emotion = "calm";
  double target_duration_s = 900.0;
  double clip_duration_s = 30.0;
  double conditioning_s = 10.0;  // tail of the previous clip fed to the generator
  double temperature = 0.3;
  std::uint64_t seed = 0;
  std::string backend = "stub";  // stub | remote
  std::string endpoint = "http://127.0.0.1:8765";
  double timeout_s = 120.0;
  std::string initial_instrument = "piano";
  std::string initial_genre = "classical";
  std::string mapping_path;  // empty: built-in default mapping
  std::string stats_path;    // empty: no tag statistics
  DspConfig dsp;
  ValidationConfig validation;

  // Throws InvalidArgument (ranges, labels) or Io (referenced files missing).
  void validate() const;
};

inline constexpr int kManifestFormatVersion = 1;

// Config <-> JSON text. Missing keys keep their defaults; unknown keys are rejected.
std::string config_to_json(const SessionConfig& config);
SessionConfig config_from_json(const std::string& text, SessionConfig base = {});

// Smallest N with L + (N - 1) * L * (1 - f) >= T.
std::size_t segment_count(double target_s, double clip_s, double fraction);

// Splits n segments over `states` path states as evenly as possible, extra
// segments to the earliest states.
std::vector<std::size_t> allocate_segments(std::size_t n, std::size_t states);

// Samples of an assembled session given per-clip lengths.
std::size_t assembled_length(const std::vector<std::size_t>& clip_lengths, double fraction);

struct PlannedSegment {
  std::size_t index = 0;
  std::string emotion;
  PromptSpec prompt;
  bool mood_from_stats = true;
  bool instrument_redrawn = false;
  bool genre_redrawn = false;
  std::vector<std::string> events;
};

struct SessionPlan {
  IsoPath path;
  std::vector<std::size_t> allocation;  // segments per path state
  std::vector<PlannedSegment> segments;
};

// N is the duration-derived count, raised to the path length when the path
// has more states than that (so both iso endpoints are always visited).
SessionPlan plan_session(const SessionConfig& config, const MoodMapping& mapping,
                         const TagStats& stats);

class EmotionClassifier {
 public:
  virtual ~EmotionClassifier() = default;
  virtual std::map<std::string, double> classify(const AudioClip& clip) = 0;
};

// Writes the clip to a temporary WAV, runs `<command> <path>` and parses a
// JSON object {tag: probability} from its standard output.
class CommandClassifier final : public EmotionClassifier {
 public:
  explicit CommandClassifier(std::string command) : command_(std::move(command)) {}
  std::map<std::string, double> classify(const AudioClip& clip) override;

 private:
  std::string command_;
};

struct SegmentRecord {
  std::size_t index = 0;
  std::string emotion;
  std::string mood_tag;
  std::string prompt;
  std::string instrument;
  std::string genre;
  std::uint64_t generation_seed = 0;  // seed of the attempt that was kept
  int retries = 0;
  std::optional<EmotionMatch> match;
  bool validation_exhausted = false;
  std::size_t trimmed_head = 0;
  std::size_t trimmed_tail = 0;
  double pre_normalization_peak = 0.0;
  std::size_t length_samples = 0;
  std::string conditioning_digest;
  std::string content_digest;
  std::vector<std::string> events;
};

struct SessionManifest {
  int format_version = kManifestFormatVersion;
  std::string status = "ok";  // ok | validation_exhausted | failed
  SessionConfig config;
  std::vector<std::string> path;
  std::vector<SegmentRecord> segments;
  std::size_t planned_segments = 0;
  std::size_t total_samples = 0;
  double duration_s = 0.0;
  std::string output_digest;  // sha256 of the float-32 WAV bytes
  std::string error;
};

std::string manifest_to_json(const SessionManifest& manifest);
// Reads back the config echo of a manifest.
SessionConfig config_from_manifest(const std::string& manifest_text);

struct SessionOutcome {
  SessionManifest manifest;
  std::vector<std::uint8_t> wav;  // float-32 WAV; empty on failure
  std::optional<ErrorCode> failure;
  bool validation_exhausted = false;
};

// Generates, validates and post-processes every planned segment in order,
// then assembles and filters the session. Segment-level failures end the run
// with a partial manifest instead of throwing.
SessionOutcome run_session(const SessionPlan& plan, const SessionConfig& config,
                           GeneratorBackend& backend, const MoodMapping& mapping,
                           EmotionClassifier* classifier = nullptr);

// Loads mapping/stats named by the config (defaults when unset).
MoodMapping load_mapping(const SessionConfig& config);
TagStats load_stats(const SessionConfig& config);

std::unique_ptr<GeneratorBackend> make_backend(const SessionConfig& config);

std::uint64_t generation_seed(std::uint64_t session_seed, std::size_t segment, int attempt);

// "<stem>.manifest.json" next to the WAV path.
std::string manifest_path_for(const std::string& wav_path);

}  // namespace musmed
