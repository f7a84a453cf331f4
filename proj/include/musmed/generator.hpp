#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "musmed/audio.hpp"
#include "musmed/emotion.hpp"

namespace musmed {

struct GenerationRequest {
  std::string prompt;
  double duration_s = 30.0;
  std::optional<AudioClip> conditioning;  // tail of the previous processed clip
  std::optional<std::uint64_t> seed;

  // Throws InvalidArgument: 1 <= duration_s <= 120, conditioning shorter than
  // the requested duration.
  void validate() const;
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual std::string name() const = 0;
  virtual AudioClip generate(const GenerationRequest& request) = 0;
};

// Validates the request, runs the backend and checks the result: 32 kHz mono,
// duration within +/-0.5 s of the request, finite samples in [-1, 1].
AudioClip generate(GeneratorBackend& backend, const GenerationRequest& request);

struct StubVoice {
  double carrier_hz = 0.0;
  double tremolo_hz = 0.0;
};

// f0 = 200 + 120 (valence + 1), tremolo rate = 1 + 4 (arousal + 1).
StubVoice stub_voice(const EmotionPoint& emotion);

inline constexpr double kStubToneAmplitude = 0.5;   // -6 dBFS
inline constexpr double kStubTremoloDepth = 0.3;
inline constexpr double kStubNoiseDbfs = -45.0;     // RMS of the additive noise
inline constexpr double kStubFadeSeconds = 0.05;

// Deterministic tremolo tone plus seeded uniform white noise, with 50 ms
// raised-cosine fades.
AudioClip stub_synthesize(const EmotionPoint& emotion, double duration_s, std::uint64_t seed,
                          int sample_rate = kCanonicalSampleRate);

// The emotion named in a rendered prompt: the second token of a four-token
// prompt, otherwise the first canonical label found. nullopt if none.
std::optional<std::string> emotion_from_prompt(std::string_view prompt);

// Test double for the music model: conditioning is only logged by digest.
// Prompts without an emotion label synthesize the circumplex origin.
class StubBackend final : public GeneratorBackend {
 public:
  std::string name() const override { return "stub"; }
  AudioClip generate(const GenerationRequest& request) override;
};

struct RemoteConfig {
  std::string endpoint = "http://127.0.0.1:8765";
  std::chrono::milliseconds timeout{120000};
  // Sleep before each retry of a BackendUnavailable failure.
  std::vector<std::chrono::milliseconds> retry_backoff{std::chrono::milliseconds(500),
                                                       std::chrono::milliseconds(2000)};
};

// Client for the generation service: POST /generate with a JSON body
// {prompt, duration_s, seed?, conditioning_wav_b64?}; a WAV body comes back.
// Transport failures and 5xx map to BackendUnavailable (retried), other
// non-2xx to BackendRejected, bad WAV payloads to BadAudio.
class RemoteBackend final : public GeneratorBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);
  std::string name() const override { return "remote"; }
  AudioClip generate(const GenerationRequest& request) override;

  const RemoteConfig& config() const { return config_; }

  // GET /health; true when the service answers 200.
  bool healthy() const;

 private:
  AudioClip attempt(const std::string& body, double duration_s) const;
  RemoteConfig config_;
};

// JSON body sent by RemoteBackend.
std::string encode_generation_request(const GenerationRequest& request);

// Validates a WAV payload from the service and converts it to a clip.
AudioClip accept_service_wav(std::string_view body, double requested_duration_s);

}  // namespace musmed
