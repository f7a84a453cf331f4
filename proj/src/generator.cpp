#include "musmed/generator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "musmed/digest.hpp"
#include "musmed/dsp.hpp"
#include "musmed/error.hpp"
#include "musmed/rng.hpp"
#include "musmed/wav.hpp"

namespace musmed {
namespace {

constexpr double kDurationTolerance = 0.5;

void check_generated(const AudioClip& clip, double requested_duration_s) {
  if (clip.sample_rate != kCanonicalSampleRate) {
    throw Error(ErrorCode::kBadAudio, "expected 32000 Hz, got " + std::to_string(clip.sample_rate));
  }
  if (std::fabs(clip.duration_s() - requested_duration_s) > kDurationTolerance) {
    throw Error(ErrorCode::kBadAudio, "duration " + std::to_string(clip.duration_s()) +
                                          " s, requested " + std::to_string(requested_duration_s));
  }
  check_clip(clip, true);
}

std::vector<std::string> split_prompt(std::string_view prompt) {
  std::vector<std::string> tokens;
  std::stringstream ss{std::string(prompt)};
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    tokens.push_back(b == std::string::npos ? std::string() : to_lower(tok.substr(b, e - b + 1)));
  }
  return tokens;
}

}  // namespace

void GenerationRequest::validate() const {
  if (!(duration_s >= 1.0 && duration_s <= 120.0)) {
    throw Error(ErrorCode::kInvalidArgument, "duration_s must lie in [1, 120]");
  }
  if (conditioning) {
    const double limit = duration_s * conditioning->sample_rate;
    if (!(static_cast<double>(conditioning->samples.size()) < limit)) {
      throw Error(ErrorCode::kInvalidArgument, "conditioning must be shorter than the requested clip");
    }
  }
}

AudioClip generate(GeneratorBackend& backend, const GenerationRequest& request) {
  request.validate();
  auto clip = backend.generate(request);
  check_generated(clip, request.duration_s);
  return clip;
}

StubVoice stub_voice(const EmotionPoint& emotion) {
  return {200.0 + 120.0 * (emotion.valence + 1.0), 1.0 + 4.0 * (emotion.arousal + 1.0)};
}

AudioClip stub_synthesize(const EmotionPoint& emotion, double duration_s, std::uint64_t seed,
                          int sample_rate) {
  const auto voice = stub_voice(emotion);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  const auto fade = static_cast<std::size_t>(std::llround(kStubFadeSeconds * sample_rate));
  // Uniform noise on [-a, a] has RMS a / sqrt(3).
  const double noise_amp = db_to_gain(kStubNoiseDbfs) * std::sqrt(3.0);
  std::mt19937_64 gen(seed);

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double tremolo =
        1.0 - kStubTremoloDepth * 0.5 * (1.0 - std::cos(two_pi * voice.tremolo_hz * t));
    double s = kStubToneAmplitude * tremolo * std::sin(two_pi * voice.carrier_hz * t);
    s += noise_amp * (2.0 * uniform01(gen) - 1.0);
    double env = 1.0;
    if (fade > 0) {
      if (i < fade) {
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / fade);
      } else if (n - 1 - i < fade) {
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n - 1 - i) / fade);
      }
    }
    clip.samples[i] = static_cast<float>(s * env);
  }
  return clip;
}

std::optional<std::string> emotion_from_prompt(std::string_view prompt) {
  const auto tokens = split_prompt(prompt);
  if (tokens.size() == 4 && is_canonical_emotion(tokens[1])) return tokens[1];
  for (const auto& t : tokens) {
    if (is_canonical_emotion(t)) return t;
  }
  return std::nullopt;
}

AudioClip StubBackend::generate(const GenerationRequest& request) {
  request.validate();
  if (request.conditioning) {
    spdlog::debug("stub: conditioning {} samples, digest {}", request.conditioning->size(),
                  clip_digest(*request.conditioning));
  }
  EmotionPoint point;
  if (auto label = emotion_from_prompt(request.prompt)) {
    point = emotion_coords(*label);
  } else {
    point.name = "neutral";
  }
  return stub_synthesize(point, request.duration_s, request.seed.value_or(0));
}

std::string encode_generation_request(const GenerationRequest& request) {
  nlohmann::json j;
  j["prompt"] = request.prompt;
  j["duration_s"] = request.duration_s;
  if (request.seed) j["seed"] = *request.seed;
  if (request.conditioning) {
    j["conditioning_wav_b64"] = base64_encode(encode_wav(*request.conditioning, WavEncoding::kFloat32));
  }
  return j.dump();
}

AudioClip accept_service_wav(std::string_view body, double requested_duration_s) {
  DecodedWav wav;
  try {
    wav = decode_wav(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(body.data()),
                                                   body.size()));
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadAudio, std::string("undecodable WAV: ") + e.what());
  }
  if (wav.channels != 1) {
    throw Error(ErrorCode::kBadAudio, "expected mono, got " + std::to_string(wav.channels) + " channels");
  }
  check_clip(wav.clip, false);
  for (auto& s : wav.clip.samples) s = std::clamp(s, -1.0f, 1.0f);
  check_generated(wav.clip, requested_duration_s);
  return std::move(wav.clip);
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {}

AudioClip RemoteBackend::attempt(const std::string& body, double duration_s) const {
  httplib::Client client(config_.endpoint);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post("/generate", body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable,
                config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    std::string detail = res->body;
    try {
      auto j = nlohmann::json::parse(res->body);
      detail = j.value("error_code", std::string("?")) + ": " + j.value("message", std::string());
    } catch (const nlohmann::json::exception&) {
    }
    const auto code = res->status >= 500 ? ErrorCode::kBackendUnavailable : ErrorCode::kBackendRejected;
    throw Error(code, "HTTP " + std::to_string(res->status) + " " + detail);
  }
  return accept_service_wav(res->body, duration_s);
}

AudioClip RemoteBackend::generate(const GenerationRequest& request) {
  request.validate();
  const auto body = encode_generation_request(request);
  for (std::size_t retry = 0;; ++retry) {
    try {
      return attempt(body, request.duration_s);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBackendUnavailable || retry >= config_.retry_backoff.size()) throw;
      spdlog::warn("remote backend unavailable ({}), retry {} of {}", e.what(), retry + 1,
                   config_.retry_backoff.size());
      std::this_thread::sleep_for(config_.retry_backoff[retry]);
    }
  }
}

bool RemoteBackend::healthy() const {
  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(2, 0);
  auto res = client.Get("/health");
  return res && res->status == 200;
}

}  // namespace musmed
