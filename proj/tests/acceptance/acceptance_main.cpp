// Acceptance suite: one PASS/FAIL line per criterion, SKIP when the generation
// service is not reachable. Exits non-zero if anything fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "musmed/digest.hpp"
#include "musmed/dsp.hpp"
#include "musmed/emotion.hpp"
#include "musmed/error.hpp"
#include "musmed/evaluation.hpp"
#include "musmed/generator.hpp"
#include "musmed/prompt.hpp"
#include "musmed/session.hpp"
#include "musmed/stft.hpp"
#include "musmed/tags.hpp"

namespace fs = std::filesystem;
using namespace musmed;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRate = kCanonicalSampleRate;

enum class Verdict { kPass, kFail, kSkip };

struct Result {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

// Collects the first failed check; later checks still run so the detail names the earliest problem.
struct Checker {
  Result r;
  void expect(bool ok, const std::string& what) {
    if (!ok && r.verdict == Verdict::kPass) {
      r.verdict = Verdict::kFail;
      r.detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---- 1: path planner against BFS over a ring ordered by angle ----

std::size_t bfs_states(const std::vector<std::string>& ring, const std::string& a, const std::string& b) {
  const std::size_t n = ring.size();
  auto index = [&](const std::string& s) { return std::size_t(std::find(ring.begin(), ring.end(), s) - ring.begin()); };
  std::vector<int> dist(n, -1);
  std::deque<std::size_t> q{index(a)};
  dist[q.front()] = 0;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (std::size_t v : {(u + 1) % n, (u + n - 1) % n}) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return std::size_t(dist[index(b)]) + 1;
}

Result criterion1() {
  Checker c;
  auto points = all_emotions();
  c.expect(points.size() == 15, "expected 15 emotions");
  std::sort(points.begin(), points.end(), [](const EmotionPoint& x, const EmotionPoint& y) {
    return std::atan2(x.arousal, x.valence) < std::atan2(y.arousal, y.valence);
  });
  std::vector<std::string> ring;
  for (const auto& p : points) ring.push_back(p.name);

  const auto t0 = Clock::now();
  std::size_t pairs = 0;
  for (const auto& a : ring) {
    for (const auto& b : ring) {
      const auto path = plan_path(a, b);
      ++pairs;
      c.expect(path.states.size() == bfs_states(ring, a, b), a + " -> " + b + " state count differs from BFS");
      c.expect(!path.states.empty() && path.states.front() == a && path.states.back() == b, a + " -> " + b + " endpoints");
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(pairs == 225, "expected 225 ordered pairs");
  c.expect(elapsed < 1.0, "planner took " + fmt(elapsed) + " s");
  if (c.r.verdict == Verdict::kPass) c.r.detail = "225 pairs match BFS in " + fmt(elapsed * 1000) + " ms";
  return c.r;
}

// ---- 2: session algebra ----

Result criterion2() {
  Checker c;
  const SessionConfig defaults;
  const auto n = segment_count(defaults.target_duration_s, defaults.clip_duration_s, defaults.dsp.crossfade_fraction);
  c.expect(n == 40, "N = " + std::to_string(n));
  const auto plan = plan_session(defaults, default_mood_mapping(), TagStats{});
  c.expect(plan.segments.size() == 40, "plan has " + std::to_string(plan.segments.size()) + " segments");
  const std::vector<std::size_t> clips(40, 30 * kRate);
  const auto total = assembled_length(clips, 0.25);
  c.expect(total == 29'040'000, "assembled length " + std::to_string(total));
  c.expect(total == 30 * kRate + 39 * std::size_t(22.5 * kRate), "length formula");

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const double clip = 5.0 + double(rng() % 56);                    // 5..60 s
    const double f = double(rng() % 50) / 100.0;                     // 0..0.49
    const double target = clip + double(rng() % 3000) / 2.0;         // up to +1500 s
    const auto m = segment_count(target, clip, f);
    const std::size_t len = std::size_t(std::llround(clip * kRate));
    const std::size_t overlap = crossfade_overlap(len, f);
    const std::size_t step = len - overlap;
    // Independent count: fewest clips whose assembled length reaches the target.
    std::size_t expected = 1;
    while (double(len + (expected - 1) * step) < target * kRate - 1e-6) ++expected;
    c.expect(m == expected, "segment_count(" + fmt(target) + ", " + fmt(clip) + ", " + fmt(f) + ") = " +
                                std::to_string(m) + ", oracle " + std::to_string(expected));
    const auto assembled = assembled_length(std::vector<std::size_t>(m, len), f);
    c.expect(assembled == len + (m - 1) * step, "assembled length formula for random triple");
  }
  if (c.r.verdict == Verdict::kPass) c.r.detail = "N=40, 29040000 samples (907.5 s), 200 random triples";
  return c.r;
}

// ---- 3: DSP invariants ----

AudioClip sine(double freq, double amp, double seconds) {
  AudioClip clip;
  for (std::size_t i = 0; i < std::size_t(seconds * kRate); ++i) {
    clip.samples.push_back(float(amp * std::sin(2 * kPi * freq * double(i) / kRate)));
  }
  return clip;
}

AudioClip white_noise(double rms_dbfs, double seconds, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n(0.0, std::pow(10.0, rms_dbfs / 20.0));
  AudioClip clip;
  for (std::size_t i = 0; i < std::size_t(seconds * kRate); ++i) clip.samples.push_back(float(n(g)));
  return clip;
}

double rms_range(const AudioClip& c, std::size_t a, std::size_t b) {
  double e = 0.0;
  for (std::size_t i = a; i < b; ++i) e += double(c.samples[i]) * c.samples[i];
  return std::sqrt(e / double(b - a));
}

double bin_power_db(const std::vector<float>& x, double freq) {
  const auto s = stft(x);
  const auto b = std::size_t(std::lround(freq * 1024 / kRate));
  double e = 0.0;
  std::size_t k = 0;
  for (std::size_t f = s.layout.frames * 3 / 8; f < s.layout.frames * 5 / 8; ++f, ++k) e += std::norm(s.frame(f)[b]);
  return 10 * std::log10(e / double(k));
}

Result criterion3() {
  Checker c;
  const auto t0 = Clock::now();

  std::mt19937 rng(8);
  double worst = 0.0;
  for (std::size_t len : {1024u, 1500u, 32000u, 96007u}) {
    std::vector<float> x(len);
    for (auto& v : x) v = std::uniform_real_distribution<float>(-1, 1)(rng);
    const auto y = istft(stft(x));
    c.expect(y.size() == len, "istft length");
    for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, double(std::abs(y[i] - x[i])));
  }
  c.expect(worst < 1e-6, "STFT round trip error " + fmt(worst));

  // Constant-amplitude fixtures: |x| = c everywhere with independent random signs per clip.
  double rms_dev = 0.0;
  for (float amp : {0.1f, 0.3f, 0.8f}) {
    std::vector<AudioClip> clips;
    for (std::uint64_t seed : {1u, 2u}) {
      std::mt19937_64 g(seed + std::uint64_t(amp * 100));
      AudioClip clip;
      for (std::size_t i = 0; i < 30u * kRate; ++i) clip.samples.push_back((g() & 1) ? amp : -amp);
      clips.push_back(std::move(clip));
    }
    const auto out = crossfade_concat(clips, 0.25);
    const std::size_t ov = crossfade_overlap(30 * kRate, 0.25), base = 30 * kRate - ov;
    rms_dev = std::max(rms_dev, std::abs(rms_range(out, base, base + ov) / amp - 1.0));
  }
  c.expect(rms_dev < 0.01, "crossfade RMS deviation " + fmt(rms_dev));

  auto gain_db = [](double freq) {
    const auto in = sine(freq, 0.5, 3);
    const auto out = highpass(in, 40.0, 0.7071);
    return 20 * std::log10(rms_range(out, kRate, 3 * kRate) / rms_range(in, kRate, 3 * kRate));
  };
  const double g5 = gain_db(5), g400 = gain_db(400);
  c.expect(g5 <= -30.0, "5 Hz gain " + fmt(g5) + " dB");
  c.expect(std::abs(g400) <= 1.0, "400 Hz gain " + fmt(g400) + " dB");

  const GateParams gate = DspConfig{}.gate_params();
  const auto noise = white_noise(-40, 4, 1);
  const double reduction = 20 * std::log10(rms(noise) / rms(spectral_gate(noise, gate)));
  c.expect(reduction >= 6.0, "noise reduction " + fmt(reduction) + " dB");

  auto mix = white_noise(-40, 4, 2);
  const double amp = db_to_gain(-6);
  for (std::size_t i = kRate; i < 3u * kRate; ++i) mix.samples[i] += float(amp * std::sin(2 * kPi * 1000.0 * i / kRate));
  const auto gated = spectral_gate(mix, gate);
  const double tone_delta = bin_power_db(gated.samples, 1000.0) - bin_power_db(mix.samples, 1000.0);
  c.expect(std::abs(tone_delta) <= 1.0, "tone bin changed by " + fmt(tone_delta) + " dB");

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0, "DSP checks took " + fmt(elapsed) + " s");
  if (c.r.verdict == Verdict::kPass) {
    c.r.detail = "stft err " + fmt(worst) + ", xfade dev " + fmt(rms_dev * 100) + "%, 5 Hz " + fmt(g5) + " dB, 400 Hz " +
                 fmt(g400) + " dB, gate -" + fmt(reduction) + " dB, tone " + fmt(tone_delta) + " dB";
  }
  return c.r;
}

// ---- 4: metric oracles ----

Result criterion4() {
  Checker c;
  std::mt19937 rng(1);
  for (std::size_t len = 1; len <= 8; ++len) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> s(len);
      for (auto& x : s) x = double(rng() % 11) / 10.0;
      for (unsigned mask = 0; mask < (1u << len); ++mask) {
        std::vector<int> y(len);
        for (std::size_t i = 0; i < len; ++i) y[i] = (mask >> i) & 1;
        int agree = 0;
        for (std::size_t i = 0; i < len; ++i) agree += y[i] == (s[i] >= 0.5);
        c.expect(hamming_score(y, s) == double(agree) / double(len), "hamming mismatch");
        if (mask == 0) continue;
        // AP by brute force: precision at each positive's rank, ties broken by input order.
        double sum = 0.0;
        int pos = 0;
        for (std::size_t i = 0; i < len; ++i) {
          if (!y[i]) continue;
          ++pos;
          int above = 0, pos_above = 0;
          for (std::size_t j = 0; j < len; ++j) {
            if (s[j] > s[i] || (s[j] == s[i] && j <= i)) ++above, pos_above += y[j];
          }
          sum += double(pos_above) / above;
        }
        c.expect(std::abs(auprc(s, y) - sum / pos) < 1e-12, "auprc mismatch");
      }
    }
  }
  const double k = fleiss_kappa({{3, 0}, {0, 3}, {2, 1}}).kappa;
  c.expect(std::abs(k - 0.550) <= 1e-3, "kappa " + fmt(k));
  const double one = fleiss_kappa({{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}).kappa;
  c.expect(one == 1.0, "all-agree kappa " + fmt(one));
  if (c.r.verdict == Verdict::kPass) c.r.detail = "lengths 1..8 x 1000 score vectors, kappa " + fmt(k);
  return c.r;
}

// ---- 5: determinism through the CLI ----

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string file_digest(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

Result criterion5(const fs::path& dir) {
  Checker c;
  const std::string cli = MUSMED_CLI;
  const std::string base = cli + " --log-level warn generate --backend stub --seed 7 --mapping " MUSMED_DATA_DIR
                                 "/mood_mapping.tsv";
  const auto t0 = Clock::now();
  const int rc1 = run(base + " -o " + (dir / "a.wav").string() + " > /dev/null");
  const double elapsed = seconds_since(t0);
  const int rc2 = run(base + " -o " + (dir / "b.wav").string() + " > /dev/null");
  c.expect(rc1 == 0 && rc2 == 0, "generate exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2));
  if (c.r.verdict != Verdict::kPass) return c.r;

  const auto wa = file_digest(dir / "a.wav"), wb = file_digest(dir / "b.wav");
  const auto ma = file_digest(dir / "a.manifest.json"), mb = file_digest(dir / "b.manifest.json");
  c.expect(wa == wb, "WAV digests differ");
  c.expect(ma == mb, "manifest digests differ");
  const auto samples = (fs::file_size(dir / "a.wav") - 44) / 4;
  c.expect(samples > 0 && double(samples) / kRate <= 907.5, "unexpected session length " + std::to_string(samples));
  c.expect(elapsed < 120.0, "907.5 s session took " + fmt(elapsed) + " s");
  if (c.r.verdict == Verdict::kPass) {
    c.r.detail = "wav " + wa.substr(0, 12) + ", manifest " + ma.substr(0, 12) + ", " + fmt(elapsed) + " s wall";
  }
  return c.r;
}

// ---- 6: temperature contract ----

Result criterion6() {
  Checker c;
  TagStats s;
  s.per_mood["happy"] = {{{"guitar", 0.6}, {"piano", 0.4}}, {{"folk", 0.3}, {"pop", 0.7}}, 30};
  const PromptSpec prev{"happy", "happy", "guitar", "pop"};
  std::string detail;
  for (double tau : {0.0, 0.1, 0.5, 0.9}) {
    int inst = 0, gen = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
      const auto t = sample_transition(prev, "happy", s, default_mood_mapping(), {tau, 99}, std::uint64_t(i));
      inst += t.instrument_redrawn;
      gen += t.genre_redrawn;
    }
    const double ri = inst / double(trials), rg = gen / double(trials);
    if (tau == 0.0) {
      c.expect(inst == 0 && gen == 0, "tau=0 produced switches");
    } else {
      c.expect(std::abs(ri - tau) <= 0.02 && std::abs(rg - tau) <= 0.02,
               "tau=" + fmt(tau) + " rates " + fmt(ri) + "/" + fmt(rg));
    }
    detail += (detail.empty() ? "" : ", ") + fmt(tau) + ":" + fmt(ri) + "/" + fmt(rg);
  }
  if (c.r.verdict == Verdict::kPass) c.r.detail = "instrument/genre rates " + detail;
  return c.r;
}

// ---- 7: ingestion ----

Result criterion7() {
  Checker c;
  std::ifstream in(MUSMED_DATA_DIR "/jamendo_moodtheme_excerpt.tsv");
  c.expect(bool(in), "fixture missing");
  if (!in) return c.r;
  const auto parsed = parse_jamendo_tsv(in);
  c.expect(!parsed.records.empty(), "no records parsed");
  const auto stats = compute_tag_stats(parsed.records);
  c.expect(!stats.per_mood.empty(), "no moods");
  double worst = 0.0;
  for (const auto& [mood, ms] : stats.per_mood) {
    for (const auto* dist : {&ms.instrument_dist, &ms.genre_dist}) {
      if (dist->empty()) continue;
      double sum = 0.0;
      for (const auto& [label, p] : *dist) sum += p;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  c.expect(worst <= 1e-9, "distribution sum off by " + fmt(worst));
  const auto text = serialize_tag_stats(stats);
  const auto back = parse_tag_stats(text);
  c.expect(back == stats, "stats do not round-trip");
  c.expect(serialize_tag_stats(back) == text, "re-serialized stats differ");
  if (c.r.verdict == Verdict::kPass) {
    c.r.detail = std::to_string(parsed.records.size()) + " tracks, " + std::to_string(stats.per_mood.size()) +
                 " moods, max |sum-1| " + fmt(worst);
  }
  return c.r;
}

// ---- 8: service contract ----

Result criterion8(const fs::path& dir) {
  RemoteConfig rc;
  if (const char* env = std::getenv("MUSMED_ENDPOINT")) rc.endpoint = env;
  rc.timeout = std::chrono::milliseconds(600000);
  RemoteBackend backend(rc);
  if (!backend.healthy()) return {Verdict::kSkip, "no service at " + rc.endpoint};

  Checker c;
  try {
    GenerationRequest req;
    req.prompt = "calm, piano, classical";
    req.duration_s = 5.0;
    req.seed = 1;
    const auto clip = backend.generate(req);
    c.expect(clip.sample_rate == kRate, "sample rate " + std::to_string(clip.sample_rate));
    const double n = double(clip.size());
    c.expect(std::abs(n - 160000.0) <= 16000.0, "5 s request returned " + std::to_string(clip.size()) + " samples");
  } catch (const Error& e) {
    c.expect(false, std::string("5 s request: ") + e.what());
  }
  const int code = run(std::string(MUSMED_CLI) + " --log-level warn generate --backend remote --endpoint " + rc.endpoint +
                       " --duration 60 --seed 3 -o " + (dir / "remote.wav").string() + " > /dev/null");
  c.expect(code == 0, "remote generate exit code " + std::to_string(code));
  if (c.r.verdict == Verdict::kPass) c.r.detail = "service at " + rc.endpoint;
  return c.r;
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("musmed_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 path planner", criterion1},
      {"2 session algebra", criterion2},
      {"3 dsp invariants", criterion3},
      {"4 metric oracles", criterion4},
      {"5 determinism", [&] { return criterion5(dir); }},
      {"6 temperature", criterion6},
      {"7 ingestion", criterion7},
      {"8 service contract", [&] { return criterion8(dir); }},
  };

  bool failed = false;
  for (const auto& [name, fn] : criteria) {
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.verdict == Verdict::kPass ? "PASS" : r.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    std::cout << tag << "  criterion " << name << "  " << r.detail << std::endl;
    failed |= r.verdict == Verdict::kFail;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return failed ? 1 : 0;
}
