#include "musmed/prompt.hpp"

#include <algorithm>
#include <cctype>

#include "musmed/error.hpp"
#include "musmed/rng.hpp"

namespace musmed {

void validate(const PromptSpec& spec) {
  auto check = [](const std::string& field, const char* name) {
    if (field.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " is empty");
    if (std::any_of(field.begin(), field.end(),
                    [](unsigned char c) { return std::isupper(c) != 0; })) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be lowercase");
    }
  };
  check(spec.mood_tag, "mood_tag");
  check(spec.emotion, "emotion");
  check(spec.instrument, "instrument");
  check(spec.genre, "genre");
}

std::string render_prompt(const PromptSpec& spec) {
  validate(spec);
  std::string out = spec.mood_tag;
  if (spec.emotion != spec.mood_tag) out += ", " + spec.emotion;
  out += ", " + spec.instrument;
  out += ", " + spec.genre;
  return out;
}

MoodChoice select_mood(std::string_view emotion, const TagStats& stats,
                       const MoodMapping& mapping) {
  const auto target = emotion_coords(emotion).name;
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  // per_mood iterates lexicographically, so strict > keeps the smaller tag on ties.
  for (const auto& [mood, ms] : stats.per_mood) {
    if (!mapping.contains(mood) || mapping.map(mood) != target) continue;
    if (best == nullptr || ms.track_count > best_count) {
      best = &mood;
      best_count = ms.track_count;
    }
  }
  if (best != nullptr) return {*best, true};

  const auto tags = mapping.tags_for(target);
  if (tags.empty()) throw Error(ErrorCode::kNoMoodForEmotion, "no mood tag maps to " + target);
  if (std::find(tags.begin(), tags.end(), target) != tags.end()) return {target, false};
  return {tags.front(), false};
}

const std::string& sample_categorical(const Distribution& dist, double u) {
  if (dist.empty()) throw Error(ErrorCode::kEmptyDistribution, "empty distribution");
  double cumulative = 0.0;
  for (const auto& [label, p] : dist) {
    cumulative += p;
    if (u < cumulative) return label;
  }
  return std::prev(dist.end())->first;
}

Transition sample_transition(const PromptSpec& prev, std::string_view next_emotion,
                             const TagStats& stats, const MoodMapping& mapping,
                             const TransitionPolicy& policy, std::uint64_t step_index) {
  if (!(policy.temperature >= 0.0 && policy.temperature <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must lie in [0, 1]");
  }
  const auto mood = select_mood(next_emotion, stats, mapping);

  Transition t;
  t.spec = prev;
  t.spec.emotion = emotion_coords(next_emotion).name;
  t.spec.mood_tag = mood.tag;

  auto gen = make_stream(policy.rng_seed ^ kTransitionDomain, step_index);
  const double inst_switch = uniform01(gen);
  const double inst_pick = uniform01(gen);
  const double genre_switch = uniform01(gen);
  const double genre_pick = uniform01(gen);

  const MoodStats* ms = nullptr;
  if (auto it = stats.per_mood.find(mood.tag); it != stats.per_mood.end()) ms = &it->second;

  auto redraw = [&](bool fire, double pick, const Distribution* dist, std::string& field,
                    const char* name) {
    if (!fire) return false;
    if (dist == nullptr || dist->empty()) {
      t.events.push_back(std::string("EmptyDistribution:") + name + ":" + mood.tag);
      return false;
    }
    field = sample_categorical(*dist, pick);
    return true;
  };
  t.instrument_redrawn = redraw(inst_switch < policy.temperature, inst_pick,
                                ms ? &ms->instrument_dist : nullptr, t.spec.instrument,
                                "instrument");
  t.genre_redrawn = redraw(genre_switch < policy.temperature, genre_pick,
                           ms ? &ms->genre_dist : nullptr, t.spec.genre, "genre");
  return t;
}

}  // namespace musmed
