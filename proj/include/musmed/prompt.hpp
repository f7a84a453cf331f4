#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "musmed/emotion.hpp"
#include "musmed/tags.hpp"

namespace musmed {

struct PromptSpec {
  std::string mood_tag;
  std::string emotion;
  std::string instrument;
  std::string genre;

  bool operator==(const PromptSpec&) const = default;
};

// Throws InvalidArgument unless every field is non-empty and lowercase.
void validate(const PromptSpec& spec);

// "<mood>, <emotion>, <instrument>, <genre>"; the emotion token is dropped
// when it repeats the mood tag.
std::string render_prompt(const PromptSpec& spec);

struct TransitionPolicy {
  double temperature = 0.0;  // per-field switch probability, [0, 1]
  std::uint64_t rng_seed = 0;
};

struct MoodChoice {
  std::string tag;
  // False when no mood in the stats maps to the emotion and the tag was
  // picked from the mapping alone.
  bool from_stats = true;
};

// Most frequent (by track count) stats mood mapping to `emotion`; ties go to
// the lexicographically smaller tag. Without stats coverage, falls back to a
// mapping key equal to the emotion label, then to the first mapping key.
// Throws NoMoodForEmotion when the mapping has no tag for the emotion.
MoodChoice select_mood(std::string_view emotion, const TagStats& stats,
                       const MoodMapping& mapping);

struct Transition {
  PromptSpec spec;
  bool instrument_redrawn = false;
  bool genre_redrawn = false;
  // "EmptyDistribution:<field>:<mood>" when a redraw had no data to draw from.
  std::vector<std::string> events;
};

// Random draws come from make_stream(rng_seed ^ kTransitionDomain, step_index),
// consumed in a fixed order: instrument switch, instrument pick, genre switch,
// genre pick. All four are drawn every call.
Transition sample_transition(const PromptSpec& prev, std::string_view next_emotion,
                             const TagStats& stats, const MoodMapping& mapping,
                             const TransitionPolicy& policy, std::uint64_t step_index);

// Inverse-CDF pick over labels in lexicographic order; u in [0, 1).
const std::string& sample_categorical(const Distribution& dist, double u);

}  // namespace musmed
