#pragma once

#include <array>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace musmed {

// A named point on the valence/arousal circumplex, normalized to the unit disc.
struct EmotionPoint {
  std::string name;
  double valence = 0.0;
  double arousal = 0.0;
  double angle = 0.0;  // radians in [0, 2*pi)
};

inline constexpr std::size_t kEmotionCount = 15;

// Canonical labels in drawing order (clockwise from the top of the circle).
const std::array<std::string_view, kEmotionCount>& canonical_emotions();

bool is_canonical_emotion(std::string_view name);

// Case-insensitive. Throws UnknownEmotion.
EmotionPoint emotion_coords(std::string_view name);

std::vector<EmotionPoint> all_emotions();

// Labels sorted by ascending angle; ring adjacency is defined on this order.
const std::vector<std::string>& angular_ring();

// Smallest absolute angle between two emotions, in degrees, in [0, 180].
double angular_distance_deg(const EmotionPoint& a, const EmotionPoint& b);

std::string to_lower(std::string_view s);

class MoodMapping {
 public:
  MoodMapping() = default;

  // Keys are lowercased; values are validated against the canonical labels.
  static MoodMapping from_entries(const std::map<std::string, std::string>& entries);

  // `tag<TAB>emotion` per line, `#` comments. Throws MappingParse with the line number.
  static MoodMapping parse(std::istream& in);
  static MoodMapping load(const std::string& path);

  // Throws UnmappedTag when the tag is absent.
  const std::string& map(std::string_view tag) const;
  bool contains(std::string_view tag) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // All tags whose mapped emotion equals `emotion`, in lexicographic order.
  std::vector<std::string> tags_for(std::string_view emotion) const;

  std::string serialize() const;

 private:
  std::map<std::string, std::string> entries_;
};

// The shipped default covering the 56 MTG-Jamendo mood/theme tags.
const MoodMapping& default_mood_mapping();

std::string map_mood_tag(std::string_view tag, const MoodMapping& mapping);

struct IsoPath {
  std::vector<std::string> states;
};

// Walks ring-adjacent emotions from start to goal along the shorter arc.
// Equal arcs go the way whose midpoint state has the higher valence.
IsoPath plan_path(std::string_view start, std::string_view goal);

}  // namespace musmed
