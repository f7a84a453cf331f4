#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace musmed {

enum class TagCategory { kGenre, kInstrument, kMoodTheme };

struct Tag {
  TagCategory category;
  std::string value;

  bool operator==(const Tag&) const = default;
};

struct TrackRecord {
  std::string track_id;
  double duration_s = 0.0;
  std::vector<Tag> tags;
};

struct ParseIssue {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParseResult {
  std::vector<TrackRecord> records;
  std::vector<ParseIssue> errors;
  std::size_t unknown_category_tags = 0;
};

// Reads the MTG-Jamendo autotagging TSV layout:
//   TRACK_ID  ARTIST_ID  ALBUM_ID  PATH  DURATION  <category>---<value> ...
// Malformed rows are reported and skipped; parsing continues.
ParseResult parse_jamendo_tsv(std::istream& in);

// Normalized label frequencies; labels with zero count are absent.
using Distribution = std::map<std::string, double>;

struct MoodStats {
  Distribution instrument_dist;
  Distribution genre_dist;
  std::size_t track_count = 0;

  bool operator==(const MoodStats&) const = default;
};

struct TagStats {
  std::map<std::string, MoodStats> per_mood;

  bool operator==(const TagStats&) const = default;
};

// Per mood: P(label | mood) over all tag occurrences of the label's category
// among tracks with that mood. Duplicate tags within a track count once.
TagStats compute_tag_stats(std::span<const TrackRecord> records);

inline constexpr int kStatsFormatVersion = 1;

std::string serialize_tag_stats(const TagStats& stats);
TagStats parse_tag_stats(const std::string& text);

void save_tag_stats(const TagStats& stats, const std::string& path);
TagStats load_tag_stats(const std::string& path);

}  // namespace musmed
