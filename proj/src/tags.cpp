#include "musmed/tags.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "musmed/error.hpp"

namespace musmed {
namespace {

constexpr std::size_t kFixedColumns = 5;
constexpr std::string_view kSeparator = "---";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

bool parse_category(std::string_view s, TagCategory& out) {
  if (s == "genre") {
    out = TagCategory::kGenre;
  } else if (s == "instrument") {
    out = TagCategory::kInstrument;
  } else if (s == "mood/theme") {
    out = TagCategory::kMoodTheme;
  } else {
    return false;
  }
  return true;
}

Distribution normalize(const std::map<std::string, std::size_t>& counts, std::size_t denom) {
  Distribution d;
  if (denom == 0) return d;
  for (const auto& [label, c] : counts) {
    d.emplace(label, static_cast<double>(c) / static_cast<double>(denom));
  }
  return d;
}

nlohmann::json dist_to_json(const Distribution& d) {
  auto j = nlohmann::json::object();
  for (const auto& [label, p] : d) j[label] = p;
  return j;
}

Distribution dist_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kStatsFormat, where + " must be an object");
  Distribution d;
  double sum = 0.0;
  for (const auto& [label, p] : j.items()) {
    if (!p.is_number()) throw Error(ErrorCode::kStatsFormat, where + "." + label + " not numeric");
    const double v = p.get<double>();
    if (!(v > 0.0) || v > 1.0) {
      throw Error(ErrorCode::kStatsFormat, where + "." + label + " outside (0, 1]");
    }
    d.emplace(label, v);
    sum += v;
  }
  if (!d.empty() && std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kStatsFormat, where + " does not sum to 1");
  }
  return d;
}

}  // namespace

ParseResult parse_jamendo_tsv(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) return result;
  ++line_no;
  if (line.rfind("TRACK_ID", 0) != 0) {
    result.errors.push_back({line_no, "header must begin with TRACK_ID"});
    return result;
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    auto fields = split_tabs(line);
    if (fields.size() < kFixedColumns + 1) {
      result.errors.push_back({line_no, "expected at least 6 fields, got " +
                                            std::to_string(fields.size())});
      continue;
    }
    TrackRecord rec;
    rec.track_id = std::string(fields[0]);
    if (rec.track_id.empty()) {
      result.errors.push_back({line_no, "empty TRACK_ID"});
      continue;
    }
    const auto dur = fields[4];
    auto [ptr, ec] = std::from_chars(dur.data(), dur.data() + dur.size(), rec.duration_s);
    if (ec != std::errc() || ptr != dur.data() + dur.size() || !(rec.duration_s >= 0.0)) {
      result.errors.push_back({line_no, "bad DURATION '" + std::string(dur) + "'"});
      continue;
    }

    bool ok = true;
    std::size_t unknown = 0;
    for (std::size_t k = kFixedColumns; k < fields.size(); ++k) {
      const auto field = fields[k];
      if (field.empty()) continue;
      const auto sep = field.find(kSeparator);
      if (sep == std::string_view::npos) {
        result.errors.push_back({line_no, "tag '" + std::string(field) + "' lacks '---'"});
        ok = false;
        break;
      }
      TagCategory cat;
      if (!parse_category(field.substr(0, sep), cat)) {
        ++unknown;
        continue;
      }
      rec.tags.push_back({cat, std::string(field.substr(sep + kSeparator.size()))});
    }
    if (!ok) continue;
    result.unknown_category_tags += unknown;
    result.records.push_back(std::move(rec));
  }

  if (result.unknown_category_tags > 0) {
    spdlog::warn("dropped {} tags with unknown categories", result.unknown_category_tags);
  }
  return result;
}

TagStats compute_tag_stats(std::span<const TrackRecord> records) {
  struct Counts {
    std::size_t tracks = 0;
    // Tag occurrences, not tracks: multi-instrument tracks would otherwise
    // push a distribution's mass above one.
    std::size_t instrument_total = 0;
    std::size_t genre_total = 0;
    std::map<std::string, std::size_t> instrument;
    std::map<std::string, std::size_t> genre;
  };
  std::map<std::string, Counts> counts;

  for (const auto& rec : records) {
    std::set<std::string> moods, instruments, genres;
    for (const auto& tag : rec.tags) {
      switch (tag.category) {
        case TagCategory::kMoodTheme: moods.insert(tag.value); break;
        case TagCategory::kInstrument: instruments.insert(tag.value); break;
        case TagCategory::kGenre: genres.insert(tag.value); break;
      }
    }
    for (const auto& mood : moods) {
      auto& c = counts[mood];
      ++c.tracks;
      c.instrument_total += instruments.size();
      c.genre_total += genres.size();
      for (const auto& v : instruments) ++c.instrument[v];
      for (const auto& v : genres) ++c.genre[v];
    }
  }

  TagStats stats;
  for (const auto& [mood, c] : counts) {
    MoodStats ms;
    ms.track_count = c.tracks;
    ms.instrument_dist = normalize(c.instrument, c.instrument_total);
    ms.genre_dist = normalize(c.genre, c.genre_total);
    stats.per_mood.emplace(mood, std::move(ms));
  }
  return stats;
}

std::string serialize_tag_stats(const TagStats& stats) {
  nlohmann::json j;
  j["format"] = "musmed-tag-stats";
  j["format_version"] = kStatsFormatVersion;
  auto moods = nlohmann::json::object();
  for (const auto& [mood, ms] : stats.per_mood) {
    moods[mood] = {
        {"track_count", ms.track_count},
        {"instrument", dist_to_json(ms.instrument_dist)},
        {"genre", dist_to_json(ms.genre_dist)},
    };
  }
  j["moods"] = std::move(moods);
  return j.dump(2) + "\n";
}

TagStats parse_tag_stats(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kStatsFormat, e.what());
  }
  if (!j.is_object() || j.value("format", "") != "musmed-tag-stats") {
    throw Error(ErrorCode::kStatsFormat, "not a tag stats document");
  }
  if (!j.contains("format_version") || j["format_version"] != kStatsFormatVersion) {
    throw Error(ErrorCode::kStatsFormat, "unsupported format_version");
  }
  if (!j.contains("moods") || !j["moods"].is_object()) {
    throw Error(ErrorCode::kStatsFormat, "missing 'moods'");
  }
  TagStats stats;
  for (const auto& [mood, entry] : j["moods"].items()) {
    if (!entry.is_object() || !entry.contains("track_count") ||
        !entry["track_count"].is_number_unsigned()) {
      throw Error(ErrorCode::kStatsFormat, "moods." + mood + " malformed");
    }
    MoodStats ms;
    ms.track_count = entry["track_count"].get<std::size_t>();
    ms.instrument_dist = dist_from_json(entry.value("instrument", nlohmann::json::object()),
                                        "moods." + mood + ".instrument");
    ms.genre_dist = dist_from_json(entry.value("genre", nlohmann::json::object()),
                                   "moods." + mood + ".genre");
    stats.per_mood.emplace(mood, std::move(ms));
  }
  return stats;
}

void save_tag_stats(const TagStats& stats, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << serialize_tag_stats(stats);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

TagStats load_tag_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stats file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tag_stats(ss.str());
}

}  // namespace musmed
