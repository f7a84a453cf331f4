#include "musmed/emotion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "musmed/error.hpp"

namespace musmed {
namespace {

// Plotted circumplex coordinates; the drawn circle has radius 2.5.
constexpr double kPlotRadius = 2.5;

struct PlotPoint {
  std::string_view name;
  double x;
  double y;
};

constexpr std::array<PlotPoint, kEmotionCount> kPlot = {{
    {"alert", 0.5, 2.3},
    {"excited", 1.25, 1.8125},
    {"elated", 1.75, 1.0625},
    {"happy", 1.9, 0.375},
    {"contented", 1.8, -0.1875},
    {"serene", 1.75, -1.0625},
    {"relaxed", 1.25, -1.6875},
    {"calm", 0.375, -2.2},
    {"bored", -0.5, -2.1875},
    {"depressed", -1.3625, -1.25},
    {"sad", -2.125, -0.375},
    {"upset", -2.075, 0.1875},
    {"stressed", -1.55, 1.0625},
    {"nervous", -1.05, 1.7125},
    {"tense", -0.4125, 2.2125},
}};

EmotionPoint make_point(const PlotPoint& f) {
  EmotionPoint p;
  p.name = std::string(f.name);
  p.valence = f.x / kPlotRadius;
  p.arousal = f.y / kPlotRadius;
  double a = std::atan2(p.arousal, p.valence);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  p.angle = a;
  return p;
}

const PlotPoint* find_plot_point(std::string_view lowered) {
  for (const auto& f : kPlot) {
    if (f.name == lowered) return &f;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// clang-format off
constexpr std::array<std::pair<std::string_view, std::string_view>, 56> kDefaultMapping = {{
    {"action", "excited"},      {"adventure", "excited"},   {"advertising", "happy"},
    {"background", "calm"},     {"ballad", "serene"},       {"calm", "calm"},
    {"children", "happy"},      {"christmas", "happy"},     {"commercial", "happy"},
    {"cool", "contented"},      {"corporate", "contented"}, {"dark", "depressed"},
    {"deep", "serene"},         {"documentary", "calm"},    {"drama", "tense"},
    {"dramatic", "stressed"},   {"dream", "serene"},        {"emotional", "sad"},
    {"energetic", "excited"},   {"epic", "elated"},         {"fast", "alert"},
    {"film", "tense"},          {"fun", "elated"},          {"funny", "elated"},
    {"game", "excited"},        {"groovy", "happy"},        {"happy", "happy"},
    {"heavy", "upset"},         {"holiday", "happy"},       {"hopeful", "contented"},
    {"inspiring", "elated"},    {"love", "contented"},      {"meditative", "relaxed"},
    {"melancholic", "sad"},     {"melodic", "serene"},      {"motivational", "excited"},
    {"movie", "tense"},         {"nature", "relaxed"},      {"party", "excited"},
    {"positive", "happy"},      {"powerful", "alert"},      {"relaxing", "relaxed"},
    {"retro", "contented"},     {"romantic", "serene"},     {"sad", "sad"},
    {"sexy", "relaxed"},        {"slow", "bored"},          {"soft", "calm"},
    {"soundscape", "calm"},     {"space", "serene"},        {"sport", "alert"},
    {"summer", "happy"},        {"trailer", "nervous"},     {"travel", "contented"},
    {"upbeat", "elated"},       {"uplifting", "elated"},
}};
// clang-format on

}  // namespace

const std::array<std::string_view, kEmotionCount>& canonical_emotions() {
  static const std::array<std::string_view, kEmotionCount> names = [] {
    std::array<std::string_view, kEmotionCount> out{};
    for (std::size_t i = 0; i < kEmotionCount; ++i) out[i] = kPlot[i].name;
    return out;
  }();
  return names;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_canonical_emotion(std::string_view name) {
  return find_plot_point(to_lower(name)) != nullptr;
}

EmotionPoint emotion_coords(std::string_view name) {
  const auto lowered = to_lower(name);
  const PlotPoint* f = find_plot_point(lowered);
  if (f == nullptr) throw Error(ErrorCode::kUnknownEmotion, "'" + std::string(name) + "'");
  return make_point(*f);
}

std::vector<EmotionPoint> all_emotions() {
  std::vector<EmotionPoint> out;
  out.reserve(kEmotionCount);
  for (const auto& f : kPlot) out.push_back(make_point(f));
  return out;
}

const std::vector<std::string>& angular_ring() {
  static const std::vector<std::string> ring = [] {
    auto points = all_emotions();
    std::sort(points.begin(), points.end(),
              [](const EmotionPoint& a, const EmotionPoint& b) { return a.angle < b.angle; });
    std::vector<std::string> names;
    for (auto& p : points) names.push_back(std::move(p.name));
    return names;
  }();
  return ring;
}

double angular_distance_deg(const EmotionPoint& a, const EmotionPoint& b) {
  double d = std::fabs(a.angle - b.angle);
  if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
  return d * 180.0 / std::numbers::pi;
}

MoodMapping MoodMapping::from_entries(const std::map<std::string, std::string>& entries) {
  MoodMapping m;
  for (const auto& [tag, emotion] : entries) {
    auto key = to_lower(trim(tag));
    if (key.empty()) throw Error(ErrorCode::kMappingParse, "empty tag");
    auto value = to_lower(trim(emotion));
    if (!is_canonical_emotion(value)) {
      throw Error(ErrorCode::kMappingParse,
                  "tag '" + key + "' maps to non-canonical emotion '" + emotion + "'");
    }
    if (!m.entries_.emplace(key, value).second) {
      throw Error(ErrorCode::kMappingParse, "duplicate tag '" + key + "'");
    }
  }
  return m;
}

MoodMapping MoodMapping::parse(std::istream& in) {
  MoodMapping m;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kMappingParse, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) fail("expected 'tag<TAB>emotion'");
    auto tag = to_lower(trim(std::string_view(line).substr(0, tab)));
    auto emotion = to_lower(trim(std::string_view(line).substr(tab + 1)));
    if (tag.empty()) fail("empty tag");
    if (emotion.find('\t') != std::string::npos) fail("too many fields");
    if (!is_canonical_emotion(emotion)) fail("unknown emotion '" + emotion + "'");
    if (!m.entries_.emplace(tag, emotion).second) fail("duplicate tag '" + tag + "'");
  }
  return m;
}

MoodMapping MoodMapping::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open mapping file " + path);
  return parse(in);
}

const std::string& MoodMapping::map(std::string_view tag) const {
  auto it = entries_.find(to_lower(tag));
  if (it == entries_.end()) throw Error(ErrorCode::kUnmappedTag, "'" + std::string(tag) + "'");
  return it->second;
}

bool MoodMapping::contains(std::string_view tag) const {
  return entries_.count(to_lower(tag)) != 0;
}

std::vector<std::string> MoodMapping::tags_for(std::string_view emotion) const {
  const auto lowered = to_lower(emotion);
  std::vector<std::string> out;
  for (const auto& [tag, value] : entries_) {
    if (value == lowered) out.push_back(tag);
  }
  return out;
}

std::string MoodMapping::serialize() const {
  std::ostringstream os;
  for (const auto& [tag, emotion] : entries_) os << tag << '\t' << emotion << '\n';
  return os.str();
}

const MoodMapping& default_mood_mapping() {
  static const MoodMapping mapping = [] {
    std::map<std::string, std::string> entries;
    for (const auto& [tag, emotion] : kDefaultMapping) entries.emplace(tag, emotion);
    return MoodMapping::from_entries(entries);
  }();
  return mapping;
}

std::string map_mood_tag(std::string_view tag, const MoodMapping& mapping) {
  if (mapping.empty()) throw Error(ErrorCode::kInvalidArgument, "mood mapping is empty");
  return mapping.map(tag);
}

IsoPath plan_path(std::string_view start, std::string_view goal) {
  const auto from = emotion_coords(start).name;
  const auto to = emotion_coords(goal).name;
  const auto& ring = angular_ring();
  const auto n = static_cast<long>(ring.size());
  auto index_of = [&](const std::string& name) {
    return static_cast<long>(std::find(ring.begin(), ring.end(), name) - ring.begin());
  };
  const long i = index_of(from);
  const long j = index_of(to);
  const long forward = ((j - i) % n + n) % n;  // steps with increasing angle
  const long backward = n - forward;

  auto walk = [&](long step, long count) {
    IsoPath path;
    for (long k = 0; k <= count; ++k) path.states.push_back(ring[((i + step * k) % n + n) % n]);
    return path;
  };
  if (forward == 0) return walk(1, 0);
  if (forward < backward) return walk(1, forward);
  if (backward < forward) return walk(-1, backward);

  // Equal arcs: compare the valence at each arc's midpoint.
  auto midpoint_valence = [&](long step) {
    const long half = forward / 2;
    auto v = [&](long k) { return emotion_coords(ring[((i + step * k) % n + n) % n]).valence; };
    return forward % 2 == 0 ? v(half) : 0.5 * (v(half) + v(half + 1));
  };
  return midpoint_valence(1) >= midpoint_valence(-1) ? walk(1, forward) : walk(-1, backward);
}

}  // namespace musmed
