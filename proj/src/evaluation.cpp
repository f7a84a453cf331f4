#include "musmed/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "musmed/error.hpp"

namespace musmed {
namespace {

void check_pair(std::span<const int> truth, std::span<const double> scores) {
  if (truth.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(truth.size()) + " labels vs " +
                                                std::to_string(scores.size()) + " scores");
  }
  if (truth.empty()) throw Error(ErrorCode::kInvalidArgument, "empty label vector");
  for (int t : truth) {
    if (t != 0 && t != 1) throw Error(ErrorCode::kInvalidArgument, "truth values must be 0 or 1");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "scores must lie in [0, 1]");
  }
}

}  // namespace

double hamming_score(std::span<const int> truth, std::span<const double> scores, double threshold) {
  check_pair(truth, scores);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int predicted = scores[i] >= threshold ? 1 : 0;
    if (predicted == truth[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(truth.size());
}

double jaccard_accuracy(std::span<const int> truth, std::span<const double> scores, double threshold) {
  check_pair(truth, scores);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = scores[i] >= threshold;
    const bool t = truth[i] == 1;
    inter += (p && t) ? 1 : 0;
    uni += (p || t) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0) throw Error(ErrorCode::kNoPositives, "average precision needs a positive label");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (labels[order[rank]] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return sum / static_cast<double>(positives);
}

double clap_style_score(std::span<const double> audio_emb, std::span<const double> text_emb) {
  if (audio_emb.size() != text_emb.size()) {
    throw Error(ErrorCode::kDimMismatch, std::to_string(audio_emb.size()) + " vs " +
                                             std::to_string(text_emb.size()));
  }
  double dot = 0.0, na = 0.0, nt = 0.0;
  for (std::size_t i = 0; i < audio_emb.size(); ++i) {
    dot += audio_emb[i] * text_emb[i];
    na += audio_emb[i] * audio_emb[i];
    nt += text_emb[i] * text_emb[i];
  }
  if (na == 0.0 || nt == 0.0) throw Error(ErrorCode::kZeroVector, "embedding has zero norm");
  return 100.0 * dot / (std::sqrt(na) * std::sqrt(nt));
}

FleissKappa fleiss_kappa(const std::vector<std::vector<int>>& counts) {
  if (counts.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two subjects");
  const std::size_t k = counts.front().size();
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one category");
  long n = -1;
  for (const auto& row : counts) {
    if (row.size() != k) throw Error(ErrorCode::kLengthMismatch, "ragged rating matrix");
    long sum = 0;
    for (int c : row) {
      if (c < 0) throw Error(ErrorCode::kInvalidArgument, "negative count");
      sum += c;
    }
    if (n < 0) n = sum;
    if (sum != n) throw Error(ErrorCode::kInvalidArgument, "rows must sum to the same rater count");
  }
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two raters");

  const auto subjects = static_cast<double>(counts.size());
  const auto raters = static_cast<double>(n);
  std::vector<double> column(k, 0.0);
  double agreement = 0.0;
  for (const auto& row : counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sq += static_cast<double>(row[j]) * row[j];
      column[j] += row[j];
    }
    agreement += (sq - raters) / (raters * (raters - 1.0));
  }
  FleissKappa r;
  r.observed = agreement / subjects;
  for (double c : column) {
    const double p = c / (subjects * raters);
    r.expected += p * p;
  }
  if (r.expected >= 1.0) {
    r.degenerate = true;
    r.kappa = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

EmotionMatch emotion_match(const std::map<std::string, double>& classifier_probs,
                           std::string_view intended, const MoodMapping& mapping,
                           std::size_t top_m, double tolerance_deg) {
  if (top_m == 0) throw Error(ErrorCode::kInvalidArgument, "top_m must be at least 1");
  const auto target = emotion_coords(intended);

  std::vector<std::pair<std::string, double>> ranked(classifier_probs.begin(), classifier_probs.end());
  // Map order is lexicographic, so a stable sort keeps name order within ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_m) ranked.resize(top_m);

  EmotionMatch best;
  bool any = false;
  for (const auto& [tag, prob] : ranked) {
    if (!mapping.contains(tag)) continue;
    const auto& emotion = mapping.map(tag);
    const double err = angular_distance_deg(emotion_coords(emotion), target);
    if (!any || err < best.angular_error_deg) {
      best.angular_error_deg = err;
      best.closest_emotion = emotion;
      best.closest_tag = tag;
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::kNoMappableTags, "none of the top tags are mapped");
  best.match = best.angular_error_deg <= tolerance_deg;
  return best;
}

}  // namespace musmed
