#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "musmed/emotion.hpp"

namespace musmed {

// 1 - Hamming loss: fraction of labels where truth equals (score >= threshold).
// Throws LengthMismatch, InvalidArgument on empty input or out-of-range values.
double hamming_score(std::span<const int> truth, std::span<const double> scores,
                     double threshold = 0.5);

// Example-based multilabel accuracy |T n P| / |T u P|; 1 when both are empty.
// Kept next to hamming_score for comparison.
double jaccard_accuracy(std::span<const int> truth, std::span<const double> scores,
                        double threshold = 0.5);

// Average precision: ranked by descending score (stable for ties), the mean of
// precision@rank over positive items. Throws NoPositives, LengthMismatch.
double auprc(std::span<const double> scores, std::span<const int> labels);

// 100 * cosine similarity. Throws ZeroVector, DimMismatch.
double clap_style_score(std::span<const double> audio_emb, std::span<const double> text_emb);

struct FleissKappa {
  double kappa = 0.0;
  double observed = 0.0;  // mean per-subject agreement
  double expected = 0.0;  // chance agreement
  // True when chance agreement is 1 (every rating in one category); kappa is
  // then NaN.
  bool degenerate = false;
};

// counts[i][j]: raters assigning subject i to category j. Every row must sum to
// the same n >= 2 and there must be at least two subjects.
FleissKappa fleiss_kappa(const std::vector<std::vector<int>>& counts);

struct EmotionMatch {
  bool match = false;
  double angular_error_deg = 0.0;  // smallest gap over the mapped top tags
  std::string closest_emotion;
  std::string closest_tag;
};

// Top-m tags by probability (ties by tag name), mapped through the mapping
// with unmapped tags skipped; a match when any lies within tolerance_deg of
// the intended emotion. Throws NoMappableTags.
EmotionMatch emotion_match(const std::map<std::string, double>& classifier_probs,
                           std::string_view intended, const MoodMapping& mapping,
                           std::size_t top_m = 3, double tolerance_deg = 45.0);

}  // namespace musmed
