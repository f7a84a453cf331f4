// Multilabel metrics, Fleiss' kappa, cosine score and circumplex matching.

#include "musmed/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "musmed/error.hpp"

namespace musmed {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::vector<int> bits(unsigned mask, std::size_t len) {
  std::vector<int> v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = (mask >> i) & 1;
  return v;
}

// Rank of item i: everything scoring higher, plus equal scores earlier in the input.
double ap_oracle(const std::vector<double>& s, const std::vector<int>& y) {
  double sum = 0.0;
  int positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    ++positives;
    int above = 0, pos_above = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] > s[i] || (s[j] == s[i] && j <= i)) {
        ++above;
        pos_above += y[j];
      }
    }
    sum += double(pos_above) / above;
  }
  return sum / positives;
}

TEST(Hamming, Examples) {
  std::vector<int> truth(56, 0);
  std::vector<double> scores(56, 0.1);
  truth[3] = truth[40] = 1;
  scores[3] = scores[40] = 0.9;
  EXPECT_DOUBLE_EQ(hamming_score(truth, scores), 1.0);
  scores[10] = 0.7;
  EXPECT_NEAR(hamming_score(truth, scores), 55.0 / 56.0, 1e-12);
  std::vector<double> zeros(56, 0.0);
  EXPECT_NEAR(hamming_score(truth, zeros), 54.0 / 56.0, 1e-12);
  EXPECT_NEAR(54.0 / 56.0, 0.96429, 1e-5);
}

TEST(Hamming, ThresholdIsInclusive) {
  std::vector<int> t{1};
  std::vector<double> s{0.5};
  EXPECT_DOUBLE_EQ(hamming_score(t, s), 1.0);
}

TEST(Hamming, Errors) {
  std::vector<int> t{1, 0};
  std::vector<double> s{0.5};
  EXPECT_EQ(code_of([&] { hamming_score(t, s); }), ErrorCode::kLengthMismatch);
  std::vector<double> bad{0.5, 1.5};
  EXPECT_THROW(hamming_score(t, bad), Error);
}

TEST(Hamming, ExhaustiveOracle) {
  std::mt19937 rng(1);
  for (std::size_t len = 1; len <= 8; ++len) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> s(len);
      for (auto& x : s) x = double(rng() % 11) / 10.0;
      for (unsigned mask = 0; mask < (1u << len); ++mask) {
        const auto t = bits(mask, len);
        int agree = 0;
        for (std::size_t i = 0; i < len; ++i) agree += t[i] == (s[i] >= 0.5 ? 1 : 0);
        ASSERT_DOUBLE_EQ(hamming_score(t, s), double(agree) / len);
      }
    }
  }
}

TEST(Jaccard, Examples) {
  std::vector<int> t{1, 1, 0, 0};
  std::vector<double> s{0.9, 0.1, 0.8, 0.0};
  EXPECT_DOUBLE_EQ(jaccard_accuracy(t, s), 1.0 / 3.0);
  std::vector<int> none{0, 0};
  std::vector<double> low{0.1, 0.2};
  EXPECT_DOUBLE_EQ(jaccard_accuracy(none, low), 1.0);
}

TEST(Auprc, Examples) {
  std::vector<double> s{0.9, 0.8, 0.7, 0.6};
  EXPECT_NEAR(auprc(s, std::vector<int>{1, 0, 1, 0}), 0.83333, 1e-5);
  EXPECT_NEAR(auprc(s, std::vector<int>{0, 0, 1, 1}), 0.41667, 1e-5);
  EXPECT_DOUBLE_EQ(auprc(s, std::vector<int>{1, 1, 0, 0}), 1.0);
}

TEST(Auprc, TiesKeepInputOrder) {
  std::vector<double> s{0.5, 0.5};
  EXPECT_DOUBLE_EQ(auprc(s, std::vector<int>{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auprc(s, std::vector<int>{0, 1}), 0.5);
}

TEST(Auprc, NoPositives) {
  std::vector<double> s{0.5, 0.2};
  EXPECT_EQ(code_of([&] { auprc(s, std::vector<int>{0, 0}); }), ErrorCode::kNoPositives);
}

TEST(Auprc, ExhaustiveOracle) {
  std::mt19937 rng(2);
  for (std::size_t len = 1; len <= 8; ++len) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> s(len);
      for (auto& x : s) x = double(rng() % 6) / 5.0;  // coarse grid forces ties
      for (unsigned mask = 1; mask < (1u << len); ++mask) {
        const auto y = bits(mask, len);
        ASSERT_NEAR(auprc(s, y), ap_oracle(s, y), 1e-12);
      }
    }
  }
}

TEST(Clap, Examples) {
  std::vector<double> a{1, 2, 3}, b{0, 3, -2};
  EXPECT_NEAR(clap_style_score(a, a), 100.0, 1e-12);
  EXPECT_NEAR(clap_style_score(a, b), 0.0, 1e-12);
  std::vector<double> neg{-1, -2, -3};
  EXPECT_NEAR(clap_style_score(a, neg), -100.0, 1e-12);
}

TEST(Clap, ScaleInvariant) {
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(16), b(16);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng);
    auto a2 = a;
    for (auto& x : a2) x *= 7.5;
    EXPECT_NEAR(clap_style_score(a2, b), clap_style_score(a, b), 1e-9);
  }
}

TEST(Clap, Errors) {
  std::vector<double> a{1, 2}, z{0, 0}, c{1, 2, 3};
  EXPECT_EQ(code_of([&] { clap_style_score(a, z); }), ErrorCode::kZeroVector);
  EXPECT_EQ(code_of([&] { clap_style_score(a, c); }), ErrorCode::kDimMismatch);
}

TEST(Kappa, HandComputedExample) {
  const auto k = fleiss_kappa({{3, 0}, {0, 3}, {2, 1}});
  EXPECT_NEAR(k.observed, 7.0 / 9.0, 1e-12);
  EXPECT_NEAR(k.expected, 41.0 / 81.0, 1e-12);
  EXPECT_NEAR(k.kappa, 0.550, 1e-3);
  EXPECT_FALSE(k.degenerate);
}

TEST(Kappa, AllAgreeIsExactlyOne) {
  EXPECT_EQ(fleiss_kappa({{4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {4, 0, 0}}).kappa, 1.0);
  EXPECT_EQ(fleiss_kappa({{2, 0}, {0, 2}}).kappa, 1.0);
}

TEST(Kappa, SingleCategoryIsDegenerate) {
  const auto k = fleiss_kappa({{3, 0}, {3, 0}});
  EXPECT_TRUE(k.degenerate);
  EXPECT_TRUE(std::isnan(k.kappa));
}

TEST(Kappa, InvalidMatrices) {
  EXPECT_THROW(fleiss_kappa({{3, 0}}), Error);
  EXPECT_THROW(fleiss_kappa({{3, 0}, {2, 0}}), Error);
  EXPECT_THROW(fleiss_kappa({{1, 0}, {0, 1}}), Error);
  EXPECT_THROW(fleiss_kappa({{3, -1}, {2, 0}}), Error);
}

TEST(Kappa, PermutationInvariant) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int subjects = 2 + int(rng() % 8), cats = 2 + int(rng() % 4), raters = 2 + int(rng() % 5);
    std::vector<std::vector<int>> m(subjects, std::vector<int>(cats, 0));
    for (auto& row : m) {
      for (int r = 0; r < raters; ++r) ++row[rng() % cats];
    }
    const auto base = fleiss_kappa(m);
    if (base.degenerate) continue;
    auto rows = m;
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_NEAR(fleiss_kappa(rows).kappa, base.kappa, 1e-12);
    std::vector<int> perm(cats);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto cols = m;
    for (int i = 0; i < subjects; ++i) {
      for (int j = 0; j < cats; ++j) cols[i][j] = m[i][perm[j]];
    }
    EXPECT_NEAR(fleiss_kappa(cols).kappa, base.kappa, 1e-12);
  }
}

TEST(EmotionMatch, SameEmotion) {
  const auto m = emotion_match({{"happy", 0.9}, {"sad", 0.05}}, "happy", default_mood_mapping());
  EXPECT_TRUE(m.match);
  EXPECT_DOUBLE_EQ(m.angular_error_deg, 0.0);
  EXPECT_EQ(m.closest_tag, "happy");
}

TEST(EmotionMatch, NeighbourWithinTolerance) {
  const auto mapping = MoodMapping::from_entries({{"content", "contented"}, {"blue", "sad"}});
  const auto m = emotion_match({{"content", 0.8}}, "happy", mapping, 1);
  EXPECT_TRUE(m.match);
  EXPECT_NEAR(m.angular_error_deg, 17.2, 0.1);
  EXPECT_EQ(m.closest_emotion, "contented");
}

TEST(EmotionMatch, OppositeEmotionFails) {
  const auto mapping = MoodMapping::from_entries({{"blue", "sad"}});
  const auto m = emotion_match({{"blue", 0.8}}, "happy", mapping, 1);
  EXPECT_FALSE(m.match);
  EXPECT_NEAR(m.angular_error_deg, 178.8, 0.1);
}

TEST(EmotionMatch, OnlyTopMConsidered) {
  const std::map<std::string, double> probs{{"sad", 0.5}, {"dark", 0.3}, {"melancholic", 0.2}, {"happy", 0.1}};
  EXPECT_FALSE(emotion_match(probs, "happy", default_mood_mapping(), 3).match);
  EXPECT_TRUE(emotion_match(probs, "happy", default_mood_mapping(), 4).match);
}

TEST(EmotionMatch, UnmappedTagsSkipped) {
  const auto m = emotion_match({{"vaporwave", 0.9}, {"calm", 0.1}}, "calm", default_mood_mapping(), 2);
  EXPECT_TRUE(m.match);
  EXPECT_EQ(code_of([&] { emotion_match({{"vaporwave", 0.9}}, "calm", default_mood_mapping()); }),
            ErrorCode::kNoMappableTags);
}

TEST(EmotionMatch, ZeroToleranceIsExactLabelMatch) {
  const auto& mapping = default_mood_mapping();
  for (const auto& [tag, emotion] : mapping.entries()) {
    for (const auto& intended : canonical_emotions()) {
      const auto m = emotion_match({{tag, 1.0}}, intended, mapping, 1, 0.0);
      EXPECT_EQ(m.match, emotion == intended) << tag << " " << intended;
    }
  }
}

}  // namespace
}  // namespace musmed
