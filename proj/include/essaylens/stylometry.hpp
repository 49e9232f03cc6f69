#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "essaylens/textproc.hpp"

namespace essaylens::stylometry {

inline constexpr double kMtldThreshold = 0.72;
inline constexpr std::size_t kHddSampleSize = 42;

/// The eleven per-essay linguistic measures, in report order.
struct FeatureVector {
  double n_tokens = 0;          ///< words + punctuation tokens
  double n_words = 0;
  double n_types = 0;
  double avg_word_len = 0;      ///< code points per word
  double avg_sentence_len = 0;  ///< words per sentence
  double ttr = 0;
  double maas_ttr = 0;
  double mtld = 0;
  double hdd = 0;  ///< x100 scale
  double yules_k = 0;
  double complexity = 0;  ///< 1 - Flesch Reading Ease

  static constexpr std::size_t kSize = 11;
  std::array<double, kSize> values() const;
  bool operator==(const FeatureVector&) const = default;
};

/// Column keys, stable and in report order.
const std::array<std::string_view, FeatureVector::kSize>& feature_keys();
/// Human-readable row labels in report order.
const std::array<std::string_view, FeatureVector::kSize>& feature_labels();
/// Index of a feature key; throws InputError on unknown key.
std::size_t feature_index(std::string_view key);

double ttr(std::span<const std::string> words);
double maas_ttr(std::span<const std::string> words);
double mtld(std::span<const std::string> words, double threshold = kMtldThreshold);
/// One directional MTLD pass; exposed for testing the bidirectional mean.
double mtld_pass(std::span<const std::string> words, double threshold = kMtldThreshold);
double hdd(std::span<const std::string> words, std::size_t sample_size = kHddSampleSize);
double yules_k(std::span<const std::string> words);

double flesch_reading_ease(double words_per_sentence, double syllables_per_word);
double complexity(const textproc::TokenStream& stream);

FeatureVector feature_vector(const textproc::TokenStream& stream);
inline FeatureVector features_of(std::string_view text) { return feature_vector(textproc::tokenize(text)); }

}  // namespace essaylens::stylometry
