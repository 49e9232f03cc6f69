#include "essaylens/stylometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "essaylens/error.hpp"

namespace essaylens::stylometry {

namespace {

std::unordered_map<std::string_view, std::size_t> frequencies(std::span<const std::string> words) {
  std::unordered_map<std::string_view, std::size_t> freq;
  freq.reserve(words.size());
  for (const auto& w : words) ++freq[w];
  return freq;
}

}  // namespace

std::array<double, FeatureVector::kSize> FeatureVector::values() const {
  return {n_tokens, n_words, n_types, avg_word_len, avg_sentence_len, ttr,
          maas_ttr, mtld, hdd, yules_k, complexity};
}

const std::array<std::string_view, FeatureVector::kSize>& feature_keys() {
  static const std::array<std::string_view, FeatureVector::kSize> keys = {
      "n_tokens", "n_words", "n_types", "avg_word_len", "avg_sentence_len", "ttr",
      "maas_ttr", "mtld",    "hdd",     "yules_k",      "complexity"};
  return keys;
}

const std::array<std::string_view, FeatureVector::kSize>& feature_labels() {
  static const std::array<std::string_view, FeatureVector::kSize> labels = {
      "# tokens", "# words", "# types", "Avg. word length", "Avg. sentence length", "TTR",
      "MAAS_TTR", "MTLD",    "HDD",     "Yules' K",         "Complexity"};
  return labels;
}

std::size_t feature_index(std::string_view key) {
  const auto& keys = feature_keys();
  const auto it = std::find(keys.begin(), keys.end(), key);
  if (it == keys.end()) throw InputError("unknown stylometric feature: " + std::string(key));
  return static_cast<std::size_t>(it - keys.begin());
}

double ttr(std::span<const std::string> words) {
  if (words.empty()) throw InputError("ttr: empty token stream");
  return static_cast<double>(frequencies(words).size()) / static_cast<double>(words.size());
}

double maas_ttr(std::span<const std::string> words) {
  if (words.size() < 2) throw InputError("maas_ttr: needs at least 2 word tokens");
  const double n = std::log(static_cast<double>(words.size()));
  const double v = std::log(static_cast<double>(frequencies(words).size()));
  return (n - v) / (n * n);
}

double mtld_pass(std::span<const std::string> words, double threshold) {
  double factors = 0;
  std::size_t full_factors = 0;
  std::unordered_set<std::string_view> types;
  std::size_t tokens = 0;
  for (const auto& w : words) {
    types.insert(w);
    ++tokens;
    const double running = static_cast<double>(types.size()) / static_cast<double>(tokens);
    if (running < threshold) {
      ++full_factors;
      factors += 1.0;
      types.clear();
      tokens = 0;
    }
  }
  if (full_factors == 0) return static_cast<double>(words.size());
  if (tokens > 0) {
    const double rem = static_cast<double>(types.size()) / static_cast<double>(tokens);
    factors += (1.0 - rem) / (1.0 - threshold);
  }
  return static_cast<double>(words.size()) / factors;
}

double mtld(std::span<const std::string> words, double threshold) {
  if (words.size() < 10) throw InputError("mtld: text too short (needs at least 10 words)");
  std::vector<std::string> reversed(words.rbegin(), words.rend());
  return 0.5 * (mtld_pass(words, threshold) + mtld_pass(reversed, threshold));
}

double hdd(std::span<const std::string> words, std::size_t sample_size) {
  const std::size_t n = words.size();
  if (n < sample_size || sample_size == 0) throw InputError("hdd: fewer words than the sample size");
  // P(type absent from the sample) = C(n-f, s) / C(n, s) = prod_{i<s} (n-f-i)/(n-i).
  std::map<std::size_t, std::size_t> by_freq;
  for (const auto& [_, f] : frequencies(words)) ++by_freq[f];
  double sum = 0;
  for (const auto& [f, types] : by_freq) {
    double absent = 1.0;
    if (n - f < sample_size) {
      absent = 0.0;
    } else {
      for (std::size_t i = 0; i < sample_size; ++i)
        absent *= static_cast<double>(n - f - i) / static_cast<double>(n - i);
    }
    sum += static_cast<double>(types) * (1.0 - absent);
  }
  return 100.0 * sum / static_cast<double>(sample_size);
}

double yules_k(std::span<const std::string> words) {
  if (words.empty()) throw InputError("yules_k: empty token stream");
  std::map<std::size_t, std::size_t> spectrum;
  for (const auto& [_, f] : frequencies(words)) ++spectrum[f];
  double s2 = 0;
  for (const auto& [m, vm] : spectrum) s2 += static_cast<double>(m) * static_cast<double>(m) * static_cast<double>(vm);
  const double n = static_cast<double>(words.size());
  return 1e4 * (s2 - n) / (n * n);
}

double flesch_reading_ease(double words_per_sentence, double syllables_per_word) {
  return 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word;
}

double complexity(const textproc::TokenStream& stream) {
  if (stream.sentences.empty()) throw InputError("complexity: zero sentences");
  if (stream.tokens.empty()) throw InputError("complexity: zero words");
  double syllables = 0;
  for (const auto& w : stream.tokens) syllables += textproc::count_syllables(w);
  const double words = static_cast<double>(stream.tokens.size());
  return 1.0 - flesch_reading_ease(words / static_cast<double>(stream.sentences.size()), syllables / words);
}

FeatureVector feature_vector(const textproc::TokenStream& stream) {
  const auto& words = stream.tokens;
  if (words.empty()) throw InputError("feature_vector: essay has no words");
  FeatureVector fv;
  fv.n_tokens = static_cast<double>(stream.raw_token_count);
  fv.n_words = static_cast<double>(words.size());
  fv.n_types = static_cast<double>(frequencies(words).size());
  double chars = 0;
  for (const auto& w : words) chars += static_cast<double>(textproc::codepoint_length(w));
  fv.avg_word_len = chars / fv.n_words;
  fv.avg_sentence_len = fv.n_words / static_cast<double>(std::max<std::size_t>(stream.sentences.size(), 1));
  fv.ttr = ttr(words);
  fv.maas_ttr = maas_ttr(words);
  fv.mtld = mtld(words);
  fv.hdd = hdd(words);
  fv.yules_k = yules_k(words);
  fv.complexity = complexity(stream);
  return fv;
}

}  // namespace essaylens::stylometry
