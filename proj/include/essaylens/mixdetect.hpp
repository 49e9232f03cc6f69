#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "essaylens/corpus.hpp"
#include "essaylens/textproc.hpp"

// Distributional estimate of the LLM-generated fraction of a text. Each
// reference class is a smoothed unigram distribution over a shared
// vocabulary plus one out-of-vocabulary bucket; a text's tokens are modelled
// as draws from (1 - alpha) * p_human + alpha * p_llm and alpha is fitted by
// maximum likelihood on [0, 1].
namespace essaylens::mixdetect {

using TokenCounts = std::map<std::string, std::size_t, std::less<>>;

/// Word-token counts over a set of texts.
TokenCounts count_tokens(std::span<const std::string> texts);
TokenCounts count_tokens(std::span<const textproc::TokenStream> streams);

struct ReferenceOptions {
  double lambda = 0.5;          ///< add-lambda smoothing
  std::size_t min_count = 5;    ///< tokens rarer than this (in the union) pool into OOV
  /// When set, only these tokens are modelled and every other token is
  /// skipped at scoring time.
  std::optional<std::set<std::string, std::less<>>> token_subset;
};

class TokenDistribution {
 public:
  TokenDistribution() = default;
  /// probs has vocabulary.size() + 1 entries, the last being the OOV bucket.
  TokenDistribution(std::vector<std::string> vocabulary, std::vector<double> probs, double lambda, std::size_t min_count,
                    corpus::SourceLabel label, std::string provenance,
                    std::optional<std::set<std::string, std::less<>>> token_subset = std::nullopt);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& probs() const { return probs_; }
  double smoothing_lambda() const { return lambda_; }
  std::size_t min_count() const { return min_count_; }
  corpus::SourceLabel source_label() const { return label_; }
  const std::string& provenance() const { return provenance_; }
  const std::string& vocabulary_digest() const { return vocab_digest_; }
  const std::optional<std::set<std::string, std::less<>>>& token_subset() const { return subset_; }

  std::size_t oov_index() const { return vocabulary_.size(); }
  /// Index of a token, oov_index() when not in the vocabulary.
  std::size_t index_of(std::string_view token) const;
  /// False when a token subset is configured and the token lies outside it.
  bool scores(std::string_view token) const;
  double prob(std::string_view token) const { return probs_[index_of(token)]; }

 private:
  std::vector<std::string> vocabulary_;
  std::vector<double> probs_;
  double lambda_ = 0.5;
  std::size_t min_count_ = 1;
  corpus::SourceLabel label_ = corpus::SourceLabel::Human;
  std::string provenance_;
  std::string vocab_digest_;
  std::optional<std::set<std::string, std::less<>>> subset_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Sorted vocabulary of tokens with count >= min_count across all corpora.
std::vector<std::string> build_vocabulary(std::span<const TokenCounts> corpora, std::size_t min_count,
                                          const ReferenceOptions& opts = {});

/// Smoothed distribution of one corpus over a given vocabulary.
TokenDistribution fit_reference(const TokenCounts& counts, const std::vector<std::string>& vocabulary,
                                const ReferenceOptions& opts, corpus::SourceLabel label, std::string provenance);

/// Single-corpus convenience: vocabulary drawn from this corpus alone.
TokenDistribution fit_reference(std::span<const std::string> essays, double lambda, std::size_t min_count,
                                corpus::SourceLabel label = corpus::SourceLabel::Human);

struct ReferenceModel {
  TokenDistribution human;
  TokenDistribution llm;
};

/// Fits both references over the union vocabulary of the two corpora.
ReferenceModel fit_references(std::span<const std::string> human_essays, std::span<const std::string> llm_essays,
                              const ReferenceOptions& opts = {});

void save_reference_model(const std::string& path, const ReferenceModel& model);
ReferenceModel load_reference_model(const std::string& path);

/// Digest over essay texts in order; identifies the corpus a model was fit on.
std::string corpus_digest(std::span<const std::string> essays);

/// KL(p || q) in nats over the shared vocabulary + OOV.
double kl_divergence(const TokenDistribution& p, const TokenDistribution& q);

enum class UsageCategory { None, Low, Medium, High };
std::string_view to_string(UsageCategory c);

struct UsageThresholds {
  double low_upper = 0.07;
  double medium_upper = 0.13;
  void validate() const;
};

/// 0 -> None; (0, low] -> Low; (low, medium] -> Medium; above -> High.
UsageCategory categorize(double alpha_hat, const UsageThresholds& thresholds = {});

/// Nearest-rank 1/3 and 2/3 quantiles of the strictly positive estimates.
UsageThresholds tercile_thresholds(std::span<const double> estimates);

struct AlphaEstimate {
  double alpha_hat = 0;
  double loglik_at_opt = 0;
  double loglik_at_zero = 0;
  std::size_t n_scored_tokens = 0;
  UsageCategory category = UsageCategory::None;
};

struct OptimizerOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 200;
};

/// Token counts of one document projected onto a reference vocabulary.
struct ScoredDocument {
  std::vector<double> counts;
  std::vector<double> p_human;
  std::vector<double> p_llm;
  std::size_t n_tokens = 0;
  std::size_t n_in_vocabulary = 0;

  double loglik(double alpha) const;
  void append(const ScoredDocument& other);
};

ScoredDocument score_document(std::span<const std::string> words, const TokenDistribution& p_human,
                              const TokenDistribution& p_llm);

/// Maximizes the concave mixture log-likelihood. A non-positive slope at 0
/// returns exactly 0 (this includes the flat case); a non-negative slope at 1
/// returns exactly 1; otherwise golden-section search on [0, 1].
AlphaEstimate maximize_alpha(const ScoredDocument& doc, const OptimizerOptions& opt = {},
                             const UsageThresholds& thresholds = {});

AlphaEstimate estimate_alpha(const textproc::TokenStream& essay, const TokenDistribution& p_human,
                             const TokenDistribution& p_llm, const UsageThresholds& thresholds = {},
                             const OptimizerOptions& opt = {});

/// Shared alpha over the pooled log-likelihood of every essay.
double estimate_corpus_alpha(std::span<const textproc::TokenStream> essays, const TokenDistribution& p_human,
                             const TokenDistribution& p_llm, const OptimizerOptions& opt = {});

/// Builds a document of exactly total_words word tokens, round(alpha *
/// total_words) of them from llm_text and the rest from human_text, taking
/// whole sentences in order and cutting the last sentence of each side at
/// the word budget.
std::string splice_mixture(std::string_view human_text, std::string_view llm_text, double alpha,
                           std::size_t total_words);

struct CalibrationOptions {
  std::size_t docs_per_bin = 100;
  std::size_t min_doc_words = 50;
  std::uint64_t seed = 0;
};

struct CalibrationRow {
  double true_alpha = 0;
  double mean_alpha_hat = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double sd = 0;
  std::size_t n_docs = 0;
};

/// For each target alpha, splices holdout documents at that fraction,
/// estimates alpha on each, and reports the mean with a 95% CI.
std::vector<CalibrationRow> calibration_curve(const TokenDistribution& p_human, const TokenDistribution& p_llm,
                                              std::span<const std::string> holdout_human,
                                              std::span<const std::string> holdout_llm,
                                              std::span<const double> alphas, const CalibrationOptions& opts = {});

}  // namespace essaylens::mixdetect
