#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "essaylens/corpus.hpp"
#include "essaylens/random.hpp"

// Reference-corpus acquisition: the essay-writing prompt, the distribution of
// essay questions, a chat-completion client, and an offline writer that lets
// the whole pipeline run without network access.
namespace essaylens::refgen {

inline constexpr std::string_view kQuestionSlot = "{{ESSAY_QUESTION}}";

struct PromptTemplate {
  std::string persona_preamble;
  std::string instructions_block;  ///< contains the 250 / 650 word bounds verbatim
  std::string prompt_slot;         ///< must contain kQuestionSlot exactly once

  /// The Common App generation prompt. The applicant-information block is
  /// rendered empty.
  static PromptTemplate common_app();
};

/// Substitutes the question into the slot. Throws InputError on an empty
/// question or a slot without exactly one marker.
std::string render_prompt(const PromptTemplate& tmpl, std::string_view question);

struct PromptMix {
  std::vector<std::pair<std::string, double>> questions;  ///< (question, weight)

  /// The eight Common App questions weighted by their frequency among
  /// human essays.
  static PromptMix common_app();
  /// Weights positive; normalizes them to sum to 1.
  void validate_and_normalize();
};

const std::string& sample_question(const PromptMix& mix, Engine& rng);

enum class WriterStyle { Human, Llm };

struct LengthBounds {
  std::size_t min_words = 250;
  std::size_t max_words = 650;
};

/// Deterministic template essay writer: sentences from a style-specific
/// phrase bank with slots filled by Zipf-weighted draws mixing shared and
/// style-specific word lists. Human style is the bundled human text pool;
/// Llm style is the offline stand-in for a chat model.
class OfflineEssayWriter {
 public:
  explicit OfflineEssayWriter(WriterStyle style, LengthBounds bounds = {});
  std::string write(std::string_view question, Engine& rng) const;
  /// Essay number `index` of the stream seeded by `seed`.
  std::string write(std::string_view question, std::uint64_t seed, std::uint64_t index) const;
  WriterStyle style() const { return style_; }

 private:
  WriterStyle style_;
  LengthBounds bounds_;
};

/// Generates `n` human-pool essays with questions drawn from `mix`.
std::vector<corpus::ReferenceEssay> human_pool(std::size_t n, std::uint64_t seed,
                                               const PromptMix& mix = PromptMix::common_app());

struct ClientConfig {
  bool offline = true;
  std::string base_url;                         ///< e.g. https://api.example.com
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "ESSAYLENS_API_KEY";
  double temperature = 1.0;
  int timeout_seconds = 60;
  int max_attempts = 4;         ///< per request, for network/5xx/429 failures
  int backoff_ms = 500;         ///< doubled after every failed attempt
  int max_backoff_ms = 8000;
  int max_length_retries = 3;   ///< regenerations for out-of-bounds essays
  std::size_t concurrency = 4;
  std::uint64_t seed = 0;
};

struct GenerationLogEntry {
  std::size_t sequence = 0;
  std::string question;
  std::string model;
  double latency_ms = 0;
  int network_retries = 0;
  int length_retries = 0;
  bool dropped = false;
  std::string reason;
};

struct GenerationLog {
  std::vector<GenerationLogEntry> entries;
  std::size_t successes = 0;
  std::size_t drops = 0;
  std::size_t count() const { return entries.size(); }
};

struct GenerationResult {
  std::vector<corpus::ReferenceEssay> essays;  ///< ordered by sequence id
  GenerationLog log;
};

/// Chat-completion HTTP client with retry and exponential backoff.
class ChatClient {
 public:
  explicit ChatClient(ClientConfig config);
  /// Sends one request; retries network errors, 429 and 5xx up to
  /// max_attempts and then throws NetworkError. `retries` receives the
  /// number of retried attempts.
  std::string complete(const std::string& prompt, int* retries = nullptr) const;

 private:
  ClientConfig config_;
  std::string api_key_;
};

GenerationResult generate_corpus(const ClientConfig& config, std::size_t n, const PromptMix& mix = PromptMix::common_app(),
                                 LengthBounds bounds = {}, const PromptTemplate& tmpl = PromptTemplate::common_app());

}  // namespace essaylens::refgen
