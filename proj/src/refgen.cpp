#include "essaylens/refgen.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "essaylens/error.hpp"
#include "essaylens/textproc.hpp"
#include "refgen_bank.hpp"

namespace essaylens::refgen {

namespace {

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

}  // namespace

PromptTemplate PromptTemplate::common_app() {
  PromptTemplate t;
  t.persona_preamble =
      "I am a high school student applying to the [case institution]'s College of Engineering. "
      "Here is a little bit more information about myself.\n\n";
  t.instructions_block =
      "I have to write an essay as part of my application. The essay must be longer than 250 words but no more "
      "than 650 words. Below are the instructions for writing the essay and the specific prompt I need to respond "
      "to. Write an essay based on the given instructions and prompt.\n\n"
      "Instructions: \"The essay demonstrates your ability to write clearly and concisely on a selected topic and "
      "helps you distinguish yourself in your own voice. What do you want the readers of your application to know "
      "about you apart from courses, grades, and test scores? Choose the option that best helps you answer that "
      "question and write an essay of no more than 650 words, using the prompt to inspire and structure your "
      "response.\n\n"
      "Remember: 650 words is your limit, not your goal. Use the full range if you need it, but don't feel "
      "obligated to do so. (The application won't accept a response shorter than 250 words.)\"";
  t.prompt_slot = "Prompt: \"" + std::string(kQuestionSlot) + "\"";
  return t;
}

std::string render_prompt(const PromptTemplate& tmpl, std::string_view question) {
  if (question.empty()) throw InputError("render_prompt: empty essay question");
  if (count_occurrences(tmpl.prompt_slot, kQuestionSlot) != 1)
    throw InputError(fmt::format("render_prompt: prompt slot must contain {} exactly once", kQuestionSlot));
  std::string slot = tmpl.prompt_slot;
  slot.replace(slot.find(kQuestionSlot), kQuestionSlot.size(), question);
  std::string out = tmpl.persona_preamble;
  out += tmpl.instructions_block;
  out += "\n\n";
  out += slot;
  return out;
}

PromptMix PromptMix::common_app() {
  PromptMix m;
  m.questions = {
      {"Share an essay on any topic of your choice. It can be one you've already written, one that responds to a "
       "different prompt, or one of your own design.",
       19768},
      {"Discuss an accomplishment, event, or realization that sparked a period of personal growth and a new "
       "understanding of yourself or others.",
       19557},
      {"Some students have a background, identity, interest, or talent that is so meaningful they believe their "
       "application would be incomplete without it. If this sounds like you, then please share your story.",
       18781},
      {"The lessons we take from obstacles we encounter can be fundamental to later success. Recount a time when "
       "you faced a challenge, setback, or failure. How did it affect you, and what did you learn from the "
       "experience?",
       14281},
      {"Describe a topic, idea, or concept you find so engaging that it makes you lose all track of time. Why does "
       "it captivate you? What or who do you turn to when you want to learn more?",
       4449},
      {"Reflect on a time when you questioned or challenged a belief or idea. What prompted your thinking? What "
       "was the outcome?",
       2149},
      {"Describe a problem you've solved or a problem you'd like to solve. It can be an intellectual challenge, a "
       "research query, an ethical dilemma-anything that is of personal importance, no matter the scale. Explain "
       "its significance to you and what steps you took or could be taken to identify a solution.",
       1454},
      {"Reflect on something that someone has done for you that has made you happy or thankful in a surprising "
       "way. How has this gratitude affected or motivated you?",
       1222},
  };
  m.validate_and_normalize();
  return m;
}

void PromptMix::validate_and_normalize() {
  if (questions.empty()) throw InputError("prompt mix has no questions");
  double total = 0;
  for (const auto& [q, w] : questions) {
    if (q.empty()) throw InputError("prompt mix contains an empty question");
    if (!(w > 0) || !std::isfinite(w)) throw InputError(fmt::format("prompt mix weight must be positive, got {}", w));
    total += w;
  }
  for (auto& [q, w] : questions) w /= total;
}

const std::string& sample_question(const PromptMix& mix, Engine& rng) {
  if (mix.questions.empty()) throw InputError("prompt mix has no questions");
  double total = 0;
  for (const auto& q : mix.questions) total += q.second;
  const double u = uniform01(rng) * total;
  double acc = 0;
  for (const auto& q : mix.questions) {
    acc += q.second;
    if (u < acc) return q.first;
  }
  return mix.questions.back().first;
}

// ---------------------------------------------------------------------------
// Offline writer

namespace {

template <class T>
std::size_t zipf_index(std::size_t n, double s, Engine& rng) {
  double total = 0;
  for (std::size_t k = 0; k < n; ++k) total += std::pow(double(k + 1), -s);
  double u = uniform01(rng) * total;
  for (std::size_t k = 0; k < n; ++k) {
    u -= std::pow(double(k + 1), -s);
    if (u < 0) return k;
  }
  return n - 1;
}

class SlotFiller {
 public:
  SlotFiller(WriterStyle style) : style_(style), own_(style == WriterStyle::Human ? bank::human() : bank::llm()) {}

  template <class T>
  const T& pick(const std::vector<T>& own, const std::vector<T>& shared, Engine& rng) const {
    if (uniform01(rng) < own_.own_rate) return own[zipf_index<T>(own.size(), own_.zipf_s, rng)];
    // The shared lists are ranked in opposite directions for the two styles so
    // common words still carry style information.
    std::size_t k = zipf_index<T>(shared.size(), own_.zipf_s, rng);
    if (style_ == WriterStyle::Llm) k = shared.size() - 1 - k;
    return shared[k];
  }

  std::string fill(std::string_view tmpl, Engine& rng) const {
    const auto& sh = bank::shared();
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
      if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
        switch (tmpl[i + 1]) {
          case 'N': out += pick(own_.nouns, sh.nouns, rng); break;
          case 'A': out += pick(own_.adjectives, sh.adjectives, rng); break;
          case 'D': out += pick(own_.adverbs, sh.adverbs, rng); break;
          case 'R': out += pick(own_.people, sh.people, rng); break;
          case 'L': out += pick(own_.places, sh.places, rng); break;
          case 'V': out += pick(own_.verbs, sh.verbs, rng).first; break;
          case 'P': out += pick(own_.verbs, sh.verbs, rng).second; break;
          case '#': out += std::to_string(2 + rng() % 16); break;
          default: out.append(tmpl.substr(i, 3)); break;
        }
        i += 2;
      } else {
        out += tmpl[i];
      }
    }
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = char(out[0] - 'a' + 'A');
    return out;
  }

  const bank::StyleBank& bank() const { return own_; }

 private:
  WriterStyle style_;
  const bank::StyleBank& own_;
};

}  // namespace

OfflineEssayWriter::OfflineEssayWriter(WriterStyle style, LengthBounds bounds) : style_(style), bounds_(bounds) {
  if (bounds_.min_words == 0 || bounds_.min_words + 40 > bounds_.max_words)
    throw InputError(fmt::format("offline writer needs max_words >= min_words + 40, got [{}, {}]", bounds_.min_words,
                                 bounds_.max_words));
}

std::string OfflineEssayWriter::write(std::string_view question, Engine& rng) const {
  (void)question;  // the template bank is question-agnostic
  const SlotFiller filler(style_);
  const auto& b = filler.bank();
  const std::size_t lo = std::max(bounds_.min_words + 10, b.target_min);
  const std::size_t hi = std::max(lo, std::min(bounds_.max_words - 10, b.target_max));
  const std::size_t target = lo + rng() % (hi - lo + 1);

  std::vector<std::string> sentences;
  std::vector<std::size_t> words;
  auto add = [&](std::string_view tmpl) {
    sentences.push_back(filler.fill(tmpl, rng));
    words.push_back(textproc::word_count(sentences.back()));
  };
  add(b.openers[rng() % b.openers.size()]);
  std::size_t total = words.back();
  std::string closer = filler.fill(b.closers[rng() % b.closers.size()], rng);
  const std::size_t closer_words = textproc::word_count(closer);
  while (total + closer_words < target) {
    add(b.body[rng() % b.body.size()]);
    total += words.back();
  }
  while (total + closer_words > bounds_.max_words && sentences.size() > 1) {
    total -= words.back();
    sentences.pop_back();
    words.pop_back();
  }
  sentences.push_back(std::move(closer));

  std::string out;
  std::size_t in_para = 0;
  const std::size_t para_len = 4 + rng() % 3;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += (in_para == 0) ? "\n\n" : " ";
    out += sentences[i];
    in_para = (in_para + 1) % para_len;
  }
  return out;
}

std::string OfflineEssayWriter::write(std::string_view question, std::uint64_t seed, std::uint64_t index) const {
  Engine rng(derive_seed(seed, index));
  return write(question, rng);
}

std::vector<corpus::ReferenceEssay> human_pool(std::size_t n, std::uint64_t seed, const PromptMix& mix) {
  const OfflineEssayWriter writer(WriterStyle::Human);
  std::vector<corpus::ReferenceEssay> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Engine rng(derive_seed(seed, i));
    const auto& q = sample_question(mix, rng);
    out.push_back({fmt::format("human-{:06d}", i), writer.write(q, rng), corpus::SourceLabel::Human, q});
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP client

ChatClient::ChatClient(ClientConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw InputError("chat client: base_url is empty");
  if (config_.max_attempts < 1) throw InputError("chat client: max_attempts must be >= 1");
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

std::string ChatClient::complete(const std::string& prompt, int* retries) const {
  httplib::Client cli(config_.base_url);
  cli.set_connection_timeout(config_.timeout_seconds, 0);
  cli.set_read_timeout(config_.timeout_seconds, 0);
  cli.set_write_timeout(config_.timeout_seconds, 0);

  nlohmann::json body = {{"model", config_.model},
                         {"temperature", config_.temperature},
                         {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const std::string payload = body.dump();

  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (retries) *retries = attempt;
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, config_.max_backoff_ms);
    }
    auto res = cli.Post(config_.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw NetworkError(fmt::format("chat endpoint returned HTTP {}: {}", res->status, res->body.substr(0, 200)));
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw NetworkError(fmt::format("chat endpoint returned an unexpected body: {}", e.what()));
    }
  }
  throw NetworkError(fmt::format("chat endpoint {}{} failed after {} attempts ({})", config_.base_url, config_.path,
                                 config_.max_attempts, last_error));
}

GenerationResult generate_corpus(const ClientConfig& config, std::size_t n, const PromptMix& mix,
                                 LengthBounds bounds, const PromptTemplate& tmpl) {
  if (bounds.min_words > bounds.max_words) throw InputError("length bounds: min_words > max_words");
  if (config.max_length_retries < 0) throw InputError("max_length_retries must be >= 0");

  std::vector<std::string> questions(n);
  for (std::size_t i = 0; i < n; ++i) {
    Engine rng(derive_seed(config.seed, i));
    questions[i] = sample_question(mix, rng);
  }

  std::optional<OfflineEssayWriter> writer;
  std::optional<ChatClient> client;
  const std::string model = config.offline ? "offline-template-v1" : config.model;
  if (config.offline)
    writer.emplace(WriterStyle::Llm, bounds);
  else
    client.emplace(config);

  std::vector<std::optional<std::string>> texts(n);
  std::vector<GenerationLogEntry> entries(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      auto& e = entries[i];
      e.sequence = i;
      e.question = questions[i];
      e.model = model;
      try {
        const auto prompt = render_prompt(tmpl, questions[i]);
        for (int attempt = 0; attempt <= config.max_length_retries; ++attempt) {
          std::string text;
          if (writer) {
            text = writer->write(questions[i], derive_seed(config.seed ^ 0x4c4c4dULL, i), std::uint64_t(attempt));
          } else {
            const auto t0 = std::chrono::steady_clock::now();
            int r = 0;
            text = client->complete(prompt, &r);
            e.network_retries += r;
            e.latency_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          }
          const auto wc = textproc::word_count(text);
          if (wc >= bounds.min_words && wc <= bounds.max_words) {
            texts[i] = std::move(text);
            break;
          }
          e.reason = fmt::format("{} words outside [{}, {}]", wc, bounds.min_words, bounds.max_words);
          if (attempt < config.max_length_retries) ++e.length_retries;
        }
        if (texts[i]) {
          e.reason.clear();
        } else {
          e.dropped = true;
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.concurrency, n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  GenerationResult out;
  out.log.entries = std::move(entries);
  for (std::size_t i = 0; i < n; ++i) {
    if (texts[i]) {
      out.essays.push_back({fmt::format("llm-{:06d}", i), std::move(*texts[i]), corpus::SourceLabel::LLM, questions[i]});
      ++out.log.successes;
    } else {
      ++out.log.drops;
    }
  }
  return out;
}

}  // namespace essaylens::refgen
