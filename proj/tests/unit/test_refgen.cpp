#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <map>
#include <thread>

#include <json.hpp>

#include "essaylens/error.hpp"
#include "essaylens/refgen.hpp"
#include "essaylens/textproc.hpp"
#include "support.hpp"

using namespace essaylens;
using namespace essaylens::refgen;

namespace {

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

// Local chat endpoint whose n-th response status is scripted.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(std::vector<int> statuses, std::string content = testsupport::filler(300, "alpha"))
      : statuses_(std::move(statuses)), content_(std::move(content)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const std::size_t i = calls_++;
      last_body_ = req.body;
      const int status = i < statuses_.size() ? statuses_[i] : 200;
      res.status = status;
      if (status == 200) {
        nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", content_}}}}}}};
        res.set_content(j.dump(), "application/json");
      } else {
        res.set_content("{\"error\":\"scripted\"}", "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  ClientConfig config() const {
    ClientConfig c;
    c.offline = false;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.backoff_ms = 1;
    c.max_backoff_ms = 4;
    c.concurrency = 1;
    c.timeout_seconds = 5;
    return c;
  }
  std::size_t calls() const { return calls_; }
  const std::string& last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  std::vector<int> statuses_;
  std::string content_;
  std::atomic<std::size_t> calls_{0};
  std::string last_body_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_SUITE("refgen") {
  TEST_CASE("prompt rendering") {
    const auto t = PromptTemplate::common_app();
    const auto p = render_prompt(t, "Why engineering?");
    CHECK(occurrences(p, "Why engineering?") == 1);
    CHECK(occurrences(p, std::string(kQuestionSlot)) == 0);
    CHECK(p.find("250") != std::string::npos);
    CHECK(p.find("650") != std::string::npos);
    CHECK(p == render_prompt(t, "Why engineering?"));
    CHECK_THROWS_AS(render_prompt(t, ""), InputError);
    auto bad = t;
    bad.prompt_slot = std::string(kQuestionSlot) + std::string(kQuestionSlot);
    CHECK_THROWS_AS(render_prompt(bad, "q"), InputError);
  }

  TEST_CASE("prompt mix validation") {
    PromptMix m{{{"a", 2}, {"b", 6}}};
    m.validate_and_normalize();
    CHECK(m.questions[0].second == doctest::Approx(0.25));
    PromptMix neg{{{"a", -1}}};
    CHECK_THROWS_AS(neg.validate_and_normalize(), InputError);
    PromptMix empty;
    CHECK_THROWS_AS(empty.validate_and_normalize(), InputError);
    CHECK(PromptMix::common_app().questions.size() == 8);
  }

  TEST_CASE("question sampling follows the weights") {
    Engine rng(1);
    PromptMix one{{{"only", 1}}};
    for (int i = 0; i < 100; ++i) CHECK(sample_question(one, rng) == "only");

    PromptMix two{{{"a", 0.5}, {"b", 0.5}}};
    int a = 0;
    for (int i = 0; i < 10000; ++i) a += sample_question(two, rng) == "a";
    CHECK(std::abs(a / 10000.0 - 0.5) < 0.02);

    const auto mix = PromptMix::common_app();
    std::map<std::string, int> seen;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++seen[sample_question(mix, rng)];
    for (const auto& [q, w] : mix.questions) CHECK(std::abs(seen[q] / double(n) - w) < 0.01);
  }

  TEST_CASE("offline generation respects bounds and is deterministic") {
    ClientConfig c;
    c.seed = 5;
    const auto r = generate_corpus(c, 10);
    CHECK(r.essays.size() + r.log.drops == 10);
    CHECK(r.log.count() == r.log.successes + r.log.drops);
    for (const auto& e : r.essays) {
      const auto wc = textproc::word_count(e.essay_text);
      CHECK(wc >= 250);
      CHECK(wc <= 650);
      CHECK(e.source_label == corpus::SourceLabel::LLM);
    }
    c.concurrency = 3;
    const auto again = generate_corpus(c, 10);
    REQUIRE(again.essays.size() == r.essays.size());
    for (std::size_t i = 0; i < r.essays.size(); ++i) CHECK(again.essays[i].essay_text == r.essays[i].essay_text);
    CHECK(generate_corpus(c, 0).essays.empty());
  }

  TEST_CASE("human pool and writers differ in style") {
    const auto h = human_pool(5, 2);
    CHECK(h.size() == 5);
    for (const auto& e : h) CHECK(e.source_label == corpus::SourceLabel::Human);
    CHECK(h[0].essay_text == human_pool(5, 2)[0].essay_text);
    OfflineEssayWriter w(WriterStyle::Llm);
    CHECK(w.write("q", 9, 0) == w.write("q", 9, 0));
    CHECK(w.write("q", 9, 0) != w.write("q", 9, 1));
    CHECK_THROWS_AS(OfflineEssayWriter(WriterStyle::Llm, {300, 310}), InputError);
  }

  TEST_CASE("client retries 5xx and 429, then succeeds") {
    FakeEndpoint ep({500, 429, 200});
    ChatClient client(ep.config());
    int retries = -1;
    const auto text = client.complete("hello", &retries);
    CHECK(textproc::word_count(text) == 300);
    CHECK(retries == 2);
    CHECK(ep.calls() == 3);
    const auto body = nlohmann::json::parse(ep.last_body());
    CHECK(body["model"] == "gpt-4o");
    CHECK(body["messages"][0]["content"] == "hello");
  }

  TEST_CASE("client gives up after max attempts") {
    FakeEndpoint ep({503, 503, 503, 503, 503});
    auto cfg = ep.config();
    cfg.max_attempts = 3;
    ChatClient client(cfg);
    CHECK_THROWS_AS(client.complete("x"), NetworkError);
    CHECK(ep.calls() == 3);
  }

  TEST_CASE("client fails fast on 4xx") {
    FakeEndpoint ep({400});
    ChatClient client(ep.config());
    CHECK_THROWS_AS(client.complete("x"), NetworkError);
    CHECK(ep.calls() == 1);
  }

  TEST_CASE("short responses are regenerated and then dropped") {
    FakeEndpoint ep({}, "too short.");
    auto cfg = ep.config();
    cfg.max_length_retries = 2;
    const auto r = generate_corpus(cfg, 2);
    CHECK(r.essays.empty());
    CHECK(r.log.drops == 2);
    CHECK(r.log.count() == 2);
    CHECK(ep.calls() == 6);
    for (const auto& e : r.log.entries) {
      CHECK(e.dropped);
      CHECK(e.length_retries == 2);
      CHECK(!e.reason.empty());
    }
  }

  TEST_CASE("online generation through the endpoint") {
    FakeEndpoint ep({500});
    const auto r = generate_corpus(ep.config(), 3);
    CHECK(r.essays.size() == 3);
    CHECK(r.log.successes == 3);
    CHECK(r.log.entries[0].network_retries == 1);
  }
}
