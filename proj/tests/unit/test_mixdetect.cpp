#include <doctest.h>

#include <cmath>
#include <random>

#include "essaylens/error.hpp"
#include "essaylens/mixdetect.hpp"
#include "essaylens/refgen.hpp"
#include "support.hpp"

using namespace essaylens;
using namespace essaylens::mixdetect;

namespace {

TokenDistribution dist(std::vector<std::string> vocab, std::vector<double> p, corpus::SourceLabel l) {
  return TokenDistribution(std::move(vocab), std::move(p), 0.5, 1, l, "test");
}

std::vector<std::string> texts_of(const std::vector<corpus::ReferenceEssay>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(e.essay_text);
  return out;
}

struct Corpora {
  ReferenceModel model;
  std::vector<std::string> test_human, test_llm;
};

const Corpora& corpora() {
  static const Corpora c = [] {
    auto human = texts_of(refgen::human_pool(350, 11));
    refgen::ClientConfig cfg;
    cfg.seed = 12;
    cfg.concurrency = 1;
    auto llm = texts_of(refgen::generate_corpus(cfg, 350).essays);
    Corpora out;
    out.test_human.assign(human.begin() + 300, human.end());
    out.test_llm.assign(llm.begin() + 300, llm.end());
    human.resize(300);
    llm.resize(300);
    out.model = fit_references(human, llm);
    return out;
  }();
  return c;
}

std::vector<textproc::TokenStream> streams(const std::vector<std::string>& texts) {
  std::vector<textproc::TokenStream> out;
  for (const auto& t : texts) out.push_back(textproc::tokenize(t));
  return out;
}

}  // namespace

TEST_SUITE("mixdetect") {
  TEST_CASE("add-lambda smoothing with an OOV bucket") {
    const std::vector<std::string> essays{"a a b"};
    const auto d = fit_reference(essays, 1.0, 1);
    REQUIRE(d.vocabulary() == std::vector<std::string>{"a", "b"});
    CHECK(d.probs()[0] == doctest::Approx(3.0 / 6));
    CHECK(d.probs()[1] == doctest::Approx(2.0 / 6));
    CHECK(d.probs()[2] == doctest::Approx(1.0 / 6));
    CHECK(d.prob("zebra") == doctest::Approx(1.0 / 6));
  }

  TEST_CASE("distributions sum to one and pool rare tokens") {
    const auto& m = corpora().model;
    for (const auto* d : {&m.human, &m.llm}) {
      double s = 0;
      for (double p : d->probs()) {
        CHECK(p > 0);
        s += p;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(m.human.vocabulary() == m.llm.vocabulary());
    CHECK(kl_divergence(m.human, m.llm) > 0);
    CHECK(kl_divergence(m.human, m.human) == doctest::Approx(0.0));
  }

  TEST_CASE("identical references give exactly zero") {
    const auto h = dist({"x", "y"}, {0.5, 0.3, 0.2}, corpus::SourceLabel::Human);
    const auto a = dist({"x", "y"}, {0.5, 0.3, 0.2}, corpus::SourceLabel::LLM);
    const auto e = estimate_alpha(textproc::tokenize("x y x q"), h, a);
    CHECK(e.alpha_hat == 0.0);
    CHECK(e.category == UsageCategory::None);
  }

  TEST_CASE("a single token more likely under the model gives exactly one") {
    const auto h = dist({"x"}, {0.1, 0.9}, corpus::SourceLabel::Human);
    const auto a = dist({"x"}, {0.3, 0.7}, corpus::SourceLabel::LLM);
    const auto e = estimate_alpha(textproc::tokenize("x"), h, a);
    CHECK(e.alpha_hat == 1.0);
    CHECK(e.n_scored_tokens == 1);
    CHECK(e.category == UsageCategory::High);
  }

  TEST_CASE("synthetic 50/50 token mixture") {
    std::mt19937_64 rng(3);
    std::vector<std::string> vocab;
    std::vector<double> ph, pa;
    std::gamma_distribution<double> g(1.0);
    for (int i = 0; i < 60; ++i) {
      vocab.push_back("w" + std::to_string(100 + i));
      ph.push_back(g(rng));
      pa.push_back(g(rng));
    }
    auto norm = [](std::vector<double> v) {
      double s = 0;
      for (double x : v) s += x;
      for (double& x : v) x /= s * 1.01;
      v.push_back(0.01 / 1.01);
      return v;
    };
    ph = norm(ph);
    pa = norm(pa);
    const auto h = dist(vocab, ph, corpus::SourceLabel::Human);
    const auto a = dist(vocab, pa, corpus::SourceLabel::LLM);
    std::vector<double> mix(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) mix[i] = 0.5 * ph[i] + 0.5 * pa[i];
    std::discrete_distribution<std::size_t> pick(mix.begin(), mix.end());
    std::string text;
    for (int i = 0; i < 20000; ++i) text += vocab[pick(rng)] + " ";
    const auto e = estimate_alpha(textproc::tokenize(text), h, a);
    CHECK(e.alpha_hat == doctest::Approx(0.5).epsilon(0.1));
    CHECK(e.loglik_at_opt >= e.loglik_at_zero);
  }

  TEST_CASE("corpus-level recovery on held-out essays") {
    const auto& c = corpora();
    const auto hs = streams(c.test_human), ls = streams(c.test_llm);
    CHECK(estimate_corpus_alpha(hs, c.model.human, c.model.llm) <= 0.03);
    CHECK(estimate_corpus_alpha(ls, c.model.human, c.model.llm) >= 0.95);
    std::vector<textproc::TokenStream> mixed;
    for (std::size_t i = 0; i < c.test_human.size(); ++i) {
      const auto n = std::min(textproc::word_count(c.test_human[i]), textproc::word_count(c.test_llm[i]));
      mixed.push_back(textproc::tokenize(splice_mixture(c.test_human[i], c.test_llm[i], 0.25, n)));
    }
    CHECK(estimate_corpus_alpha(mixed, c.model.human, c.model.llm) == doctest::Approx(0.25).epsilon(0.2));
  }

  TEST_CASE("estimate is the grid optimum and the log-likelihood is concave") {
    const auto& c = corpora();
    for (std::size_t i = 0; i < 10; ++i) {
      const auto n = std::min(textproc::word_count(c.test_human[i]), textproc::word_count(c.test_llm[i]));
      const auto text = splice_mixture(c.test_human[i], c.test_llm[i], 0.1 * double(i), n);
      const auto words = textproc::tokenize(text).tokens;
      const auto doc = score_document(words, c.model.human, c.model.llm);
      const auto e = maximize_alpha(doc);
      CHECK(e.alpha_hat >= 0);
      CHECK(e.alpha_hat <= 1);
      double prev = doc.loglik(0), prev_slope = INFINITY;
      for (int k = 1; k <= 1000; ++k) {
        const double a = k / 1000.0;
        const double l = doc.loglik(a);
        CHECK(l <= e.loglik_at_opt + 1e-6);
        const double slope = l - prev;
        CHECK(slope <= prev_slope + 1e-9);
        prev_slope = slope;
        prev = l;
      }
    }
  }

  TEST_CASE("estimates rise with the spliced fraction") {
    const auto& c = corpora();
    double prev = -1;
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::vector<textproc::TokenStream> docs;
      for (std::size_t i = 0; i < 30; ++i) {
        const auto n = std::min(textproc::word_count(c.test_human[i]), textproc::word_count(c.test_llm[i]));
        docs.push_back(textproc::tokenize(splice_mixture(c.test_human[i], c.test_llm[i], a, n)));
      }
      double mean = 0;
      for (const auto& d : docs) mean += estimate_alpha(d, c.model.human, c.model.llm).alpha_hat;
      mean /= double(docs.size());
      CHECK(mean > prev);
      prev = mean;
    }
  }

  TEST_CASE("splice has exactly the requested word count") {
    const auto& c = corpora();
    for (double a : {0.0, 0.13, 0.5, 1.0}) {
      const auto s = splice_mixture(c.test_human[0], c.test_llm[0], a, 200);
      CHECK(textproc::word_count(s) == 200);
    }
    CHECK_THROWS_AS(splice_mixture("one two.", "three four.", 0.5, 10), InputError);
    CHECK_THROWS_AS(splice_mixture("a", "b", 1.5, 1), InputError);
  }

  TEST_CASE("categorize boundaries") {
    const UsageThresholds t{0.07, 0.13};
    CHECK(categorize(0.0, t) == UsageCategory::None);
    CHECK(categorize(1e-9, t) == UsageCategory::Low);
    CHECK(categorize(0.07, t) == UsageCategory::Low);
    CHECK(categorize(0.0700001, t) == UsageCategory::Medium);
    CHECK(categorize(0.13, t) == UsageCategory::Medium);
    CHECK(categorize(0.1300001, t) == UsageCategory::High);
    CHECK(categorize(1.0, t) == UsageCategory::High);
    CHECK_THROWS_AS((UsageThresholds{0.2, 0.1}.validate()), InputError);
  }

  TEST_CASE("tercile thresholds use nearest rank over positive estimates") {
    const std::vector<double> est{0, 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto t = tercile_thresholds(est);
    CHECK(t.low_upper == 0.3);
    CHECK(t.medium_upper == 0.6);
    const std::vector<double> none{0, 0, 0};
    CHECK_THROWS_AS(tercile_thresholds(none), InputError);
  }

  TEST_CASE("reference model round trip") {
    const auto dir = testsupport::scratch("mixdetect_rt");
    const auto path = (dir / "model.json").string();
    save_reference_model(path, corpora().model);
    const auto back = load_reference_model(path);
    CHECK(back.human.vocabulary() == corpora().model.human.vocabulary());
    CHECK(back.llm.probs() == corpora().model.llm.probs());
    CHECK(back.human.vocabulary_digest() == corpora().model.human.vocabulary_digest());
    CHECK(back.human.smoothing_lambda() == corpora().model.human.smoothing_lambda());
  }

  TEST_CASE("calibration curve tracks the diagonal") {
    const auto& c = corpora();
    const std::vector<double> alphas{0.0, 0.5, 1.0};
    CalibrationOptions o;
    o.docs_per_bin = 20;
    o.seed = 4;
    const auto rows = calibration_curve(c.model.human, c.model.llm, c.test_human, c.test_llm, alphas, o);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.n_docs == 20);
      CHECK(std::abs(r.mean_alpha_hat - r.true_alpha) < 0.08);
      CHECK(r.ci_lo <= r.mean_alpha_hat);
      CHECK(r.ci_hi >= r.mean_alpha_hat);
    }
    const std::vector<std::string> empty;
    CHECK_THROWS_AS(calibration_curve(c.model.human, c.model.llm, empty, c.test_llm, alphas, o), InputError);
  }
}
