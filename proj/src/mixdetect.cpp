#include "essaylens/mixdetect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "essaylens/digest.hpp"
#include "essaylens/error.hpp"
#include "essaylens/optimize.hpp"
#include "essaylens/random.hpp"

namespace essaylens::mixdetect {

using nlohmann::ordered_json;

namespace {

constexpr int kModelFormatVersion = 1;

std::string digest_vocabulary(const std::vector<std::string>& vocab) {
  Sha256 h;
  for (const auto& t : vocab) {
    h.update(t);
    h.update(std::string_view("\0", 1));
  }
  return h.hex();
}

}  // namespace

TokenCounts count_tokens(std::span<const std::string> texts) {
  std::unordered_map<std::string, std::size_t> tmp;
  for (const auto& t : texts) {
    for (auto& w : textproc::tokenize(t).tokens) ++tmp[std::move(w)];
  }
  return TokenCounts(tmp.begin(), tmp.end());
}

TokenCounts count_tokens(std::span<const textproc::TokenStream> streams) {
  std::unordered_map<std::string, std::size_t> tmp;
  for (const auto& s : streams) {
    for (const auto& w : s.tokens) ++tmp[w];
  }
  return TokenCounts(tmp.begin(), tmp.end());
}

TokenDistribution::TokenDistribution(std::vector<std::string> vocabulary, std::vector<double> probs, double lambda,
                                     std::size_t min_count, corpus::SourceLabel label, std::string provenance,
                                     std::optional<std::set<std::string, std::less<>>> token_subset)
    : vocabulary_(std::move(vocabulary)),
      probs_(std::move(probs)),
      lambda_(lambda),
      min_count_(min_count),
      label_(label),
      provenance_(std::move(provenance)),
      subset_(std::move(token_subset)) {
  if (probs_.size() != vocabulary_.size() + 1)
    throw InputError("token distribution: probs must have vocabulary size + 1 entries");
  for (double p : probs_) {
    if (!(p > 0) || !std::isfinite(p)) throw InputError("token distribution: probabilities must be strictly positive");
  }
  if (!std::is_sorted(vocabulary_.begin(), vocabulary_.end()) ||
      std::adjacent_find(vocabulary_.begin(), vocabulary_.end()) != vocabulary_.end())
    throw InputError("token distribution: vocabulary must be sorted and unique");
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_.emplace(vocabulary_[i], i);
  vocab_digest_ = digest_vocabulary(vocabulary_);
}

std::size_t TokenDistribution::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? oov_index() : it->second;
}

bool TokenDistribution::scores(std::string_view token) const { return !subset_ || subset_->count(token) > 0; }

std::vector<std::string> build_vocabulary(std::span<const TokenCounts> corpora, std::size_t min_count,
                                          const ReferenceOptions& opts) {
  TokenCounts total;
  for (const auto& c : corpora) {
    for (const auto& [tok, n] : c) total[tok] += n;
  }
  std::vector<std::string> vocab;
  for (const auto& [tok, n] : total) {
    if (n < min_count) continue;
    if (opts.token_subset && !opts.token_subset->count(tok)) continue;
    vocab.push_back(tok);
  }
  return vocab;  // std::map iteration is already sorted
}

TokenDistribution fit_reference(const TokenCounts& counts, const std::vector<std::string>& vocabulary,
                                const ReferenceOptions& opts, corpus::SourceLabel label, std::string provenance) {
  if (!(opts.lambda > 0)) throw InputError("fit_reference: lambda must be positive");
  if (counts.empty()) throw InputError("fit_reference: empty corpus");
  std::vector<double> c(vocabulary.size() + 1, 0.0);
  double total = 0;
  for (const auto& [tok, n] : counts) {
    if (opts.token_subset && !opts.token_subset->count(tok)) continue;
    const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), tok);
    const std::size_t idx =
        (it != vocabulary.end() && *it == tok) ? static_cast<std::size_t>(it - vocabulary.begin()) : vocabulary.size();
    c[idx] += static_cast<double>(n);
    total += static_cast<double>(n);
  }
  const double denom = total + opts.lambda * static_cast<double>(c.size());
  std::vector<double> probs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) probs[i] = (c[i] + opts.lambda) / denom;
  return TokenDistribution(vocabulary, std::move(probs), opts.lambda, opts.min_count, label, std::move(provenance),
                           opts.token_subset);
}

TokenDistribution fit_reference(std::span<const std::string> essays, double lambda, std::size_t min_count,
                                corpus::SourceLabel label) {
  if (essays.empty()) throw InputError("fit_reference: empty corpus");
  ReferenceOptions opts;
  opts.lambda = lambda;
  opts.min_count = min_count;
  const TokenCounts counts = count_tokens(essays);
  const auto vocab = build_vocabulary(std::span<const TokenCounts>(&counts, 1), min_count, opts);
  return fit_reference(counts, vocab, opts, label, corpus_digest(essays));
}

ReferenceModel fit_references(std::span<const std::string> human_essays, std::span<const std::string> llm_essays,
                              const ReferenceOptions& opts) {
  if (human_essays.empty() || llm_essays.empty()) throw InputError("fit_references: empty reference corpus");
  const std::array<TokenCounts, 2> counts = {count_tokens(human_essays), count_tokens(llm_essays)};
  const auto vocab = build_vocabulary(counts, opts.min_count, opts);
  return {fit_reference(counts[0], vocab, opts, corpus::SourceLabel::Human, corpus_digest(human_essays)),
          fit_reference(counts[1], vocab, opts, corpus::SourceLabel::LLM, corpus_digest(llm_essays))};
}

std::string corpus_digest(std::span<const std::string> essays) {
  Sha256 h;
  for (const auto& e : essays) {
    h.update(e);
    h.update(std::string_view("\0", 1));
  }
  return h.hex();
}

void save_reference_model(const std::string& path, const ReferenceModel& model) {
  if (model.human.vocabulary_digest() != model.llm.vocabulary_digest())
    throw InputError("reference model: human and LLM vocabularies differ");
  ordered_json j;
  j["format"] = "essaylens-reference-model";
  j["version"] = kModelFormatVersion;
  j["tokenizer_version"] = textproc::kTokenizerVersion;
  j["lambda"] = model.human.smoothing_lambda();
  j["min_count"] = model.human.min_count();
  if (const auto& s = model.human.token_subset()) j["token_subset"] = std::vector<std::string>(s->begin(), s->end());
  else j["token_subset"] = nullptr;
  j["vocabulary_digest"] = model.human.vocabulary_digest();
  j["vocabulary"] = model.human.vocabulary();
  for (const auto* d : {&model.human, &model.llm}) {
    ordered_json side;
    side["provenance"] = d->provenance();
    side["probs"] = d->probs();
    j[d->source_label() == corpus::SourceLabel::Human ? "human" : "llm"] = std::move(side);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write reference model: " + path);
  out << j.dump() << '\n';
}

ReferenceModel load_reference_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read reference model: " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != "essaylens-reference-model") throw InputError("not a reference model file: " + path);
    if (j.at("version").get<int>() != kModelFormatVersion) throw InputError("unsupported reference model version");
    if (j.at("tokenizer_version").get<int>() != textproc::kTokenizerVersion)
      throw InputError("reference model was built with a different tokenizer version");
    const auto vocab = j.at("vocabulary").get<std::vector<std::string>>();
    const double lambda = j.at("lambda").get<double>();
    const auto min_count = j.at("min_count").get<std::size_t>();
    std::optional<std::set<std::string, std::less<>>> subset;
    if (!j.at("token_subset").is_null()) {
      const auto v = j.at("token_subset").get<std::vector<std::string>>();
      subset.emplace(v.begin(), v.end());
    }
    auto side = [&](const char* key, corpus::SourceLabel label) {
      const auto& s = j.at(key);
      return TokenDistribution(vocab, s.at("probs").get<std::vector<double>>(), lambda, min_count, label,
                               s.at("provenance").get<std::string>(), subset);
    };
    ReferenceModel m{side("human", corpus::SourceLabel::Human), side("llm", corpus::SourceLabel::LLM)};
    if (m.human.vocabulary_digest() != j.at("vocabulary_digest").get<std::string>())
      throw InputError("reference model vocabulary digest mismatch: " + path);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed reference model " + path + ": " + e.what());
  }
}

double kl_divergence(const TokenDistribution& p, const TokenDistribution& q) {
  if (p.vocabulary_digest() != q.vocabulary_digest()) throw InputError("kl_divergence: vocabularies differ");
  double kl = 0;
  for (std::size_t i = 0; i < p.probs().size(); ++i) kl += p.probs()[i] * std::log(p.probs()[i] / q.probs()[i]);
  return kl;
}

std::string_view to_string(UsageCategory c) {
  switch (c) {
    case UsageCategory::None: return "None";
    case UsageCategory::Low: return "Low";
    case UsageCategory::Medium: return "Medium";
    case UsageCategory::High: return "High";
  }
  return "None";
}

void UsageThresholds::validate() const {
  if (!(0 < low_upper && low_upper < medium_upper && medium_upper < 1))
    throw InputError("usage thresholds must satisfy 0 < low_upper < medium_upper < 1");
}

UsageCategory categorize(double alpha_hat, const UsageThresholds& t) {
  if (alpha_hat <= 0) return UsageCategory::None;
  if (alpha_hat <= t.low_upper) return UsageCategory::Low;
  if (alpha_hat <= t.medium_upper) return UsageCategory::Medium;
  return UsageCategory::High;
}

UsageThresholds tercile_thresholds(std::span<const double> estimates) {
  std::vector<double> pos;
  for (double a : estimates) {
    if (a > 0) pos.push_back(a);
  }
  if (pos.size() < 3) throw InputError("tercile_thresholds: need at least 3 nonzero estimates");
  std::sort(pos.begin(), pos.end());
  const std::size_t n = pos.size();
  const std::size_t r1 = (n + 2) / 3;          // ceil(n/3)
  const std::size_t r2 = (2 * n + 2) / 3;      // ceil(2n/3)
  UsageThresholds t{pos[r1 - 1], pos[r2 - 1]};
  if (!(t.low_upper < t.medium_upper) || !(t.medium_upper < 1))
    throw InputError("tercile_thresholds: degenerate distribution of positive estimates");
  return t;
}

double ScoredDocument::loglik(double alpha) const {
  double ll = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) ll += counts[i] * std::log((1 - alpha) * p_human[i] + alpha * p_llm[i]);
  return ll;
}

void ScoredDocument::append(const ScoredDocument& o) {
  counts.insert(counts.end(), o.counts.begin(), o.counts.end());
  p_human.insert(p_human.end(), o.p_human.begin(), o.p_human.end());
  p_llm.insert(p_llm.end(), o.p_llm.begin(), o.p_llm.end());
  n_tokens += o.n_tokens;
  n_in_vocabulary += o.n_in_vocabulary;
}

ScoredDocument score_document(std::span<const std::string> words, const TokenDistribution& p_human,
                              const TokenDistribution& p_llm) {
  if (p_human.vocabulary_digest() != p_llm.vocabulary_digest())
    throw InputError("reference distributions do not share a vocabulary");
  std::unordered_map<std::size_t, double> counts;
  ScoredDocument doc;
  for (const auto& w : words) {
    if (!p_human.scores(w)) continue;
    const std::size_t idx = p_human.index_of(w);
    counts[idx] += 1.0;
    ++doc.n_tokens;
    if (idx != p_human.oov_index()) ++doc.n_in_vocabulary;
  }
  std::vector<std::pair<std::size_t, double>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [idx, c] : sorted) {
    doc.counts.push_back(c);
    doc.p_human.push_back(p_human.probs()[idx]);
    doc.p_llm.push_back(p_llm.probs()[idx]);
  }
  return doc;
}

AlphaEstimate maximize_alpha(const ScoredDocument& doc, const OptimizerOptions& opt, const UsageThresholds& thresholds) {
  if (doc.n_in_vocabulary == 0) throw InputError("estimate_alpha: no essay token overlaps the reference vocabulary");
  double slope0 = 0;
  double slope1 = 0;
  for (std::size_t i = 0; i < doc.counts.size(); ++i) {
    slope0 += doc.counts[i] * (doc.p_llm[i] / doc.p_human[i] - 1.0);
    slope1 += doc.counts[i] * (1.0 - doc.p_human[i] / doc.p_llm[i]);
  }
  AlphaEstimate est;
  est.n_scored_tokens = doc.n_tokens;
  est.loglik_at_zero = doc.loglik(0.0);
  if (slope0 <= 0) {
    est.alpha_hat = 0.0;
    est.loglik_at_opt = est.loglik_at_zero;
  } else if (slope1 >= 0) {
    est.alpha_hat = 1.0;
    est.loglik_at_opt = doc.loglik(1.0);
  } else {
    const auto best = golden_section_maximize([&](double a) { return doc.loglik(a); }, 0.0, 1.0, opt.tolerance,
                                              opt.max_iterations);
    est.alpha_hat = best.x;
    est.loglik_at_opt = best.value;
  }
  if (est.loglik_at_opt < est.loglik_at_zero) {  // rounding on a nearly flat profile
    est.alpha_hat = 0.0;
    est.loglik_at_opt = est.loglik_at_zero;
  }
  est.category = categorize(est.alpha_hat, thresholds);
  return est;
}

AlphaEstimate estimate_alpha(const textproc::TokenStream& essay, const TokenDistribution& p_human,
                             const TokenDistribution& p_llm, const UsageThresholds& thresholds,
                             const OptimizerOptions& opt) {
  return maximize_alpha(score_document(essay.tokens, p_human, p_llm), opt, thresholds);
}

double estimate_corpus_alpha(std::span<const textproc::TokenStream> essays, const TokenDistribution& p_human,
                             const TokenDistribution& p_llm, const OptimizerOptions& opt) {
  if (essays.empty()) throw InputError("estimate_corpus_alpha: empty corpus");
  ScoredDocument pooled;
  for (const auto& e : essays) pooled.append(score_document(e.tokens, p_human, p_llm));
  return maximize_alpha(pooled, opt).alpha_hat;
}

namespace {

std::string take_words(std::span<const std::string> sentences, std::size_t budget) {
  std::string out;
  std::size_t taken = 0;
  for (const auto& s : sentences) {
    if (taken >= budget) break;
    const auto ts = textproc::tokenize(s);
    const std::size_t n = ts.tokens.size();
    if (!out.empty()) out.push_back(' ');
    if (taken + n <= budget) {
      out += s;
      taken += n;
    } else {
      const std::size_t k = budget - taken;
      for (std::size_t i = 0; i < k; ++i) {
        if (i) out.push_back(' ');
        out += ts.tokens[i];
      }
      out.push_back('.');
      taken = budget;
    }
  }
  if (taken < budget) throw InputError("splice_mixture: source text has fewer words than required");
  return out;
}

}  // namespace

std::string splice_mixture(std::string_view human_text, std::string_view llm_text, double alpha,
                           std::size_t total_words) {
  if (alpha < 0 || alpha > 1) throw InputError("splice_mixture: alpha must be in [0, 1]");
  const auto n_llm = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(total_words)));
  const std::size_t n_human = total_words - n_llm;
  std::string out;
  if (n_human > 0) out = take_words(textproc::split_sentences(human_text), n_human);
  if (n_llm > 0) {
    if (!out.empty()) out.push_back(' ');
    out += take_words(textproc::split_sentences(llm_text), n_llm);
  }
  return out;
}

std::vector<CalibrationRow> calibration_curve(const TokenDistribution& p_human, const TokenDistribution& p_llm,
                                              std::span<const std::string> holdout_human,
                                              std::span<const std::string> holdout_llm,
                                              std::span<const double> alphas, const CalibrationOptions& opts) {
  if (holdout_human.empty() || holdout_llm.empty() || opts.docs_per_bin == 0)
    throw InputError("calibration_curve: insufficient holdout size");
  std::vector<std::size_t> human_words(holdout_human.size());
  std::vector<std::size_t> llm_words(holdout_llm.size());
  for (std::size_t i = 0; i < holdout_human.size(); ++i) human_words[i] = textproc::word_count(holdout_human[i]);
  for (std::size_t i = 0; i < holdout_llm.size(); ++i) llm_words[i] = textproc::word_count(holdout_llm[i]);
  for (const auto* v : {&human_words, &llm_words}) {
    if (*std::min_element(v->begin(), v->end()) < opts.min_doc_words)
      throw InputError("calibration_curve: insufficient holdout size (document shorter than minimum)");
  }

  std::vector<CalibrationRow> rows;
  for (std::size_t b = 0; b < alphas.size(); ++b) {
    const double alpha = alphas[b];
    Engine rng = substream(opts.seed, b);
    std::vector<double> est(opts.docs_per_bin);
    for (std::size_t j = 0; j < opts.docs_per_bin; ++j) {
      const std::size_t h = (j + b * opts.docs_per_bin) % holdout_human.size();
      const std::size_t a = static_cast<std::size_t>(rng() % holdout_llm.size());
      const std::size_t total = std::min(human_words[h], llm_words[a]);
      const auto doc = splice_mixture(holdout_human[h], holdout_llm[a], alpha, total);
      est[j] = estimate_alpha(textproc::tokenize(doc), p_human, p_llm).alpha_hat;
    }
    const double n = static_cast<double>(est.size());
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / n;
    double ss = 0;
    for (double e : est) ss += (e - mean) * (e - mean);
    const double sd = est.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(n);
    rows.push_back({alpha, mean, mean - half, mean + half, sd, est.size()});
  }
  return rows;
}

}  // namespace essaylens::mixdetect
