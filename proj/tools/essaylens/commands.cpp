#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "essaylens/corpus.hpp"
#include "essaylens/econo.hpp"
#include "essaylens/econo_report.hpp"
#include "essaylens/error.hpp"
#include "essaylens/mixdetect.hpp"
#include "essaylens/parallel.hpp"
#include "essaylens/refgen.hpp"
#include "essaylens/simlab.hpp"
#include "essaylens/stylometry.hpp"
#include "rundir.hpp"

namespace essaylens::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string num(double x) { return fmt::format("{}", x); }

void log(const std::string& msg) { fmt::print(stderr, "{}\n", msg); }

corpus::EraPartition era_of(const RunConfig& c) {
  return {c.pre_years, c.post_years, "configured era years"};
}

const char* group_name(bool fee_waiver) { return fee_waiver ? "Lower SES" : "Higher SES"; }

std::vector<std::string> texts_of(const std::vector<corpus::ReferenceEssay>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.essay_text);
  return out;
}

std::optional<stylometry::FeatureVector> safe_features(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return stylometry::features_of(text);
  } catch (const InputError&) {
    return std::nullopt;  // too short for one of the measures
  }
}

std::string features_csv(const std::vector<std::string>& ids,
                         const std::vector<std::optional<stylometry::FeatureVector>>& feats) {
  std::ostringstream out;
  out << "id";
  for (auto k : stylometry::feature_keys()) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << corpus::csv_escape(ids[i]);
    if (feats[i])
      for (double v : feats[i]->values()) out << ',' << num(v);
    else
      for (std::size_t k = 0; k < stylometry::FeatureVector::kSize; ++k) out << ',';
    out << '\n';
  }
  return out.str();
}

/// Reads a headered CSV into id -> row (column name -> field).
std::map<std::string, std::map<std::string, std::string>> read_keyed_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError(fmt::format("cannot read '{}'", p.string()));
  auto rows = corpus::parse_csv(in);
  if (rows.empty()) throw InputError(fmt::format("'{}' is empty", p.string()));
  const auto header = rows.front();
  std::map<std::string, std::map<std::string, std::string>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw InputError(fmt::format("'{}' row {} has {} fields, expected {}", p.string(), r, rows[r].size(), header.size()));
    auto& row = out[rows[r][0]];
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = rows[r][k];
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(fmt::format("bad number '{}' in {}", s, what));
  }
}

struct Loaded {
  econo::AnalysisData data;
  std::vector<fs::path> inputs;
  std::string alpha_source;
  std::vector<corpus::FieldScaling> scaling;
};

void standardize_if_raw(std::vector<corpus::EssayRecord>& records, std::vector<corpus::FieldScaling>& scaling) {
  if (records.empty() || records.front().covariates.standardized) return;
  for (const auto& f : corpus::continuous_fields()) {
    std::size_t present = 0;
    for (const auto& r : records) {
      const auto& cv = r.covariates;
      const bool has = f == "gpa_scaled" || (f == "sat_rw" && cv.sat_rw) || (f == "sat_math" && cv.sat_math) ||
                       (f == "act_composite" && cv.act_composite) || (f == "act_math" && cv.act_math);
      present += has;
    }
    if (present < 2) continue;
    auto s = corpus::standardize(records, {f});
    scaling.insert(scaling.end(), s.begin(), s.end());
  }
  for (auto& r : records) r.covariates.standardized = true;
}

std::vector<std::optional<double>> load_alpha(const RunDir& dir, const std::vector<corpus::EssayRecord>& records,
                                              Loaded& out) {
  std::vector<std::optional<double>> alpha(records.size());
  fs::path src;
  std::string column;
  if (dir.exists(files::kScores)) {
    src = dir.path(files::kScores);
    column = "alpha_hat";
    out.alpha_source = "detector estimates (scores.csv)";
  } else if (dir.exists(files::kTruth)) {
    src = dir.path(files::kTruth);
    column = "true_alpha";
    out.alpha_source = "simulated true alpha (truth.csv); run `essaylens score` to use detector estimates";
  } else {
    throw InputError(fmt::format("no alpha estimates in '{}'; run `essaylens score` first", dir.root().string()));
  }
  const auto table = read_keyed_csv(src);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it = table.find(records[i].id);
    if (it == table.end()) continue;
    const auto& field = it->second.at(column);
    if (!field.empty()) alpha[i] = parse_double(field, src.string());
  }
  out.inputs.push_back(src);
  return alpha;
}

std::vector<std::optional<stylometry::FeatureVector>> load_features(const RunDir& dir,
                                                                    const std::vector<corpus::EssayRecord>& records,
                                                                    std::size_t threads, Loaded& out) {
  std::vector<std::optional<stylometry::FeatureVector>> feats(records.size());
  if (dir.exists(files::kFeatures)) {
    const auto p = dir.path(files::kFeatures);
    const auto table = read_keyed_csv(p);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto it = table.find(records[i].id);
      if (it == table.end() || it->second.at("n_words").empty()) continue;
      stylometry::FeatureVector f;
      // Same order as feature_keys().
      std::array<double*, stylometry::FeatureVector::kSize> slots{
          &f.n_tokens, &f.n_words, &f.n_types, &f.avg_word_len, &f.avg_sentence_len, &f.ttr,
          &f.maas_ttr, &f.mtld,    &f.hdd,     &f.yules_k,      &f.complexity};
      for (std::size_t k = 0; k < slots.size(); ++k)
        *slots[k] = parse_double(it->second.at(std::string(stylometry::feature_keys()[k])), p.string());
      feats[i] = f;
    }
    out.inputs.push_back(p);
    return feats;
  }
  parallel_for(records.size(), [&](std::size_t i) { feats[i] = safe_features(records[i].essay_text); }, threads);
  return feats;
}

Loaded load(const RunConfig& c, const RunDir& dir, bool need_alpha, bool need_features) {
  Loaded out;
  const auto corpus_path = dir.require(files::kCorpus, "ingest` or `essaylens simulate");
  out.inputs.push_back(corpus_path);
  auto records = corpus::read_jsonl(corpus_path.string());
  standardize_if_raw(records, out.scaling);
  if (need_alpha) out.data.alpha_hat = load_alpha(dir, records, out);
  if (need_features) out.data.features = load_features(dir, records, c.threads, out);
  out.data.records = std::move(records);
  out.data.era = era_of(c);
  return out;
}

ordered_json scaling_json(const std::vector<corpus::FieldScaling>& s) {
  ordered_json j = ordered_json::array();
  for (const auto& f : s) j.push_back({{"field", f.field}, {"mean", f.mean}, {"sd", f.sd}});
  return j;
}

mixdetect::UsageThresholds thresholds_for(const RunConfig& c, const RunDir& dir, const econo::AnalysisData& data,
                                          std::vector<fs::path>& inputs) {
  if (c.thresholds) return *c.thresholds;
  if (dir.exists(files::kThresholds)) {
    const auto p = dir.path(files::kThresholds);
    const auto j = nlohmann::json::parse(read_file(p));
    inputs.push_back(p);
    return {j.at("low_upper").get<double>(), j.at("medium_upper").get<double>()};
  }
  std::vector<double> post;
  for (std::size_t i = 0; i < data.records.size(); ++i)
    if (data.era.is_post(data.records[i].cycle_year) && data.alpha_hat[i]) post.push_back(*data.alpha_hat[i]);
  return mixdetect::tercile_thresholds(post);
}

}  // namespace

// ------------------------------------------------------------------ ingest

void cmd_ingest(const RunConfig& c) {
  if (c.input.empty()) throw InputError("ingest needs an input file (--input or paths.input)");
  RunDir dir(c.run_dir);
  Manifest m(dir, "ingest", c);
  corpus::Schema schema;
  if (!c.schema.empty()) {
    schema = corpus::Schema::from_json_file(c.schema);
    m.input(c.schema);
  }
  m.input(c.input);
  const auto res = corpus::ingest(c.input, schema, {c.min_words, c.min_year, c.max_year});

  std::ostringstream jsonl;
  corpus::write_jsonl(jsonl, res.records);
  m.write(files::kCorpus, jsonl.str());

  ordered_json rep;
  rep["rows_read"] = res.report.rows_read;
  rep["accepted"] = res.report.accepted;
  rep["reject_counts"] = res.report.reject_counts;
  rep["rejects"] = ordered_json::array();
  for (const auto& r : res.report.rejects) rep["rejects"].push_back({{"row", r.row}, {"id", r.id}, {"reason", r.reason}});
  const auto part = corpus::partition(res.records, era_of(c));
  rep["era_counts"] = {{"pre", part.pre.size()}, {"post", part.post.size()}, {"outside", part.outside.size()}};
  m.write(files::kIngestReport, rep.dump(2) + "\n");
  m.commit();
  log(fmt::format("ingest: {} rows read, {} accepted, {} rejected", res.report.rows_read, res.report.accepted,
                  res.report.rejects.size()));
}

// ------------------------------------------------------------------ features

void cmd_features(const RunConfig& c) {
  RunDir dir(c.run_dir);
  Manifest m(dir, "features", c);
  const fs::path src = c.input.empty() ? dir.require(files::kCorpus, "ingest") : fs::path(c.input);
  m.input(src);
  const auto essays = corpus::read_reference_jsonl(src.string());
  std::vector<std::string> ids;
  std::vector<std::optional<stylometry::FeatureVector>> feats(essays.size());
  for (const auto& e : essays) ids.push_back(e.id);
  parallel_for(essays.size(), [&](std::size_t i) { feats[i] = safe_features(essays[i].essay_text); }, c.threads);
  m.write(files::kFeatures, features_csv(ids, feats));
  m.commit();
  log(fmt::format("features: {} essays", essays.size()));
}

// ------------------------------------------------------------------ reference corpora

void cmd_gen_refs(const RunConfig& c) {
  const auto seed = c.require_seed("gen-refs");
  RunDir dir(c.run_dir);
  Manifest m(dir, "gen-refs", c);
  refgen::ClientConfig cc;
  cc.offline = c.offline;
  cc.base_url = c.base_url;
  cc.model = c.model;
  cc.api_key_env = c.api_key_env;
  cc.concurrency = c.concurrency;
  cc.seed = derive_seed(seed, 0);
  if (!cc.offline && cc.base_url.empty()) throw InputError("online generation needs refgen.base_url (--base-url)");

  const auto gen = refgen::generate_corpus(cc, c.n_llm_refs);
  fs::create_directories(dir.path("refs"));
  corpus::write_reference_jsonl(dir.path(files::kLlmRefs).string(), gen.essays);
  m.wrote(files::kLlmRefs);
  const auto human = refgen::human_pool(c.n_human_refs, derive_seed(seed, 1));
  corpus::write_reference_jsonl(dir.path(files::kHumanRefs).string(), human);
  m.wrote(files::kHumanRefs);

  ordered_json lj;
  lj["successes"] = gen.log.successes;
  lj["drops"] = gen.log.drops;
  lj["entries"] = ordered_json::array();
  for (const auto& e : gen.log.entries) {
    ordered_json x = {{"sequence", e.sequence},   {"model", e.model},
                      {"network_retries", e.network_retries}, {"length_retries", e.length_retries},
                      {"dropped", e.dropped},     {"reason", e.reason},
                      {"question", e.question}};
    // Latency is wall-clock and only meaningful online; leaving it out keeps
    // offline bundles byte-identical.
    if (!cc.offline) x["latency_ms"] = e.latency_ms;
    lj["entries"].push_back(std::move(x));
  }
  m.write(files::kGenerationLog, lj.dump(2) + "\n");
  m.commit();
  log(fmt::format("gen-refs: {} LLM essays ({} dropped), {} human essays", gen.essays.size(), gen.log.drops,
                  human.size()));
}

void cmd_fit_refs(const RunConfig& c) {
  RunDir dir(c.run_dir);
  Manifest m(dir, "fit-refs", c);
  const fs::path hp = c.human_refs.empty() ? dir.require(files::kHumanRefs, "gen-refs") : fs::path(c.human_refs);
  const fs::path lp = c.llm_refs.empty() ? dir.require(files::kLlmRefs, "gen-refs") : fs::path(c.llm_refs);
  m.input(hp);
  m.input(lp);
  auto human = corpus::read_reference_jsonl(hp.string());
  auto llm = corpus::read_reference_jsonl(lp.string());

  // The tail of each corpus is held out for calibration.
  auto split = [&](std::vector<corpus::ReferenceEssay>& v, const char* what) {
    const auto n_hold = static_cast<std::size_t>(std::floor(double(v.size()) * c.holdout));
    if (n_hold == 0 || n_hold == v.size())
      throw InputError(fmt::format("{} reference corpus of {} essays is too small for a {} holdout", what, v.size(),
                                   c.holdout));
    std::vector<corpus::ReferenceEssay> hold(v.end() - std::ptrdiff_t(n_hold), v.end());
    v.resize(v.size() - n_hold);
    return hold;
  };
  const auto hold_h = split(human, "human");
  const auto hold_l = split(llm, "LLM");
  fs::create_directories(dir.path("refs"));
  corpus::write_reference_jsonl(dir.path(files::kHoldoutHuman).string(), hold_h);
  m.wrote(files::kHoldoutHuman);
  corpus::write_reference_jsonl(dir.path(files::kHoldoutLlm).string(), hold_l);
  m.wrote(files::kHoldoutLlm);

  mixdetect::ReferenceOptions ro;
  ro.lambda = c.lambda;
  ro.min_count = c.min_count;
  const auto ht = texts_of(human), lt = texts_of(llm);
  const auto model = mixdetect::fit_references(ht, lt, ro);
  mixdetect::save_reference_model(dir.path(files::kModel).string(), model);
  m.wrote(files::kModel);
  m.note("vocabulary_size", model.human.vocabulary().size());
  m.note("kl_llm_human", mixdetect::kl_divergence(model.llm, model.human));
  m.commit();
  log(fmt::format("fit-refs: vocabulary {} tokens, fitted on {} human / {} LLM essays", model.human.vocabulary().size(),
                  human.size(), llm.size()));
}

// ------------------------------------------------------------------ detector

void cmd_score(const RunConfig& c) {
  RunDir dir(c.run_dir);
  Manifest m(dir, "score", c);
  const auto mp = dir.require(files::kModel, "fit-refs");
  const fs::path src = c.input.empty() ? dir.require(files::kCorpus, "ingest` or `essaylens simulate") : fs::path(c.input);
  m.input(mp);
  m.input(src);
  const auto model = mixdetect::load_reference_model(mp.string());
  const auto records = corpus::read_jsonl(src.string());
  const mixdetect::OptimizerOptions opt{c.tol, c.max_iter};

  std::vector<mixdetect::AlphaEstimate> est(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    est[i] = mixdetect::estimate_alpha(textproc::tokenize(records[i].essay_text), model.human, model.llm, {}, opt);
  }, c.threads);

  mixdetect::UsageThresholds th;
  std::string source;
  if (c.thresholds) {
    th = *c.thresholds;
    source = "config";
  } else {
    std::vector<double> post;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (c.post_years.count(records[i].cycle_year)) post.push_back(est[i].alpha_hat);
    try {
      th = mixdetect::tercile_thresholds(post);
      source = "auto-tercile (post-era positive estimates)";
    } catch (const InputError& e) {
      throw InputError(fmt::format("cannot derive usage thresholds: {}; set detector.thresholds", e.what()));
    }
  }

  std::ostringstream out;
  out << "id,alpha_hat,category,n_scored_tokens,loglik_at_opt,loglik_at_zero\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    out << corpus::csv_escape(records[i].id) << ',' << num(est[i].alpha_hat) << ','
        << mixdetect::to_string(mixdetect::categorize(est[i].alpha_hat, th)) << ',' << est[i].n_scored_tokens << ','
        << num(est[i].loglik_at_opt) << ',' << num(est[i].loglik_at_zero) << '\n';
  m.write(files::kScores, out.str());
  ordered_json tj = {{"low_upper", th.low_upper}, {"medium_upper", th.medium_upper}, {"source", source}};
  m.write(files::kThresholds, tj.dump(2) + "\n");
  m.commit();
  log(fmt::format("score: {} essays, thresholds {:.4f} / {:.4f} ({})", records.size(), th.low_upper, th.medium_upper,
                  source));
}

void cmd_calibrate(const RunConfig& c) {
  const auto seed = c.require_seed("calibrate");
  RunDir dir(c.run_dir);
  Manifest m(dir, "calibrate", c);
  const auto mp = dir.require(files::kModel, "fit-refs");
  const auto hh = dir.require(files::kHoldoutHuman, "fit-refs");
  const auto hl = dir.require(files::kHoldoutLlm, "fit-refs");
  m.input(mp);
  m.input(hh);
  m.input(hl);
  const auto model = mixdetect::load_reference_model(mp.string());
  const auto h = texts_of(corpus::read_reference_jsonl(hh.string()));
  const auto l = texts_of(corpus::read_reference_jsonl(hl.string()));
  mixdetect::CalibrationOptions co;
  co.docs_per_bin = c.docs_per_bin;
  co.seed = seed;
  const auto rows = mixdetect::calibration_curve(model.human, model.llm, h, l, c.alphas, co);
  std::ostringstream out;
  out << "true_alpha,mean_alpha_hat,ci_lo,ci_hi,sd,n_docs\n";
  for (const auto& r : rows)
    out << num(r.true_alpha) << ',' << num(r.mean_alpha_hat) << ',' << num(r.ci_lo) << ',' << num(r.ci_hi) << ','
        << num(r.sd) << ',' << r.n_docs << '\n';
  m.write(files::kCalibration, out.str());
  m.commit();
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.mean_alpha_hat - r.true_alpha));
  log(fmt::format("calibrate: {} bins, max |mean alpha_hat - alpha| = {:.4f}", rows.size(), worst));
}

// ------------------------------------------------------------------ simulation

void cmd_simulate(const RunConfig& c) {
  const auto seed = c.require_seed("simulate");
  RunDir dir(c.run_dir);
  Manifest m(dir, "simulate", c);
  auto spec = simlab::preset(c.preset);
  spec.seed = seed;
  spec.with_text = c.with_text;
  spec.era = era_of(c);
  for (auto& cell : spec.cells) {
    cell.n_higher = std::max<std::size_t>(1, std::size_t(std::llround(double(cell.n_higher) * c.scale)));
    cell.n_lower = std::max<std::size_t>(1, std::size_t(std::llround(double(cell.n_lower) * c.scale)));
  }
  const auto sim = simlab::simulate(spec);
  std::ostringstream jsonl;
  corpus::write_jsonl(jsonl, sim.records);
  m.write(files::kCorpus, jsonl.str());
  simlab::write_truth_csv(dir.path(files::kTruth).string(), sim.truth);
  m.wrote(files::kTruth);
  m.note("preset", c.preset);
  m.note("rows", sim.records.size());
  m.commit();
  log(fmt::format("simulate: preset {}, {} rows{}", c.preset, sim.records.size(), c.with_text ? " with text" : ""));
}

// ------------------------------------------------------------------ analyses

namespace {

struct AnalysisOutput {
  ordered_json json;
  std::string text;
};

AnalysisOutput run_analysis(const RunConfig& c, const RunDir& dir, Loaded& L, const std::string& name) {
  const auto did_covs = econo::covariate_set(c.did_covariates);
  const auto post_covs = econo::covariate_set(c.post_covariates);
  const auto& d = L.data;
  if (name == "descriptives") {
    const auto th = thresholds_for(c, dir, d, L.inputs);
    const auto r = econo::descriptives(d, th);
    return {econo::to_json(r), econo::table_descriptives(r).render() + "\n" + econo::table_usage(r).render()};
  }
  if (name == "did") {
    const auto r = econo::did(d, did_covs);
    return {econo::to_json(r), econo::table_did(r).render()};
  }
  if (name == "event-study") {
    const auto r = econo::event_study(d, c.reference_year, did_covs);
    return {econo::to_json(r), econo::table_event_study(r).render()};
  }
  if (name == "placebo") {
    const auto r = econo::placebo_timing(d, c.placebo_cutoffs, did_covs);
    return {econo::to_json(r), econo::table_placebo(r).render()};
  }
  if (name == "covid") {
    const auto r = econo::covid_interaction(d, c.covid_years, did_covs);
    return {econo::to_json(r), econo::table_covid(r).render()};
  }
  if (name == "rolling") {
    const auto r = econo::rolling_window(d, did_covs);
    return {econo::to_json(r), econo::table_rolling(r).render()};
  }
  if (name == "donut") {
    const auto r = econo::donut_hole(d, econo::donut_presets(), did_covs);
    return {econo::to_json(r), econo::table_donut(r).render()};
  }
  if (name == "covstab") {
    const auto r = econo::covariate_stability(d, econo::covariate_presets());
    return {econo::to_json(r), econo::table_covstab(r).render()};
  }
  if (name == "stratified") {
    const auto r = econo::stratified(d, post_covs);
    return {econo::to_json(r), econo::table_stratified(r).render()};
  }
  if (name == "interaction") {
    const auto r = econo::interaction(d, post_covs);
    return {econo::to_json(r), econo::table_interaction(r).render()};
  }
  if (name == "mediation") {
    econo::MediationOptions mo;
    mo.n_sims = c.n_sims;
    mo.treat = c.treat;
    mo.control = c.control;
    mo.seed = c.require_seed("analyze mediation");
    std::vector<std::string> feats = c.mediators;
    if (feats.empty())
      for (auto k : stylometry::feature_keys()) feats.emplace_back(k);
    const auto r = econo::mediation(d, feats, post_covs, mo);
    auto j = econo::to_json(r);
    j["treat"] = mo.treat;
    j["control"] = mo.control;
    return {std::move(j), econo::table_mediation(r).render()};
  }
  throw InputError(fmt::format("unknown analysis '{}'", name));
}

bool needs_features(const std::string& name) { return name == "descriptives" || name == "mediation"; }
bool needs_alpha(const std::string& name) {
  return name == "descriptives" || name == "stratified" || name == "interaction" || name == "mediation";
}

}  // namespace

void cmd_analyze(const RunConfig& c, const std::string& name) {
  std::vector<std::string> names;
  if (name == "all")
    names = c.analyses;
  else
    names = {name};
  bool alpha = false, feats = false;
  for (const auto& n : names) {
    if (std::find(analysis_names().begin(), analysis_names().end(), n) == analysis_names().end())
      throw InputError(fmt::format("unknown analysis '{}'", n));
    alpha = alpha || needs_alpha(n);
    feats = feats || needs_features(n);
    if (n == "mediation") c.require_seed("analyze mediation");
  }
  RunDir dir(c.run_dir);
  Loaded L = load(c, dir, alpha, feats);
  std::vector<std::string> failed;
  for (const auto& n : names) {
    Manifest m(dir, "analyze-" + n, c);
    const auto inputs_before = L.inputs.size();
    AnalysisOutput out;
    try {
      out = run_analysis(c, dir, L, n);
    } catch (const Error& e) {
      if (names.size() == 1) throw;
      log(fmt::format("analyze {}: failed: {}", n, e.what()));
      failed.push_back(n);
      L.inputs.resize(inputs_before);
      continue;
    }
    for (const auto& p : L.inputs) m.input(p);
    L.inputs.resize(inputs_before);
    if (out.json.is_array()) out.json = ordered_json{{"rows", std::move(out.json)}};
    out.json["covariate_scaling"] = scaling_json(L.scaling);
    if (needs_alpha(n)) out.json["alpha_source"] = L.alpha_source;
    m.write("analysis/" + n + ".json", out.json.dump(2) + "\n");
    m.write("analysis/" + n + ".txt", out.text);
    m.commit();
    log(fmt::format("analyze {}: done", n));
  }
  if (!failed.empty()) {
    std::string list;
    for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
    throw Error(fmt::format("{} of {} analyses failed: {}", failed.size(), names.size(), list));
  }
}

// ------------------------------------------------------------------ report

namespace {

struct Summary {
  std::size_t n = 0;
  double mean = 0, se = 0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  s.n = v.size();
  if (v.empty()) return s;
  s.mean = stats::mean(v);
  s.se = v.size() > 1 ? stats::sd(v) / std::sqrt(double(v.size())) : 0.0;
  return s;
}

std::string ci_cells(const Summary& s) {
  return fmt::format("{},{},{},{},{}", s.n, num(s.mean), num(s.se), num(s.mean - stats::kZ95 * s.se),
                     num(s.mean + stats::kZ95 * s.se));
}

}  // namespace

void cmd_report(const RunConfig& c) {
  RunDir dir(c.run_dir);
  Manifest m(dir, "report", c);
  std::string tables;
  ordered_json results;
  for (const auto& n : analysis_names()) {
    const std::string txt = "analysis/" + n + ".txt", js = "analysis/" + n + ".json";
    if (!dir.exists(txt) || !dir.exists(js)) continue;
    m.input(dir.path(txt));
    m.input(dir.path(js));
    tables += read_file(dir.path(txt)) + "\n";
    results[n] = nlohmann::ordered_json::parse(read_file(dir.path(js)));
  }
  if (results.empty())
    throw InputError(fmt::format("no analysis results in '{}'; run `essaylens analyze all` first", dir.root().string()));

  Loaded L = load(c, dir, true, true);
  for (const auto& p : L.inputs) m.input(p);
  const auto& d = L.data;
  const auto years = d.years();
  std::vector<fs::path> th_inputs;
  const auto th = thresholds_for(c, dir, d, th_inputs);
  for (const auto& p : th_inputs) m.input(p);

  m.write("report/tables.txt", tables);
  m.write("report/results.json", results.dump(2) + "\n");

  // Fig. 1: yearly feature means by group.
  std::ostringstream f1;
  f1 << "feature,year,group,n,mean,se,ci_lo,ci_hi\n";
  for (std::size_t k = 0; k < stylometry::FeatureVector::kSize; ++k)
    for (int y : years)
      for (bool lower : {false, true}) {
        std::vector<double> v;
        for (std::size_t i = 0; i < d.records.size(); ++i)
          if (d.records[i].cycle_year == y && d.records[i].fee_waiver == lower && d.features[i])
            v.push_back(d.features[i]->values()[k]);
        if (v.empty()) continue;
        f1 << stylometry::feature_keys()[k] << ',' << y << ',' << group_name(lower) << ',' << ci_cells(summarize(v))
           << '\n';
      }
  m.write("report/fig1_features_by_year.csv", f1.str());

  // Fig. 2: yearly mean alpha_hat by group.
  std::ostringstream f2;
  f2 << "year,group,n,mean_alpha_hat,se,ci_lo,ci_hi\n";
  for (int y : years)
    for (bool lower : {false, true}) {
      std::vector<double> v;
      for (std::size_t i = 0; i < d.records.size(); ++i)
        if (d.records[i].cycle_year == y && d.records[i].fee_waiver == lower && d.alpha_hat[i])
          v.push_back(*d.alpha_hat[i]);
      if (v.empty()) continue;
      f2 << y << ',' << group_name(lower) << ',' << ci_cells(summarize(v)) << '\n';
    }
  m.write("report/fig2_alpha_by_year.csv", f2.str());

  // Fig. 3: post-era usage category shares.
  std::ostringstream f3;
  f3 << "group,category,count,share\n";
  for (bool lower : {false, true}) {
    std::array<std::size_t, 4> counts{};
    std::size_t total = 0;
    for (std::size_t i = 0; i < d.records.size(); ++i)
      if (d.era.is_post(d.records[i].cycle_year) && d.records[i].fee_waiver == lower && d.alpha_hat[i]) {
        ++counts[std::size_t(mixdetect::categorize(*d.alpha_hat[i], th))];
        ++total;
      }
    for (std::size_t k = 0; k < 4; ++k)
      f3 << group_name(lower) << ',' << mixdetect::to_string(mixdetect::UsageCategory(k)) << ',' << counts[k] << ','
         << num(total ? double(counts[k]) / double(total) : 0.0) << '\n';
  }
  m.write("report/fig3_usage_shares.csv", f3.str());

  // Fig. 4: admission rates by era and group.
  std::ostringstream f4;
  f4 << "era,group,n,admit_rate,se,ci_lo,ci_hi\n";
  for (bool post : {false, true})
    for (bool lower : {false, true}) {
      std::vector<double> v;
      for (const auto& r : d.records) {
        const bool in = post ? d.era.is_post(r.cycle_year) : d.era.pre_years.count(r.cycle_year) > 0;
        if (in && r.fee_waiver == lower) v.push_back(corpus::binary_outcome(r) ? 1.0 : 0.0);
      }
      if (v.empty()) continue;
      f4 << (post ? "post" : "pre") << ',' << group_name(lower) << ',' << ci_cells(summarize(v)) << '\n';
    }
  m.write("report/fig4_admit_rates.csv", f4.str());
  m.note("thresholds", {th.low_upper, th.medium_upper});
  m.commit();
  log(fmt::format("report: {} tables, 4 figure files", results.size()));
}

}  // namespace essaylens::cli
