#include "config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "essaylens/digest.hpp"
#include "essaylens/econo.hpp"
#include "essaylens/error.hpp"
#include "essaylens/simlab.hpp"
#include "essaylens/stylometry.hpp"

namespace essaylens::cli {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> v{"descriptives", "did",     "event-study", "placebo",    "covid",      "rolling",
                                          "donut",        "covstab", "stratified",  "interaction", "mediation"};
  return v;
}

namespace {

// Walks one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InputError(fmt::format("config: '{}' must be an object", where()));
    for (const auto& [k, v] : j_.items()) unread_.insert(k);
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    unread_.erase(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw InputError(fmt::format("config: '{}' has the wrong type", where(key)));
    }
  }

  std::optional<Section> child(const char* key) {
    if (!j_.contains(key)) return std::nullopt;
    unread_.erase(key);
    return Section(j_.at(key), where(key));
  }

  const json* raw(const char* key) {
    if (!j_.contains(key)) return nullptr;
    unread_.erase(key);
    return &j_.at(key);
  }

  void finish() const {
    if (!unread_.empty()) throw InputError(fmt::format("config: unknown key '{}'", where(*unread_.begin())));
  }

  std::string where(std::string_view key = {}) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> unread_;
};

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  root.get("run_dir", c.run_dir);
  if (auto s = root.child("paths")) {
    s->get("input", c.input);
    s->get("schema", c.schema);
    s->get("human_refs", c.human_refs);
    s->get("llm_refs", c.llm_refs);
    s->finish();
  }
  if (auto s = root.child("era")) {
    s->get("pre", c.pre_years);
    s->get("post", c.post_years);
    s->finish();
  }
  if (auto s = root.child("ingest")) {
    s->get("min_words", c.min_words);
    s->get("min_year", c.min_year);
    s->get("max_year", c.max_year);
    s->finish();
  }
  if (auto s = root.child("detector")) {
    s->get("lambda", c.lambda);
    s->get("min_count", c.min_count);
    s->get("tol", c.tol);
    s->get("max_iter", c.max_iter);
    if (const json* t = s->raw("thresholds")) {
      if (t->is_string() && t->get<std::string>() == "auto-tercile") {
        c.thresholds.reset();
      } else if (t->is_array() && t->size() == 2 && (*t)[0].is_number() && (*t)[1].is_number()) {
        c.thresholds = mixdetect::UsageThresholds{(*t)[0].get<double>(), (*t)[1].get<double>()};
      } else {
        throw InputError("config: 'detector.thresholds' must be \"auto-tercile\" or [low_upper, medium_upper]");
      }
    }
    s->finish();
  }
  if (auto s = root.child("refgen")) {
    s->get("n_llm", c.n_llm_refs);
    s->get("n_human", c.n_human_refs);
    s->get("offline", c.offline);
    s->get("base_url", c.base_url);
    s->get("model", c.model);
    s->get("api_key_env", c.api_key_env);
    s->get("concurrency", c.concurrency);
    s->get("holdout", c.holdout);
    s->finish();
  }
  if (auto s = root.child("calibrate")) {
    s->get("docs_per_bin", c.docs_per_bin);
    s->get("alphas", c.alphas);
    s->finish();
  }
  if (auto s = root.child("simulate")) {
    s->get("preset", c.preset);
    s->get("scale", c.scale);
    s->get("with_text", c.with_text);
    s->finish();
  }
  if (auto s = root.child("analysis")) {
    s->get("did_covariates", c.did_covariates);
    s->get("post_covariates", c.post_covariates);
    s->get("reference_year", c.reference_year);
    s->get("placebo_cutoffs", c.placebo_cutoffs);
    s->get("covid_years", c.covid_years);
    s->get("enabled", c.analyses);
    if (auto m = s->child("mediation")) {
      m->get("n_sims", c.n_sims);
      m->get("treat", c.treat);
      m->get("control", c.control);
      m->get("mediators", c.mediators);
      m->finish();
    }
    s->finish();
  }
  root.get("threads", c.threads);
  if (const json* s = root.raw("seed")) {
    if (!s->is_number_unsigned()) throw InputError("config: 'seed' must be a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  root.finish();
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config file '{}'", path));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("config file '{}' is not valid JSON: {}", path, e.what()));
  }
  return from_json(j);
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["run_dir"] = run_dir;
  j["paths"] = {{"input", input}, {"schema", schema}, {"human_refs", human_refs}, {"llm_refs", llm_refs}};
  j["era"] = {{"pre", pre_years}, {"post", post_years}};
  j["ingest"] = {{"min_words", min_words}, {"min_year", min_year}, {"max_year", max_year}};
  j["detector"] = {{"lambda", lambda}, {"min_count", min_count}, {"tol", tol}, {"max_iter", max_iter}};
  if (thresholds)
    j["detector"]["thresholds"] = {thresholds->low_upper, thresholds->medium_upper};
  else
    j["detector"]["thresholds"] = "auto-tercile";
  j["refgen"] = {{"n_llm", n_llm_refs}, {"n_human", n_human_refs}, {"offline", offline},
                 {"base_url", base_url}, {"model", model},      {"api_key_env", api_key_env},
                 {"concurrency", concurrency}, {"holdout", holdout}};
  j["calibrate"] = {{"docs_per_bin", docs_per_bin}, {"alphas", alphas}};
  j["simulate"] = {{"preset", preset}, {"scale", scale}, {"with_text", with_text}};
  j["analysis"] = {{"did_covariates", did_covariates},
                   {"post_covariates", post_covariates},
                   {"reference_year", reference_year},
                   {"placebo_cutoffs", placebo_cutoffs},
                   {"covid_years", covid_years},
                   {"enabled", analyses},
                   {"mediation", {{"n_sims", n_sims}, {"treat", treat}, {"control", control}, {"mediators", mediators}}}};
  j["threads"] = threads;
  if (seed) j["seed"] = *seed;
  return j;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw InputError("config: " + m); };
  if (run_dir.empty()) fail("run_dir is empty");
  corpus::EraPartition{pre_years, post_years, ""}.validate();
  if (min_year > max_year) fail("ingest.min_year is after ingest.max_year");
  if (!(lambda > 0)) fail("detector.lambda must be positive");
  if (!(tol > 0)) fail("detector.tol must be positive");
  if (max_iter == 0) fail("detector.max_iter must be positive");
  if (thresholds) thresholds->validate();
  if (concurrency == 0) fail("refgen.concurrency must be positive");
  if (!(holdout > 0 && holdout < 1)) fail("refgen.holdout must lie in (0, 1)");
  if (docs_per_bin == 0) fail("calibrate.docs_per_bin must be positive");
  if (alphas.empty()) fail("calibrate.alphas is empty");
  for (double a : alphas)
    if (!(a >= 0 && a <= 1)) fail(fmt::format("calibrate.alphas value {} outside [0, 1]", a));
  if (!(scale > 0)) fail("simulate.scale must be positive");
  bool known = false;
  for (const auto& s : simlab::scenario_presets()) known = known || s.name == preset;
  if (!known) fail(fmt::format("unknown simulate.preset '{}'", preset));
  econo::covariate_set(did_covariates);
  econo::covariate_set(post_covariates);
  if (n_sims < 2) fail("analysis.mediation.n_sims must be at least 2");
  if (treat == control) fail("analysis.mediation.treat equals control");
  for (const auto& m : mediators) stylometry::feature_index(m);
  for (const auto& a : analyses)
    if (std::find(analysis_names().begin(), analysis_names().end(), a) == analysis_names().end())
      fail(fmt::format("unknown analysis '{}'", a));
}

std::string RunConfig::hash() const {
  auto j = to_json();
  j.erase("run_dir");
  j.erase("threads");
  return sha256_hex(j.dump());
}

std::uint64_t RunConfig::require_seed(const std::string& command) const {
  if (!seed) throw InputError(fmt::format("'{}' is stochastic: pass --seed or set 'seed' in the config", command));
  return *seed;
}

}  // namespace essaylens::cli
