#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "config.hpp"
#include "essaylens/error.hpp"
#include "rundir.hpp"

using namespace essaylens;
using namespace essaylens::cli;

namespace {

// Flags are collected into holders and copied onto the config only when
// given, so the config file supplies everything else.
class Overrides {
 public:
  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& desc) {
    auto holder = std::make_shared<T>();
    auto* opt = app->add_option(name, *holder, desc);
    apply_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count()) c.*field = *holder;
    });
    return opt;
  }

  CLI::Option* years(CLI::App* app, const std::string& name, std::set<int> RunConfig::*field, const std::string& desc) {
    auto holder = std::make_shared<std::vector<int>>();
    auto* opt = app->add_option(name, *holder, desc)->delimiter(',');
    apply_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count()) c.*field = std::set<int>(holder->begin(), holder->end());
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool RunConfig::*field, const std::string& desc) {
    auto holder = std::make_shared<bool>(false);
    auto* opt = app->add_flag(name, *holder, desc);
    apply_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count()) c.*field = *holder;
    });
    return opt;
  }

  void custom(std::function<void(RunConfig&)> f) { apply_.push_back(std::move(f)); }

  void apply(RunConfig& c) const {
    for (const auto& f : apply_) f(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> apply_;
};

void detector_options(CLI::App* app, Overrides& ov) {
  ov.option(app, "--lambda", &RunConfig::lambda, "add-lambda smoothing");
  ov.option(app, "--min-count", &RunConfig::min_count, "vocabulary minimum count");
  ov.option(app, "--tol", &RunConfig::tol, "optimizer tolerance on alpha");
  ov.option(app, "--max-iter", &RunConfig::max_iter, "optimizer iteration cap");
}

void threshold_option(CLI::App* app, Overrides& ov) {
  auto holder = std::make_shared<std::string>();
  auto* opt = app->add_option("--thresholds", *holder, "usage thresholds: auto-tercile or LOW,MEDIUM");
  ov.custom([opt, holder](RunConfig& c) {
    if (!opt->count()) return;
    if (*holder == "auto-tercile") {
      c.thresholds.reset();
      return;
    }
    const auto comma = holder->find(',');
    if (comma == std::string::npos) throw InputError("--thresholds expects auto-tercile or LOW,MEDIUM");
    try {
      c.thresholds = mixdetect::UsageThresholds{std::stod(holder->substr(0, comma)), std::stod(holder->substr(comma + 1))};
    } catch (const std::exception&) {
      throw InputError(fmt::format("--thresholds: cannot parse '{}'", *holder));
    }
  });
}

void era_options(CLI::App* app, Overrides& ov) {
  ov.years(app, "--pre-years", &RunConfig::pre_years, "pre-era cycle years, comma separated");
  ov.years(app, "--post-years", &RunConfig::post_years, "post-era cycle years, comma separated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"essaylens: LLM-usage estimation, stylometry and admission-outcome analyses over essay corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Overrides ov;
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  ov.option(&app, "--run-dir", &RunConfig::run_dir, "run directory holding every artifact");
  auto seed_holder = std::make_shared<std::uint64_t>();
  auto* seed_opt = app.add_option("--seed", *seed_holder, "seed for stochastic commands");
  ov.custom([seed_opt, seed_holder](RunConfig& c) {
    if (seed_opt->count()) c.seed = *seed_holder;
  });
  ov.option(&app, "--threads", &RunConfig::threads, "worker threads (0 = all cores)");

  auto* ingest = app.add_subcommand("ingest", "validate a CSV/JSONL corpus into corpus.jsonl");
  ov.option(ingest, "--input", &RunConfig::input, "CSV or JSONL file");
  ov.option(ingest, "--schema", &RunConfig::schema, "JSON column mapping");
  ov.option(ingest, "--min-words", &RunConfig::min_words, "minimum essay length in words");
  ov.option(ingest, "--min-year", &RunConfig::min_year, "earliest accepted cycle year");
  ov.option(ingest, "--max-year", &RunConfig::max_year, "latest accepted cycle year");
  era_options(ingest, ov);

  auto* features = app.add_subcommand("features", "stylometric features per essay into features.csv");
  ov.option(features, "--input", &RunConfig::input, "JSONL corpus (default: corpus.jsonl in the run dir)");

  auto* gen = app.add_subcommand("gen-refs", "generate the LLM and human reference corpora");
  ov.option(gen, "--n-llm", &RunConfig::n_llm_refs, "LLM essays to generate");
  ov.option(gen, "--n-human", &RunConfig::n_human_refs, "human-pool essays to generate");
  auto online_holder = std::make_shared<bool>(false);
  auto* online = gen->add_flag("--online,!--offline", *online_holder, "use the chat-completion endpoint");
  ov.custom([online, online_holder](RunConfig& c) {
    if (online->count()) c.offline = !*online_holder;
  });
  ov.option(gen, "--base-url", &RunConfig::base_url, "endpoint base URL");
  ov.option(gen, "--model", &RunConfig::model, "model name sent to the endpoint");
  ov.option(gen, "--api-key-env", &RunConfig::api_key_env, "environment variable holding the API key");
  ov.option(gen, "--concurrency", &RunConfig::concurrency, "concurrent requests");

  auto* fit = app.add_subcommand("fit-refs", "fit the human and LLM token distributions");
  ov.option(fit, "--human", &RunConfig::human_refs, "human reference JSONL");
  ov.option(fit, "--llm", &RunConfig::llm_refs, "LLM reference JSONL");
  ov.option(fit, "--holdout", &RunConfig::holdout, "fraction held out for calibration");
  detector_options(fit, ov);

  auto* score = app.add_subcommand("score", "estimate alpha_hat per essay into scores.csv");
  ov.option(score, "--input", &RunConfig::input, "JSONL corpus (default: corpus.jsonl in the run dir)");
  detector_options(score, ov);
  threshold_option(score, ov);
  era_options(score, ov);

  auto* cal = app.add_subcommand("calibrate", "calibration curve on the holdouts into calibration.csv");
  ov.option(cal, "--docs-per-bin", &RunConfig::docs_per_bin, "spliced documents per alpha value");
  ov.option(cal, "--alphas", &RunConfig::alphas, "true alpha grid")->delimiter(',');

  auto* sim = app.add_subcommand("simulate", "synthetic applicant corpus with planted effects");
  ov.option(sim, "--preset", &RunConfig::preset, "null, did-shaped or paper-shaped");
  ov.option(sim, "--scale", &RunConfig::scale, "multiplier on the full-scale cell sizes");
  ov.flag(sim, "--with-text,!--no-text", &RunConfig::with_text, "splice essay text at the true alpha");
  era_options(sim, ov);

  auto* analyze = app.add_subcommand("analyze", "run one analysis (or all) into analysis/");
  analyze->require_subcommand(1);
  std::string analysis_name;
  std::vector<std::string> analyses = analysis_names();
  analyses.push_back("all");
  for (const auto& n : analyses) {
    auto* sub = analyze->add_subcommand(n, n == "all" ? "every analysis listed in analysis.enabled" : "analysis: " + n);
    sub->callback([&analysis_name, n] { analysis_name = n; });
    ov.option(sub, "--did-covariates", &RunConfig::did_covariates, "none, first4, did or full");
    ov.option(sub, "--post-covariates", &RunConfig::post_covariates, "none, first4, did or full");
    era_options(sub, ov);
    if (n == "event-study" || n == "all")
      ov.option(sub, "--reference-year", &RunConfig::reference_year, "omitted interaction year");
    if (n == "placebo" || n == "all")
      ov.option(sub, "--cutoffs", &RunConfig::placebo_cutoffs, "fake treatment years")->delimiter(',');
    if (n == "covid" || n == "all") ov.years(sub, "--covid-years", &RunConfig::covid_years, "COVID-era years");
    if (n == "mediation" || n == "all") {
      ov.option(sub, "--n-sims", &RunConfig::n_sims, "quasi-Bayesian draws");
      ov.option(sub, "--treat", &RunConfig::treat, "treatment level of alpha");
      ov.option(sub, "--control", &RunConfig::control, "control level of alpha");
      ov.option(sub, "--mediators", &RunConfig::mediators, "feature keys")->delimiter(',');
    }
    if (n == "descriptives" || n == "all") threshold_option(sub, ov);
  }

  auto* report = app.add_subcommand("report", "tables and figure CSVs into report/");
  threshold_option(report, ov);
  era_options(report, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
    ov.apply(cfg);
    cfg.validate();

    if (*ingest) cmd_ingest(cfg);
    else if (*features) cmd_features(cfg);
    else if (*gen) cmd_gen_refs(cfg);
    else if (*fit) cmd_fit_refs(cfg);
    else if (*score) cmd_score(cfg);
    else if (*cal) cmd_calibrate(cfg);
    else if (*sim) cmd_simulate(cfg);
    else if (*analyze) cmd_analyze(cfg, analysis_name);
    else if (*report) cmd_report(cfg);
  } catch (const NetworkError& e) {
    fmt::print(stderr, "network error: {}\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return 4;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "unexpected error: {}\n", e.what());
    return 1;
  }
  return 0;
}
