#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "essaylens/mixdetect.hpp"

namespace essaylens::cli {

/// Everything a command may read from the config file. Defaults reproduce
/// the standard analysis; every field can also be set by a flag.
struct RunConfig {
  std::string run_dir = "run";

  // paths
  std::string input;   ///< ingest / features source
  std::string schema;  ///< column mapping for ingest
  std::string human_refs;
  std::string llm_refs;

  // era and ingest
  std::set<int> pre_years{2020, 2021, 2022, 2023};
  std::set<int> post_years{2024};
  std::size_t min_words = 250;
  int min_year = 2000;
  int max_year = 2100;

  // detector
  double lambda = 0.5;
  std::size_t min_count = 5;
  double tol = 1e-6;
  std::size_t max_iter = 200;
  std::optional<mixdetect::UsageThresholds> thresholds;  ///< nullopt = auto-tercile

  // reference generation
  std::size_t n_llm_refs = 2000;
  std::size_t n_human_refs = 2000;
  bool offline = true;
  std::string base_url;
  std::string model = "gpt-4o";
  std::string api_key_env = "ESSAYLENS_API_KEY";
  std::size_t concurrency = 4;
  double holdout = 0.2;

  // calibration
  std::size_t docs_per_bin = 100;
  std::vector<double> alphas{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

  // simulation
  std::string preset = "paper-shaped";
  double scale = 1.0;
  bool with_text = true;

  // analyses
  std::string did_covariates = "did";
  std::string post_covariates = "full";
  int reference_year = 2023;
  std::vector<int> placebo_cutoffs{2021, 2022, 2023};
  std::set<int> covid_years{2020, 2021};
  std::size_t n_sims = 1000;
  double treat = 0.13;
  double control = 0.0;
  std::vector<std::string> mediators;  ///< empty = all eleven features
  std::vector<std::string> analyses{"descriptives", "did",        "event-study", "placebo",
                                    "covid",        "rolling",    "donut",       "covstab",
                                    "stratified",   "interaction", "mediation"};

  std::size_t threads = 0;  ///< 0 = hardware concurrency
  std::optional<std::uint64_t> seed;

  /// Throws InputError naming the first unknown key or bad value.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void validate() const;
  /// SHA-256 of the canonical JSON form, ignoring run_dir and threads so
  /// that two run directories with the same settings hash alike.
  std::string hash() const;
  std::uint64_t require_seed(const std::string& command) const;
};

const std::vector<std::string>& analysis_names();

}  // namespace essaylens::cli
