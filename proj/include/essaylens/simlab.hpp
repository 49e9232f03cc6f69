#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "essaylens/corpus.hpp"

// Synthetic applicant populations with planted effects, used as ground truth
// for every estimator downstream.
namespace essaylens::simlab {

struct YearCell {
  int year = 0;
  std::size_t n_higher = 0;  ///< no fee waiver
  std::size_t n_lower = 0;   ///< fee waiver
};

/// Covariate generator for one SES group. Continuous covariates are drawn on
/// the standardized scale; the four test scores share one correlation.
struct CovariateModel {
  double p_male = 0.5;
  double p_multigen = 0.7;
  double p_honors = 0.35;
  std::vector<double> school_probs{0.02, 0.25, 0.70, 0.03};  ///< Home, Private, Public, Unknown
  double gpa_mean = 0, gpa_sd = 1;
  double test_mean = 0, test_sd = 1;
  double test_correlation = 0.7;
  double p_missing_tests = 0;  ///< all four scores missing together
};

/// True alpha: zero with probability zero_prob, else scale * Beta(a, b).
struct AlphaModel {
  double zero_prob = 1.0;
  double beta_a = 1.0, beta_b = 1.0;
  double scale = 0.6;
};

/// Logit of admission. Coefficients on the treatment structure plus one
/// coefficient per covariate column.
struct OutcomeModel {
  double intercept = -1.3;
  double ses = 0;        ///< lower SES
  double post = 0;
  double ses_post = 0;   ///< difference-in-differences
  double alpha = 0;      ///< higher-SES alpha slope
  double ses_alpha = 0;  ///< lower SES x alpha
  double male = 0, multigen = 0;
  double school_private = 0, school_public = 0, school_unknown = 0;
  double gpa = 0, sat_rw = 0, sat_math = 0, act_composite = 0, act_math = 0, honors = 0;
  std::map<int, double> year_effects;      ///< added for every applicant of that year
  std::map<int, double> ses_year_effects;  ///< added for lower-SES applicants of that year
};

struct ScenarioSpec {
  std::string name;
  std::vector<YearCell> cells;
  corpus::EraPartition era = corpus::EraPartition::paper_default();
  CovariateModel covariates_higher, covariates_lower;
  AlphaModel alpha_higher, alpha_lower;  ///< post era; the pre era is always 0
  OutcomeModel outcome;
  bool with_text = false;  ///< splice essay text at the true alpha
  std::uint64_t seed = 0;

  /// Throws InputError on probabilities outside [0, 1], bad Beta parameters,
  /// unknown years or empty cells.
  void validate() const;
  std::size_t size() const;
};

struct TruthRow {
  std::string id;
  double true_alpha = 0;
  double linear_predictor = 0;
  double admit_probability = 0;
};

struct Simulation {
  std::vector<corpus::EssayRecord> records;
  std::vector<TruthRow> truth;  ///< same order as records
};

/// Rows are drawn from per-row substreams keyed by the row index, so the
/// output depends only on the scenario spec and seed.
Simulation simulate(const ScenarioSpec& spec);

/// Paper-scale yearly cells (2020-2024) with the post-era lower-SES share.
std::vector<YearCell> paper_scale_cells();

/// "null", "did-shaped" and "paper-shaped".
std::vector<ScenarioSpec> scenario_presets();
ScenarioSpec preset(const std::string& name);

void write_truth_csv(const std::string& path, const std::vector<TruthRow>& truth);
std::vector<TruthRow> read_truth_csv(const std::string& path);

}  // namespace essaylens::simlab
