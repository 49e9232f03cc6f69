#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "essaylens/corpus.hpp"
#include "essaylens/mixdetect.hpp"
#include "essaylens/stats.hpp"
#include "essaylens/stylometry.hpp"

// Analysis designs over essay records: difference-in-differences and its
// robustness battery, stratified and interaction logits, mediation.
namespace essaylens::econo {

/// Records plus per-record estimates, aligned by index.
struct AnalysisData {
  std::vector<corpus::EssayRecord> records;
  std::vector<std::optional<double>> alpha_hat;                     ///< empty or records.size()
  std::vector<std::optional<stylometry::FeatureVector>> features;   ///< empty or records.size()
  corpus::EraPartition era = corpus::EraPartition::paper_default();

  /// Records (and estimates) whose cycle year passes the predicate.
  template <class Pred>
  AnalysisData filter(Pred keep) const {
    AnalysisData out;
    out.era = era;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!keep(records[i])) continue;
      out.records.push_back(records[i]);
      if (!alpha_hat.empty()) out.alpha_hat.push_back(alpha_hat[i]);
      if (!features.empty()) out.features.push_back(features[i]);
    }
    return out;
  }
  AnalysisData post_era() const;
  AnalysisData pre_era() const;
  std::set<int> years() const;
};

/// Frame columns: admit, lower_ses, post (missing outside both eras), year
/// (factor), alpha, sex, first_gen, school_type (factors), gpa, sat_rw,
/// sat_math, act_composite, act_math, honors, and every stylometric key.
stats::Frame to_frame(const AnalysisData& data);

/// Factor reference levels used by every model.
stats::ModelSpec with_references(stats::ModelSpec spec);

std::vector<std::string> covariates_none();
/// Sex, first generation, GPA, SAT reading/writing.
std::vector<std::string> covariates_first4();
/// The difference-in-differences control set (no school type).
std::vector<std::string> covariates_did();
/// Post-era control set including school type.
std::vector<std::string> covariates_full();
/// "none", "first4", "did" or "full".
std::vector<std::string> covariate_set(const std::string& name);

inline constexpr const char* kSes = "lower_ses";
inline constexpr const char* kPost = "post";
inline constexpr const char* kAlpha = "alpha";
inline constexpr const char* kAdmit = "admit";

// ---------------------------------------------------------------- DiD

struct DiDResult {
  stats::ModelFit fit;
  stats::CoefRow ses, post, interaction;  ///< beta1, beta2, beta3
};

/// admit ~ lower_ses + post + lower_ses:post + covariates.
DiDResult did(const AnalysisData& data, const std::vector<std::string>& covariates);

struct EventRow {
  int year = 0;
  bool reference = false;
  bool pre_treatment = false;
  stats::CoefRow coef;  ///< zero for the reference year
};

struct EventStudyResult {
  stats::ModelFit fit;
  int reference_year = 0;
  std::vector<EventRow> rows;
  stats::TestResult joint_pre;  ///< Wald test of the non-reference pre-era interactions
  std::size_t joint_terms = 0;
};

/// admit ~ lower_ses + year + lower_ses:year + covariates, reference year
/// omitted.
EventStudyResult event_study(const AnalysisData& data, int reference_year, const std::vector<std::string>& covariates);

struct PlaceboRow {
  int cutoff = 0;
  stats::CoefRow coef;
  std::size_t n = 0;
  bool significant = false;  ///< p < 0.05
};

/// One DiD per fake cutoff on the pre era: fake post = year >= cutoff.
std::vector<PlaceboRow> placebo_timing(const AnalysisData& data, const std::vector<int>& cutoffs,
                                       const std::vector<std::string>& covariates);

struct CovidRow {
  std::string specification;
  stats::CoefRow did;
  std::optional<stats::CoefRow> covid_x_ses;
  std::size_t n = 0;
};

std::vector<CovidRow> covid_interaction(const AnalysisData& data, const std::set<int>& covid_years,
                                        const std::vector<std::string>& covariates);

struct RollingRow {
  int from = 0, to = 0;
  stats::CoefRow coef;
  std::size_t n = 0;
};

/// DiD on every consecutive pair of cycle years, later year as post.
std::vector<RollingRow> rolling_window(const AnalysisData& data, const std::vector<std::string>& covariates);

struct DonutSpec {
  std::string label;
  std::set<int> exclude;
};

/// Full sample, drop 2020, drop 2020-2021, drop 2021-2022, drop 2020-2022,
/// clean ends 2020 vs 2024.
std::vector<DonutSpec> donut_presets();

struct DonutRow {
  std::string label;
  stats::CoefRow coef;
  std::size_t n = 0;
  std::string cycles;  ///< e.g. "2020, 2023-2024"
};

std::vector<DonutRow> donut_hole(const AnalysisData& data, const std::vector<DonutSpec>& specs,
                                 const std::vector<std::string>& covariates);

struct CovariateSpec {
  std::string label;
  std::vector<std::string> covariates;
};

/// No controls, first four confounders, all confounders.
std::vector<CovariateSpec> covariate_presets();

struct CovstabRow {
  std::string label;
  stats::CoefRow coef;
  double pseudo_r2 = 0;
  std::size_t n = 0;
};

struct CovstabResult {
  std::vector<CovstabRow> rows;
  double range = 0;  ///< max - min of the interaction coefficient
};

CovstabResult covariate_stability(const AnalysisData& data, const std::vector<CovariateSpec>& specs);

/// Formats a set of years as runs: {2020, 2023, 2024} -> "2020, 2023-2024".
std::string format_years(const std::set<int>& years);

// ---------------------------------------------------------------- post era

struct StratifiedResult {
  stats::ModelFit higher, lower;
  double delta = 0;     ///< lower alpha coefficient minus higher
  double delta_se = 0;  ///< sqrt(se_h^2 + se_l^2), independent samples
};

/// admit ~ alpha + covariates, separately by SES, post era only.
StratifiedResult stratified(const AnalysisData& data, const std::vector<std::string>& covariates);

struct InteractionResult {
  stats::ModelFit fit;
  stats::CoefRow ses, beta2, beta3;
  stats::LinearCombination total;  ///< beta2 + beta3, delta-method SE
};

/// admit ~ lower_ses + alpha + lower_ses:alpha + covariates, post era only.
InteractionResult interaction(const AnalysisData& data, const std::vector<std::string>& covariates);

/// 1 - exp(alpha_level * beta): predicted reduction in admission odds.
double odds_reduction(double beta, double alpha_level);

enum class OutcomeFamily { Logit, Linear };

struct MediationOptions {
  std::size_t n_sims = 1000;
  double treat = 0.13;
  double control = 0.0;
  std::uint64_t seed = 0;
  OutcomeFamily family = OutcomeFamily::Logit;
};

struct MediationSpec {
  std::string outcome;
  std::string treatment;
  std::string mediator;
  std::vector<std::string> covariates;
};

struct Effect {
  double estimate = 0;
  double ci_lo = 0, ci_hi = 0;  ///< 2.5% and 97.5% simulation quantiles
  double p_value = 1;           ///< 2 min(P(>0), P(<0)) over draws
};

struct MediationResult {
  std::string feature;
  Effect acme, ade, total;
  double prop_mediated = 0;  ///< acme / (acme + ade)
  std::size_t n_sims = 0;
  std::size_t n = 0;
  double a_path = 0;  ///< mediator-model treatment coefficient
  double b_path = 0;  ///< outcome-model mediator coefficient
};

/// Quasi-Bayesian mediation: mediator by OLS, outcome by logit (or OLS),
/// parameters redrawn from their asymptotic normal n_sims times.
MediationResult mediate(const stats::Frame& frame, const MediationSpec& spec, const MediationOptions& opts);

struct ChangeInCoefficient {
  double beta3_base = 0;
  double beta3_augmented = 0;
  double pct_attenuation = 0;  ///< 100 (|b| - |b_aug|) / |b|
};

struct MediationReport {
  std::vector<MediationResult> features;
  ChangeInCoefficient change;
};

/// Per-feature mediation of alpha on admission (post era) plus the
/// change-in-coefficient comparison with all features added to the
/// interaction model.
MediationReport mediation(const AnalysisData& data, const std::vector<std::string>& features,
                          const std::vector<std::string>& covariates, const MediationOptions& opts);

ChangeInCoefficient change_in_coefficient(const AnalysisData& data, const std::vector<std::string>& covariates);

// ---------------------------------------------------------------- descriptives

struct UsageShares {
  std::array<std::size_t, 4> higher{}, lower{};  ///< None, Low, Medium, High
};

struct DescriptivesResult {
  stats::DescriptiveTable features;  ///< post era, alpha_hat > 0, higher vs lower SES
  stats::TestResult alpha_t;         ///< lower minus higher, all post-era records
  double alpha_mean_higher = 0, alpha_sd_higher = 0, alpha_mean_lower = 0, alpha_sd_lower = 0;
  UsageShares usage;
  stats::TestResult usage_chi2;
  mixdetect::UsageThresholds thresholds;
};

DescriptivesResult descriptives(const AnalysisData& data, const mixdetect::UsageThresholds& thresholds);

}  // namespace essaylens::econo
