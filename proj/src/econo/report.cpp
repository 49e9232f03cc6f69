#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "essaylens/econo_report.hpp"
#include "essaylens/stylometry.hpp"

namespace essaylens::econo {

using nlohmann::ordered_json;

namespace {

const char* kStarNote = "* p < 0.05, ** p < 0.01, *** p < 0.001";

std::string commas(std::size_t n) {
  auto s = std::to_string(n);
  for (int i = int(s.size()) - 3; i > 0; i -= 3) s.insert(std::size_t(i), ",");
  return s;
}

std::string f3(double x) { return fmt::format("{:.3f}", x); }
std::string paren(double x) { return fmt::format("({:.3f})", x); }

std::vector<std::string> coef_cells(std::string label, const stats::CoefRow& r) {
  return {std::move(label), fmt_coef(r.coef, r.p_value), fmt_or(r), f3(r.se), fmt_p(r.p_value)};
}

struct CovLabel {
  const char* coef;
  const char* did_label;
  const char* post_label;
};

const std::vector<CovLabel>& academic_labels() {
  static const std::vector<CovLabel> v{{"gpa", "Cumulative GPA", "Cumulative GPA"},
                                      {"sat_rw", "SAT Reading/Writing", "SAT Reading/Writing"},
                                      {"sat_math", "SAT Math", "SAT Math"},
                                      {"act_composite", "ACT Composite", "ACT Composite Score"},
                                      {"act_math", "ACT Math", "ACT Math Score"},
                                      {"honors", "Leadership/Honors", "Leadership/Honors"}};
  return v;
}

std::string level_label(std::string_view level) {
  if (level == "MultiGen") return "Multi Gen";
  if (level == "FirstGen") return "First Gen";
  return std::string(level);
}

// Dummies of one factor present in the fit, in fit order.
std::vector<std::pair<std::string, std::string>> dummies(const stats::ModelFit& f, std::string_view factor) {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string prefix = std::string(factor) + "[";
  for (const auto& n : f.names)
    if (n.rfind(prefix, 0) == 0 && n.back() == ']' && n.find(':') == std::string::npos)
      out.emplace_back(n, n.substr(prefix.size(), n.size() - prefix.size() - 1));
  return out;
}

void covariate_rows(TextTable& t, const stats::ModelFit& f, bool post_labels) {
  const auto sex = dummies(f, "sex"), fg = dummies(f, "first_gen"), school = dummies(f, "school_type");
  if (!sex.empty() || !fg.empty()) {
    t.section("Demographics");
    if (!sex.empty()) {
      t.label("Sex (Ref: Female)");
      for (const auto& [n, l] : sex) t.data(coef_cells("  " + level_label(l), f.row(n)));
    }
    if (!fg.empty()) {
      t.label("First Generation (Ref: First Gen)");
      for (const auto& [n, l] : fg) t.data(coef_cells("  " + level_label(l), f.row(n)));
    }
  }
  if (!school.empty()) {
    t.section("School Type (Ref: Home)");
    for (const auto& [n, l] : school) t.data(coef_cells("  " + level_label(l), f.row(n)));
  }
  bool any = false;
  for (const auto& c : academic_labels()) any = any || f.has(c.coef);
  if (any) {
    t.section("Academic Performance");
    for (const auto& c : academic_labels())
      if (f.has(c.coef)) t.data(coef_cells(post_labels ? c.post_label : c.did_label, f.row(c.coef)));
  }
}

std::string model_note(const stats::ModelFit& f) {
  return fmt::format("N = {}. Pseudo R2 = {:.3f}.", commas(f.n), f.pseudo_r2);
}

const std::map<std::string, std::string>& mediation_labels() {
  static const std::map<std::string, std::string> m{
      {"n_tokens", "# tokens"},  {"n_words", "# words"}, {"n_types", "# types"},
      {"avg_word_len", "Avg. word length"}, {"avg_sentence_len", "Avg. sentence length"},
      {"complexity", "Complexity"}, {"maas_ttr", "Maas TTR"}, {"ttr", "TTR"}, {"mtld", "MTLD"},
      {"hdd", "HDD"}, {"yules_k", "Yules' k"}};
  return m;
}

}  // namespace

std::string fmt_coef(double coef, double p) { return fmt::format("{:.3f}{}", coef, stats::stars(p)); }

std::string fmt_p(double p) { return p < 0.001 ? "<0.001" : fmt::format("{:.3f}", p); }

std::string fmt_or(const stats::CoefRow& r) {
  return fmt::format("{:.3f} [{:.3f}, {:.3f}]", r.odds_ratio, r.or_lo, r.or_hi);
}

std::string fmt_ci(double lo, double hi) { return fmt::format("[{:.3f}, {:.3f}]", lo, hi); }

TextTable table_descriptives(const DescriptivesResult& r) {
  TextTable t;
  t.id = "table1";
  t.title = "Stylometric features by SES among post-era essays with alpha_hat > 0";
  t.headers = {{"Feature", r.features.group1, r.features.group2, "Difference", "t stat."},
               {"", "Mean (SD)", "Mean (SD)", "(% diff)", ""}};
  for (const auto& row : r.features.rows)
    t.data({row.label, fmt::format("{:.2f} ({:.2f})", row.mean1, row.sd1), fmt::format("{:.2f} ({:.2f})", row.mean2, row.sd2),
            fmt::format("{:.2f} ({:.1f}%){}", row.diff, row.pct_diff, stats::stars(row.p_value)),
            fmt::format("{:.2f}", row.t)});
  t.data({"N", commas(r.features.n1), commas(r.features.n2), "", ""});
  t.notes = {kStarNote, "% diff = difference relative to the first group mean."};
  return t;
}

TextTable table_usage(const DescriptivesResult& r) {
  TextTable t;
  t.id = "usage";
  t.title = "Estimated LLM usage by SES, post era";
  t.headers = {{"Group", "N", "Mean alpha_hat (SD)", "None", "Low", "Medium", "High"}};
  auto add = [&](const char* label, const std::array<std::size_t, 4>& c, double m, double s) {
    const double n = double(c[0] + c[1] + c[2] + c[3]);
    std::vector<std::string> cells{label, commas(c[0] + c[1] + c[2] + c[3]), fmt::format("{:.3f} ({:.3f})", m, s)};
    for (auto k : c) cells.push_back(fmt::format("{:.1f}%", 100 * double(k) / n));
    t.data(std::move(cells));
  };
  add("Higher SES", r.usage.higher, r.alpha_mean_higher, r.alpha_sd_higher);
  add("Lower SES", r.usage.lower, r.alpha_mean_lower, r.alpha_sd_lower);
  t.notes = {fmt::format("t({:.0f}) = {:.2f}, p = {}, Cohen's d = {:.2f} (lower minus higher).", r.alpha_t.df,
                         r.alpha_t.statistic, fmt_p(r.alpha_t.p_value), r.alpha_t.effect_size),
             fmt::format("chi2 = {:.1f}, df = {:.0f}, p = {}.", r.usage_chi2.statistic, r.usage_chi2.df,
                         fmt_p(r.usage_chi2.p_value)),
             fmt::format("Categories: None = 0, Low <= {:.2f}, Medium <= {:.2f}, High above.", r.thresholds.low_upper,
                         r.thresholds.medium_upper)};
  return t;
}

TextTable table_did(const DiDResult& r) {
  TextTable t;
  t.id = "table2";
  t.title = "Difference-in-differences logit of admission";
  t.headers = {{"Variable", "Coef.", "OR [95% CI]", "SE", "P-value"}};
  t.section("DiD Components");
  t.data(coef_cells("Lower SES (beta1)", r.ses));
  t.data(coef_cells("Post-GPT (beta2)", r.post));
  t.data(coef_cells("Lower SES x Post-GPT (beta3)", r.interaction));
  covariate_rows(t, r.fit, false);
  t.notes = {model_note(r.fit), kStarNote, "beta3 is the difference-in-differences estimate."};
  return t;
}

TextTable table_interaction(const InteractionResult& r) {
  TextTable t;
  t.id = "table3";
  t.title = "Post-era logit of admission with SES x alpha_hat interaction";
  t.headers = {{"Variable", "Coefficient", "OR [95% CI]", "SE", "P-value"}};
  t.section("Key Variables");
  t.data(coef_cells("Lower SES", r.ses));
  t.data(coef_cells("alpha_hat (higher SES baseline, beta2)", r.beta2));
  t.data(coef_cells("Lower SES x alpha_hat (Interaction beta3)", r.beta3));
  stats::CoefRow tot;
  tot.coef = r.total.estimate;
  tot.se = r.total.se;
  tot.p_value = r.total.p_value;
  tot.odds_ratio = std::exp(tot.coef);
  tot.or_lo = std::exp(tot.coef - stats::kZ95 * tot.se);
  tot.or_hi = std::exp(tot.coef + stats::kZ95 * tot.se);
  t.data(coef_cells("  Total alpha_hat Association (beta2+beta3)", tot));
  covariate_rows(t, r.fit, true);
  if (r.fit.has(stats::kIntercept)) {
    t.blank();
    t.data(coef_cells("Intercept", r.fit.row(stats::kIntercept)));
  }
  t.notes = {model_note(r.fit), kStarNote, "Total = beta2 + beta3, SE by the delta method."};
  return t;
}

TextTable table_mediation(const MediationReport& r) {
  TextTable t;
  t.id = "table4";
  t.title = "Mediation of the alpha_hat association by stylometric features";
  t.headers = {{"Feature", "ACME", "ADE", "% Mediated"}};
  static const std::vector<std::string> order{"n_tokens", "n_words", "n_types", "avg_word_len", "avg_sentence_len",
                                              "complexity", "maas_ttr", "ttr", "mtld", "hdd", "yules_k"};
  auto rank = [&](const MediationResult& m) {
    return std::size_t(std::find(order.begin(), order.end(), m.feature) - order.begin());
  };
  std::vector<const MediationResult*> rows;
  for (const auto& m : r.features) rows.push_back(&m);
  std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) { return rank(*a) < rank(*b); });
  std::size_t sims = 0;
  for (const auto* mp : rows) {
    const auto& m = *mp;
    const auto it = mediation_labels().find(m.feature);
    t.data({it == mediation_labels().end() ? m.feature : it->second, fmt_coef(m.acme.estimate, m.acme.p_value),
            fmt_coef(m.ade.estimate, m.ade.p_value), fmt::format("{:.1f}%", 100 * m.prop_mediated)});
    sims = m.n_sims;
  }
  t.notes = {fmt::format("Significance from {} quasi-Bayesian simulations. {}", commas(sims), kStarNote),
             fmt::format("Change in coefficient: beta3 {:.3f} -> {:.3f} with all features ({:.1f}% attenuation).",
                         r.change.beta3_base, r.change.beta3_augmented, r.change.pct_attenuation)};
  return t;
}

TextTable table_event_study(const EventStudyResult& r) {
  TextTable t;
  t.id = "tableC1";
  t.title = "Event study: lower SES x cycle year interactions (logit)";
  t.headers = {{"Year", "Coefficient", "Std. Error", "95% CI", "p-value", "Pre-treatment"}};
  for (const auto& row : r.rows) {
    const std::string pre = row.pre_treatment ? "Yes" : "";
    if (row.reference)
      t.data({fmt::format("{} (ref.)", row.year), "0.000", "---", "---", "---", pre});
    else
      t.data({std::to_string(row.year), fmt_coef(row.coef.coef, row.coef.p_value), paren(row.coef.se),
              fmt_ci(row.coef.ci_lo, row.coef.ci_hi), fmt_p(row.coef.p_value), pre});
  }
  t.notes = {fmt::format("Joint Wald test (pre-treatment interactions = 0): chi2 = {:.3f}, df = {}, p = {}",
                         r.joint_pre.statistic, r.joint_terms, fmt_p(r.joint_pre.p_value)),
             kStarNote};
  return t;
}

TextTable table_placebo(const std::vector<PlaceboRow>& rows) {
  TextTable t;
  t.id = "tableC2";
  t.title = "Placebo treatment timing (logit, pre era)";
  t.headers = {{"Fake Treatment Cycle", "Coefficient", "Std. Error", "95% CI", "p-value", "Significant"}};
  for (const auto& r : rows)
    t.data({std::to_string(r.cutoff), fmt_coef(r.coef.coef, r.coef.p_value), paren(r.coef.se),
            fmt_ci(r.coef.ci_lo, r.coef.ci_hi), fmt_p(r.coef.p_value), r.significant ? "Yes" : "No"});
  t.notes = {kStarNote};
  return t;
}

TextTable table_covid(const std::vector<CovidRow>& rows) {
  TextTable t;
  t.id = "tableC3";
  t.title = "COVID-era sensitivity of the DiD estimate (logit)";
  t.headers = {{"Specification", "DiD Coefficient", "Std. Error", "p-value", "COVID x SES"}};
  for (const auto& r : rows)
    t.data({r.specification, fmt_coef(r.did.coef, r.did.p_value), paren(r.did.se), fmt_p(r.did.p_value),
            r.covid_x_ses ? fmt::format("{:.3f} (p = {})", r.covid_x_ses->coef, fmt_p(r.covid_x_ses->p_value)) : ""});
  t.notes = {kStarNote};
  return t;
}

TextTable table_rolling(const std::vector<RollingRow>& rows) {
  TextTable t;
  t.id = "tableC4";
  t.title = "Rolling-window DiD over consecutive cycles (logit)";
  t.headers = {{"Window", "Coefficient", "Std. Error", "p-value", "N"}};
  for (const auto& r : rows)
    t.data({fmt::format("{} -> {}", r.from, r.to), fmt_coef(r.coef.coef, r.coef.p_value), paren(r.coef.se),
            fmt_p(r.coef.p_value), commas(r.n)});
  t.notes = {kStarNote};
  return t;
}

TextTable table_donut(const std::vector<DonutRow>& rows) {
  TextTable t;
  t.id = "tableC5";
  t.title = "Donut-hole DiD: sensitivity to excluded cycles (logit)";
  t.headers = {{"Specification", "Coefficient", "p-value", "N", "Cycles Included"}};
  for (const auto& r : rows)
    t.data({r.label, fmt_coef(r.coef.coef, r.coef.p_value), fmt_p(r.coef.p_value), commas(r.n), r.cycles});
  t.notes = {kStarNote};
  return t;
}

TextTable table_covstab(const CovstabResult& r) {
  TextTable t;
  t.id = "tableC6";
  t.title = "DiD estimate across covariate specifications (logit)";
  t.headers = {{"Specification", "Coefficient", "Std. Error", "95% CI", "p-value", "Pseudo-R2", "N"}};
  for (const auto& row : r.rows)
    t.data({row.label, fmt_coef(row.coef.coef, row.coef.p_value), paren(row.coef.se),
            fmt_ci(row.coef.ci_lo, row.coef.ci_hi), fmt_p(row.coef.p_value), f3(row.pseudo_r2), commas(row.n)});
  t.notes = {fmt::format("Coefficient range across specifications: {:.3f}", r.range), kStarNote};
  return t;
}

TextTable table_stratified(const StratifiedResult& r) {
  TextTable t;
  t.id = "tableD1";
  t.title = "Post-era logit of admission on alpha_hat, by SES";
  t.headers = {{"Variable", "higher SES", "lower SES", "Difference"}, {"", "(No Fee Waiver)", "(Fee Waiver)", "(Delta)"}};
  const auto h = r.higher.row(kAlpha), l = r.lower.row(kAlpha);
  t.section("Key Variables");
  t.label("alpha_hat (LLM Usage)");
  t.data({"  Coefficient", fmt_coef(h.coef, h.p_value), fmt_coef(l.coef, l.p_value), f3(r.delta)});
  t.data({"  Standard Error", paren(h.se), paren(l.se), ""});
  t.data({"  Odds Ratio [95% CI]", fmt_or(h), fmt_or(l), ""});
  t.data({"  P-value", fmt_p(h.p_value), fmt_p(l.p_value), ""});
  const std::vector<std::pair<const char*, const char*>> selected{{"gpa", "Cumulative GPA (scaled)"},
                                                                  {"sat_rw", "SAT Reading/Writing"},
                                                                  {"act_composite", "ACT Composite Score"},
                                                                  {"honors", "Leadership/Honors"}};
  bool any = false;
  for (const auto& [c, lbl] : selected) any = any || (r.higher.has(c) && r.lower.has(c));
  if (any) {
    t.section("Control Variables (Selected)");
    for (const auto& [c, lbl] : selected) {
      if (!r.higher.has(c) || !r.lower.has(c)) continue;
      const auto a = r.higher.row(c), b = r.lower.row(c);
      t.data({lbl, fmt_coef(a.coef, a.p_value), fmt_coef(b.coef, b.p_value), fmt::format("{:+.3f}", b.coef - a.coef)});
      t.data({"", paren(a.se), paren(b.se), ""});
    }
  }
  t.section("Model Statistics");
  t.data({"Observations", commas(r.higher.n), commas(r.lower.n), ""});
  t.data({"Pseudo R2", f3(r.higher.pseudo_r2), f3(r.lower.pseudo_r2), ""});
  t.notes = {"Standard errors in parentheses. " + std::string(kStarNote),
             "Difference = lower SES coefficient minus higher SES coefficient."};
  return t;
}

// ------------------------------------------------------------------ JSON

ordered_json to_json(const stats::CoefRow& r) {
  return {{"name", r.name},       {"coef", r.coef},         {"se", r.se},
          {"stat", r.stat},       {"p_value", r.p_value},   {"stars", stats::stars(r.p_value)},
          {"ci", {r.ci_lo, r.ci_hi}}, {"odds_ratio", r.odds_ratio}, {"or_ci", {r.or_lo, r.or_hi}}};
}

ordered_json to_json(const stats::ModelFit& f) {
  ordered_json j;
  j["family"] = f.family == stats::Family::Logit ? "logit" : "ols";
  j["n"] = f.n;
  j["loglik"] = f.loglik;
  j["null_loglik"] = f.null_loglik;
  j["pseudo_r2"] = f.pseudo_r2;
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["coefficients"] = ordered_json::array();
  for (std::size_t k = 0; k < f.names.size(); ++k) j["coefficients"].push_back(to_json(f.row(k)));
  return j;
}

ordered_json to_json(const stats::TestResult& t) {
  return {{"statistic", t.statistic}, {"df", t.df}, {"p_value", t.p_value}, {"effect_size", t.effect_size}};
}

ordered_json to_json(const DescriptivesResult& r) {
  ordered_json j;
  j["features"] = ordered_json::array();
  for (const auto& row : r.features.rows)
    j["features"].push_back({{"label", row.label}, {"mean1", row.mean1}, {"sd1", row.sd1}, {"mean2", row.mean2},
                             {"sd2", row.sd2}, {"diff", row.diff}, {"pct_diff", row.pct_diff}, {"t", row.t},
                             {"p_value", row.p_value}, {"stars", stats::stars(row.p_value)}});
  j["n_higher_users"] = r.features.n1;
  j["n_lower_users"] = r.features.n2;
  j["alpha"] = {{"mean_higher", r.alpha_mean_higher}, {"sd_higher", r.alpha_sd_higher},
                {"mean_lower", r.alpha_mean_lower},   {"sd_lower", r.alpha_sd_lower},
                {"t_test", to_json(r.alpha_t)}};
  j["usage"] = {{"categories", {"None", "Low", "Medium", "High"}},
                {"higher", r.usage.higher},
                {"lower", r.usage.lower},
                {"thresholds", {r.thresholds.low_upper, r.thresholds.medium_upper}},
                {"chi_square", to_json(r.usage_chi2)}};
  return j;
}

ordered_json to_json(const DiDResult& r) {
  return {{"beta1_ses", to_json(r.ses)}, {"beta2_post", to_json(r.post)}, {"beta3_did", to_json(r.interaction)},
          {"model", to_json(r.fit)}};
}

ordered_json to_json(const InteractionResult& r) {
  return {{"ses", to_json(r.ses)},
          {"beta2", to_json(r.beta2)},
          {"beta3", to_json(r.beta3)},
          {"total",
           {{"estimate", r.total.estimate},
            {"se", r.total.se},
            {"p_value", r.total.p_value},
            {"stars", stats::stars(r.total.p_value)}}},
          {"odds_reduction_at_0.13", {{"higher", odds_reduction(r.beta2.coef, 0.13)}, {"lower", odds_reduction(r.total.estimate, 0.13)}}},
          {"model", to_json(r.fit)}};
}

namespace {
ordered_json effect_json(const Effect& e) {
  return {{"estimate", e.estimate}, {"ci", {e.ci_lo, e.ci_hi}}, {"p_value", e.p_value}, {"stars", stats::stars(e.p_value)}};
}
}  // namespace

ordered_json to_json(const MediationReport& r) {
  ordered_json j;
  j["features"] = ordered_json::array();
  for (const auto& m : r.features)
    j["features"].push_back({{"feature", m.feature},
                             {"acme", effect_json(m.acme)},
                             {"ade", effect_json(m.ade)},
                             {"total", effect_json(m.total)},
                             {"prop_mediated", m.prop_mediated},
                             {"a_path", m.a_path},
                             {"b_path", m.b_path},
                             {"n", m.n},
                             {"n_sims", m.n_sims}});
  j["change_in_coefficient"] = {{"beta3_base", r.change.beta3_base},
                                {"beta3_augmented", r.change.beta3_augmented},
                                {"pct_attenuation", r.change.pct_attenuation}};
  return j;
}

ordered_json to_json(const EventStudyResult& r) {
  ordered_json j;
  j["reference_year"] = r.reference_year;
  j["rows"] = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json x = {{"year", row.year}, {"reference", row.reference}, {"pre_treatment", row.pre_treatment}};
    if (!row.reference) x["coef"] = to_json(row.coef);
    j["rows"].push_back(x);
  }
  j["joint_pre_wald"] = to_json(r.joint_pre);
  j["model"] = to_json(r.fit);
  return j;
}

ordered_json to_json(const std::vector<PlaceboRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& r : rows)
    j.push_back({{"cutoff", r.cutoff}, {"coef", to_json(r.coef)}, {"n", r.n}, {"significant", r.significant}});
  return j;
}

ordered_json to_json(const std::vector<CovidRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json x = {{"specification", r.specification}, {"did", to_json(r.did)}, {"n", r.n}};
    if (r.covid_x_ses) x["covid_x_ses"] = to_json(*r.covid_x_ses);
    j.push_back(x);
  }
  return j;
}

ordered_json to_json(const std::vector<RollingRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& r : rows) j.push_back({{"from", r.from}, {"to", r.to}, {"coef", to_json(r.coef)}, {"n", r.n}});
  return j;
}

ordered_json to_json(const std::vector<DonutRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& r : rows)
    j.push_back({{"specification", r.label}, {"coef", to_json(r.coef)}, {"n", r.n}, {"cycles", r.cycles}});
  return j;
}

ordered_json to_json(const CovstabResult& r) {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"specification", row.label}, {"coef", to_json(row.coef)}, {"pseudo_r2", row.pseudo_r2}, {"n", row.n}});
  j["range"] = r.range;
  return j;
}

ordered_json to_json(const StratifiedResult& r) {
  return {{"higher", to_json(r.higher)}, {"lower", to_json(r.lower)}, {"delta", r.delta}, {"delta_se", r.delta_se}};
}

}  // namespace essaylens::econo
