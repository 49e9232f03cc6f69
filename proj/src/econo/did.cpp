#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "essaylens/econo.hpp"
#include "essaylens/error.hpp"
#include "essaylens/parallel.hpp"

namespace essaylens::econo {

namespace {

const std::string kInteraction = std::string(kSes) + ":" + kPost;

stats::ModelSpec did_spec(const std::vector<std::string>& covariates) {
  stats::ModelSpec s;
  s.outcome = kAdmit;
  s.add(kSes).add(kPost).add_interaction(kSes, kPost);
  for (const auto& c : covariates) s.add(c);
  return with_references(std::move(s));
}

void require_did_cells(const AnalysisData& data) {
  std::size_t cells[2][2] = {{0, 0}, {0, 0}};
  for (const auto& r : data.records) {
    if (!data.era.contains(r.cycle_year)) continue;
    ++cells[data.era.is_post(r.cycle_year)][r.fee_waiver];
  }
  const std::size_t pre = cells[0][0] + cells[0][1], post = cells[1][0] + cells[1][1];
  if (post == 0) throw InputError("DiD: the post-era indicator is constant (no post-era records)");
  if (pre == 0) throw InputError("DiD: the post-era indicator is constant (no pre-era records)");
  if (cells[0][0] + cells[1][0] == 0 || cells[0][1] + cells[1][1] == 0)
    throw InputError("DiD: one SES group is empty");
}

}  // namespace

DiDResult did(const AnalysisData& data, const std::vector<std::string>& covariates) {
  require_did_cells(data);
  DiDResult r;
  r.fit = stats::fit_logit(to_frame(data), did_spec(covariates));
  r.ses = r.fit.row(kSes);
  r.post = r.fit.row(kPost);
  r.interaction = r.fit.row(kInteraction);
  return r;
}

EventStudyResult event_study(const AnalysisData& data, int reference_year, const std::vector<std::string>& covariates) {
  const auto years = data.years();
  if (years.size() < 3) throw InputError(fmt::format("event study needs at least 3 cycle years, got {}", years.size()));
  if (!years.count(reference_year))
    throw InputError(fmt::format("event study: reference year {} is absent from the data", reference_year));
  stats::ModelSpec s;
  s.outcome = kAdmit;
  s.add(kSes).add("year").add_interaction(kSes, "year");
  for (const auto& c : covariates) s.add(c);
  s = with_references(std::move(s));
  s.reference("year", std::to_string(reference_year));

  EventStudyResult r;
  r.reference_year = reference_year;
  r.fit = stats::fit_logit(to_frame(data), s);
  std::vector<std::string> pre_terms;
  for (int y : years) {
    EventRow row;
    row.year = y;
    row.reference = y == reference_year;
    row.pre_treatment = !data.era.is_post(y);
    if (row.reference) {
      row.coef.name = fmt::format("{}:{}", kSes, stats::dummy_name("year", std::to_string(y)));
    } else {
      row.coef = r.fit.row(fmt::format("{}:{}", kSes, stats::dummy_name("year", std::to_string(y))));
      if (row.pre_treatment) pre_terms.push_back(row.coef.name);
    }
    r.rows.push_back(row);
  }
  r.joint_terms = pre_terms.size();
  if (!pre_terms.empty()) r.joint_pre = stats::wald_joint(r.fit, pre_terms);
  return r;
}

std::vector<PlaceboRow> placebo_timing(const AnalysisData& data, const std::vector<int>& cutoffs,
                                       const std::vector<std::string>& covariates) {
  const auto pre = data.pre_era();
  const auto years = pre.years();
  if (years.empty()) throw InputError("placebo: no pre-era records");
  for (int c : cutoffs) {
    if (!data.era.pre_years.count(c)) throw InputError(fmt::format("placebo cutoff {} is not a pre-era year", c));
    if (c <= *years.begin()) throw InputError(fmt::format("placebo cutoff {} leaves an empty pre side", c));
    if (c > *years.rbegin()) throw InputError(fmt::format("placebo cutoff {} leaves an empty post side", c));
  }
  std::vector<int> sorted = cutoffs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<PlaceboRow> rows(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    AnalysisData d = pre;
    d.era.pre_years.clear();
    d.era.post_years.clear();
    for (int y : years) (y >= sorted[i] ? d.era.post_years : d.era.pre_years).insert(y);
    d.era.cutoff_rationale = fmt::format("placebo cutoff {}", sorted[i]);
    const auto r = did(d, covariates);
    rows[i] = {sorted[i], r.interaction, r.fit.n, r.interaction.p_value < 0.05};
  });
  return rows;
}

std::vector<CovidRow> covid_interaction(const AnalysisData& data, const std::set<int>& covid_years,
                                        const std::vector<std::string>& covariates) {
  const auto years = data.years();
  if (covid_years.empty()) throw InputError("COVID test: no COVID years given");
  for (int y : covid_years)
    if (!years.count(y)) throw InputError(fmt::format("COVID year {} is not in the data", y));
  require_did_cells(data);
  auto frame = to_frame(data);
  stats::Frame::Numeric covid(data.records.size());
  for (std::size_t i = 0; i < data.records.size(); ++i) covid[i] = covid_years.count(data.records[i].cycle_year) ? 1.0 : 0.0;
  frame.add_numeric("covid", std::move(covid));

  std::vector<CovidRow> rows(3);
  const char* labels[3] = {"Base DiD", "+ COVID era FE", "+ COVID x SES"};
  parallel_for(3, [&](std::size_t k) {
    auto s = did_spec(covariates);
    if (k >= 1) s.add("covid");
    if (k == 2) s.add_interaction(kSes, "covid");
    const auto fit = stats::fit_logit(frame, s);
    rows[k].specification = labels[k];
    rows[k].did = fit.row(kInteraction);
    rows[k].n = fit.n;
    if (k == 2) rows[k].covid_x_ses = fit.row(std::string(kSes) + ":covid");
  });
  return rows;
}

std::vector<RollingRow> rolling_window(const AnalysisData& data, const std::vector<std::string>& covariates) {
  const auto ys = data.years();
  const std::vector<int> years(ys.begin(), ys.end());
  if (years.size() < 2) throw InputError("rolling window needs at least 2 cycle years");
  std::vector<RollingRow> rows(years.size() - 1);
  parallel_for(rows.size(), [&](std::size_t i) {
    const int a = years[i], b = years[i + 1];
    auto d = data.filter([&](const corpus::EssayRecord& r) { return r.cycle_year == a || r.cycle_year == b; });
    d.era.pre_years = {a};
    d.era.post_years = {b};
    d.era.cutoff_rationale = fmt::format("window {} -> {}", a, b);
    const auto r = did(d, covariates);
    rows[i] = {a, b, r.interaction, r.fit.n};
  });
  return rows;
}

std::vector<DonutSpec> donut_presets() {
  return {{"Full sample", {}},
          {"Drop 2020", {2020}},
          {"Drop 2020-2021", {2020, 2021}},
          {"Drop 2021-2022", {2021, 2022}},
          {"Drop 2020-2022", {2020, 2021, 2022}},
          {"Clean ends: 2020 vs 2024", {2021, 2022, 2023}}};
}

std::vector<DonutRow> donut_hole(const AnalysisData& data, const std::vector<DonutSpec>& specs,
                                 const std::vector<std::string>& covariates) {
  std::vector<DonutRow> rows(specs.size());
  for (const auto& s : specs) {
    bool pre = false, post = false;
    for (int y : data.years()) {
      if (s.exclude.count(y)) continue;
      pre = pre || data.era.pre_years.count(y);
      post = post || data.era.is_post(y);
    }
    if (!pre || !post) throw InputError(fmt::format("donut '{}' empties an era", s.label));
  }
  parallel_for(specs.size(), [&](std::size_t i) {
    const auto& s = specs[i];
    const auto d = s.exclude.empty()
                       ? data
                       : data.filter([&](const corpus::EssayRecord& r) { return !s.exclude.count(r.cycle_year); });
    const auto r = did(d, covariates);
    std::set<int> kept;
    for (int y : d.years())
      if (d.era.contains(y)) kept.insert(y);
    rows[i] = {s.label, r.interaction, r.fit.n, format_years(kept)};
  });
  return rows;
}

std::vector<CovariateSpec> covariate_presets() {
  return {{"No controls", covariates_none()},
          {"First 4 confounders", covariates_first4()},
          {"All confounders (full)", covariates_did()}};
}

CovstabResult covariate_stability(const AnalysisData& data, const std::vector<CovariateSpec>& specs) {
  if (specs.empty()) throw InputError("covariate stability needs at least one specification");
  CovstabResult out;
  out.rows.resize(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) {
    const auto r = did(data, specs[i].covariates);
    out.rows[i] = {specs[i].label, r.interaction, r.fit.pseudo_r2, r.fit.n};
  });
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : out.rows) {
    lo = std::min(lo, r.coef.coef);
    hi = std::max(hi, r.coef.coef);
  }
  out.range = hi - lo;
  return out;
}

}  // namespace essaylens::econo
