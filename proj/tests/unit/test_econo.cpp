#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "essaylens/econo.hpp"
#include "essaylens/error.hpp"
#include "essaylens/simlab.hpp"

using namespace essaylens;
using namespace essaylens::econo;

namespace {

AnalysisData sim_data(const std::string& preset, double scale, std::uint64_t seed) {
  auto s = simlab::preset(preset);
  for (auto& c : s.cells) {
    c.n_higher = std::size_t(std::llround(double(c.n_higher) * scale));
    c.n_lower = std::size_t(std::llround(double(c.n_lower) * scale));
  }
  s.seed = seed;
  auto sim = simlab::simulate(s);
  AnalysisData d;
  d.records = std::move(sim.records);
  for (const auto& t : sim.truth) d.alpha_hat.push_back(t.true_alpha);
  d.era = s.era;
  return d;
}

double logit(double p) { return std::log(p / (1 - p)); }

stats::Frame linear_mediation_frame(double a, double b, double c, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0, 0.5);
  std::vector<double> t(n), m(n), y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = z(rng);
    t[i] = u(rng);
    m[i] = a * t[i] + 0.3 * x[i] + 0.2 * z(rng);
    y[i] = c * t[i] + b * m[i] + 0.1 * x[i] + 0.2 * z(rng);
  }
  stats::Frame f;
  f.add_numeric("t", t);
  f.add_numeric("m", m);
  f.add_numeric("y", y);
  f.add_numeric("x", x);
  return f;
}

}  // namespace

TEST_SUITE("econo") {
  TEST_CASE("saturated DiD interaction equals the four-cell log odds contrast") {
    const auto d = sim_data("did-shaped", 1.0, 21);
    std::map<std::pair<int, int>, std::pair<double, double>> cell;  // (lower, post) -> (admits, n)
    for (const auto& r : d.records) {
      auto& c = cell[{int(r.fee_waiver), int(d.era.is_post(r.cycle_year))}];
      c.first += corpus::binary_outcome(r);
      c.second += 1;
    }
    auto lg = [&](int l, int p) { return logit(cell[{l, p}].first / cell[{l, p}].second); };
    const double closed = lg(1, 1) - lg(1, 0) - lg(0, 1) + lg(0, 0);
    const auto r = did(d, covariates_none());
    CHECK(std::abs(r.interaction.coef - closed) < 1e-6);
    CHECK(std::abs(r.ses.coef - (lg(1, 0) - lg(0, 0))) < 1e-6);
    CHECK(std::abs(r.post.coef - (lg(0, 1) - lg(0, 0))) < 1e-6);
    CHECK(r.fit.n == d.records.size());
  }

  TEST_CASE("DiD with controls recovers the planted interaction") {
    const auto d = sim_data("did-shaped", 3.0, 22);
    const auto r = did(d, covariates_did());
    CHECK(std::abs(r.interaction.coef - -0.170) < 2.5 * r.interaction.se);
    CHECK(std::abs(r.ses.coef - -0.559) < 2.5 * r.ses.se);
  }

  TEST_CASE("DiD input errors") {
    const auto d = sim_data("null", 0.2, 23);
    CHECK_THROWS_AS(did(d.pre_era(), covariates_none()), InputError);
    CHECK_THROWS_AS(did(d.post_era(), covariates_none()), InputError);
    CHECK_THROWS_AS(covariate_set("most"), InputError);
    auto bad = d;
    bad.alpha_hat.pop_back();
    CHECK_THROWS_AS(to_frame(bad), InputError);
  }

  TEST_CASE("empty donut equals the plain DiD bit for bit") {
    const auto d = sim_data("did-shaped", 0.3, 24);
    const auto base = did(d, covariates_did());
    const auto rows = donut_hole(d, {{"Full sample", {}}}, covariates_did());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].coef.coef == base.interaction.coef);
    CHECK(rows[0].coef.se == base.interaction.se);
    CHECK(rows[0].n == base.fit.n);
    CHECK(rows[0].cycles == "2020-2024");
    CHECK(donut_presets().size() == 6);
    CHECK_THROWS_AS(donut_hole(d, {{"no pre", {2020, 2021, 2022, 2023}}}, covariates_none()), InputError);
  }

  TEST_CASE("robustness battery shapes") {
    const auto d = sim_data("null", 0.5, 25);
    const auto es = event_study(d, 2023, covariates_did());
    CHECK(es.rows.size() == 5);
    for (const auto& r : es.rows) {
      if (r.year == 2023) {
        CHECK(r.reference);
        CHECK(r.coef.coef == 0);
      }
    }
    CHECK(es.joint_terms == 3);
    CHECK(es.joint_pre.df == 3);
    CHECK_THROWS_AS(event_study(d, 2019, covariates_none()), InputError);

    const auto pl = placebo_timing(d, {2021, 2022, 2023}, covariates_did());
    CHECK(pl.size() == 3);
    CHECK_THROWS_AS(placebo_timing(d, {2020}, covariates_none()), InputError);
    CHECK_THROWS_AS(placebo_timing(d, {2024}, covariates_none()), InputError);

    const auto rw = rolling_window(d, covariates_none());
    REQUIRE(rw.size() == 4);
    CHECK(rw[0].from == 2020);
    CHECK(rw[3].to == 2024);

    const auto cv = covid_interaction(d, {2020, 2021}, covariates_did());
    CHECK(!cv.empty());
    CHECK_THROWS_AS(covid_interaction(d, {2019}, covariates_none()), InputError);

    const auto one = covariate_stability(d, {{"only", covariates_none()}});
    CHECK(one.range == 0);
    const auto cs = covariate_stability(d, covariate_presets());
    CHECK(cs.rows.size() == 3);
    CHECK(cs.range >= 0);
    CHECK_THROWS_AS(covariate_stability(d, {}), InputError);
  }

  TEST_CASE("format years") {
    CHECK(format_years({2020, 2023, 2024}) == "2020, 2023-2024");
    CHECK(format_years({2021}) == "2021");
    CHECK(format_years({2020, 2021, 2022, 2024}) == "2020-2022, 2024");
  }

  TEST_CASE("interaction total matches a refit with the other reference group") {
    const auto d = sim_data("paper-shaped", 1.0, 26);
    const auto r = interaction(d, covariates_full());
    CHECK(r.total.estimate == doctest::Approx(r.beta2.coef + r.beta3.coef).epsilon(1e-12));

    auto frame = to_frame(d.post_era());
    const auto& ses = frame.numeric(kSes);
    stats::Frame::Numeric higher(ses.size());
    for (std::size_t i = 0; i < ses.size(); ++i)
      if (ses[i]) higher[i] = 1 - *ses[i];
    frame.add_numeric("higher_ses", higher);
    stats::ModelSpec s;
    s.outcome = kAdmit;
    s.add("higher_ses").add(kAlpha).add_interaction("higher_ses", kAlpha);
    for (const auto& c : covariates_full()) s.add(c);
    const auto refit = stats::fit_logit(frame, with_references(s));
    CHECK(std::abs(refit.b(kAlpha) - r.total.estimate) < 1e-6);
    CHECK(std::abs(refit.row(kAlpha).se - r.total.se) < 1e-6);
    CHECK(std::abs(r.total.estimate - -1.950) < 2.5 * r.total.se);
  }

  TEST_CASE("odds reduction") {
    CHECK(odds_reduction(-0.922, 0.13) == doctest::Approx(1 - std::exp(-0.922 * 0.13)));
    CHECK(odds_reduction(-0.922, 0.13) == doctest::Approx(0.113).epsilon(0.01));
    CHECK(odds_reduction(0, 0.5) == 0);
  }

  TEST_CASE("stratified delta is independent-sample") {
    const auto d = sim_data("paper-shaped", 1.0, 27);
    const auto s = stratified(d, covariates_full());
    const double bh = s.higher.b(kAlpha), bl = s.lower.b(kAlpha);
    CHECK(s.delta == doctest::Approx(bl - bh));
    CHECK(s.delta_se == doctest::Approx(std::hypot(s.higher.row(kAlpha).se, s.lower.row(kAlpha).se)));
  }

  TEST_CASE("linear mediation matches the product of coefficients") {
    const auto f = linear_mediation_frame(0.8, 0.5, 0.3, 4000, 31);
    MediationOptions o;
    o.family = OutcomeFamily::Linear;
    o.n_sims = 500;
    o.seed = 1;
    const auto r = mediate(f, {"y", "t", "m", {"x"}}, o);
    const double product = r.a_path * r.b_path * (o.treat - o.control);
    CHECK(std::abs(r.acme.estimate - product) < 0.1 * std::abs(product));
    CHECK(r.acme.ci_lo < r.acme.estimate);
    CHECK(r.acme.ci_hi > r.acme.estimate);
    CHECK(r.total.estimate == doctest::Approx(r.acme.estimate + r.ade.estimate).epsilon(1e-6));
    CHECK(r.n == 4000);
    CHECK(r.n_sims == 500);
  }

  TEST_CASE("null mediator path and suppression") {
    MediationOptions o;
    o.family = OutcomeFamily::Linear;
    o.n_sims = 400;
    const auto none = mediate(linear_mediation_frame(0.0, 0.5, 0.3, 3000, 32), {"y", "t", "m", {"x"}}, o);
    CHECK(none.acme.ci_lo < 0);
    CHECK(none.acme.ci_hi > 0);
    const auto sup = mediate(linear_mediation_frame(0.8, -0.5, 0.6, 3000, 33), {"y", "t", "m", {"x"}}, o);
    CHECK(sup.acme.estimate < 0);
    CHECK(sup.ade.estimate > 0);
    CHECK(sup.prop_mediated < 0);
    CHECK_THROWS_AS(mediate(linear_mediation_frame(0.8, 0.5, 0.3, 100, 1), {"y", "t", "m", {}}, [] {
                      MediationOptions b;
                      b.n_sims = 1;
                      return b;
                    }()),
                    InputError);
  }

  TEST_CASE("mediation draws are reproducible per seed") {
    const auto f = linear_mediation_frame(0.8, 0.5, 0.3, 500, 34);
    MediationOptions o;
    o.n_sims = 100;
    o.family = OutcomeFamily::Linear;
    o.seed = 9;
    const auto a = mediate(f, {"y", "t", "m", {}}, o);
    const auto b = mediate(f, {"y", "t", "m", {}}, o);
    CHECK(a.acme.estimate == b.acme.estimate);
    CHECK(a.ade.ci_hi == b.ade.ci_hi);
  }

  TEST_CASE("descriptives and usage shares") {
    auto d = sim_data("paper-shaped", 0.3, 28);
    const auto post = d.post_era();
    d.features.assign(d.records.size(), std::nullopt);
    for (std::size_t i = 0; i < d.records.size(); ++i) {
      stylometry::FeatureVector v;
      v.n_words = 300 + double(i % 17);
      v.ttr = 0.5 + 0.01 * double(i % 5);
      d.features[i] = v;
    }
    const auto r = descriptives(d, {0.07, 0.13});
    std::size_t total = 0;
    for (auto c : r.usage.higher) total += c;
    for (auto c : r.usage.lower) total += c;
    CHECK(total == post.records.size());
    CHECK(r.features.rows.size() == stylometry::FeatureVector::kSize);
    CHECK(r.usage_chi2.df == 3);
  }
}
