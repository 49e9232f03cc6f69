#include "essaylens/simlab.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <Eigen/Dense>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/beta_distribution.hpp>
#include <boost/random/discrete_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "essaylens/error.hpp"
#include "essaylens/mixdetect.hpp"
#include "essaylens/random.hpp"
#include "essaylens/refgen.hpp"
#include "essaylens/textproc.hpp"

namespace essaylens::simlab {

namespace {

bool is_prob(double p) { return p >= 0 && p <= 1; }

void check_prob(double p, const std::string& what) {
  if (!is_prob(p)) throw InputError(fmt::format("scenario: {} = {} is not a probability", what, p));
}

void check_covariates(const CovariateModel& c, const std::string& g) {
  check_prob(c.p_male, g + ".p_male");
  check_prob(c.p_multigen, g + ".p_multigen");
  check_prob(c.p_honors, g + ".p_honors");
  check_prob(c.p_missing_tests, g + ".p_missing_tests");
  if (c.school_probs.size() != 4) throw InputError(fmt::format("scenario: {}.school_probs needs 4 entries", g));
  double s = 0;
  for (double p : c.school_probs) {
    check_prob(p, g + ".school_probs");
    s += p;
  }
  if (std::abs(s - 1) > 1e-9) throw InputError(fmt::format("scenario: {}.school_probs sum to {}, not 1", g, s));
  if (!(c.gpa_sd > 0) || !(c.test_sd > 0)) throw InputError(fmt::format("scenario: {} SDs must be positive", g));
  if (!(c.test_correlation > -1.0 / 3.0) || !(c.test_correlation < 1))
    throw InputError(fmt::format("scenario: {}.test_correlation must lie in (-1/3, 1)", g));
}

void check_alpha(const AlphaModel& a, const std::string& g) {
  check_prob(a.zero_prob, g + ".zero_prob");
  if (!(a.beta_a > 0) || !(a.beta_b > 0)) throw InputError(fmt::format("scenario: {} Beta parameters must be positive", g));
  if (!(a.scale > 0) || a.scale > 1) throw InputError(fmt::format("scenario: {}.scale must be in (0, 1]", g));
}

Eigen::Matrix4d test_cholesky(double rho) {
  Eigen::Matrix4d S = Eigen::Matrix4d::Constant(rho);
  S.diagonal().setOnes();
  return S.llt().matrixL();
}

}  // namespace

void ScenarioSpec::validate() const {
  if (cells.empty()) throw InputError("scenario: no cells");
  era.validate();
  std::set<int> years;
  for (const auto& c : cells) {
    if (!era.contains(c.year)) throw InputError(fmt::format("scenario: year {} is in neither era", c.year));
    if (!years.insert(c.year).second) throw InputError(fmt::format("scenario: year {} listed twice", c.year));
  }
  if (size() == 0) throw InputError("scenario: every cell is empty");
  check_covariates(covariates_higher, "covariates_higher");
  check_covariates(covariates_lower, "covariates_lower");
  check_alpha(alpha_higher, "alpha_higher");
  check_alpha(alpha_lower, "alpha_lower");
  for (const auto* m : {&outcome.year_effects, &outcome.ses_year_effects})
    for (const auto& [y, v] : *m) {
      (void)v;
      if (!years.count(y)) throw InputError(fmt::format("scenario: year effect for {} has no cell", y));
    }
}

std::size_t ScenarioSpec::size() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.n_higher + c.n_lower;
  return n;
}

Simulation simulate(const ScenarioSpec& spec) {
  spec.validate();
  const Eigen::Matrix4d chol_h = test_cholesky(spec.covariates_higher.test_correlation);
  const Eigen::Matrix4d chol_l = test_cholesky(spec.covariates_lower.test_correlation);
  const refgen::OfflineEssayWriter human_writer(refgen::WriterStyle::Human);
  const refgen::OfflineEssayWriter llm_writer(refgen::WriterStyle::Llm);
  const auto mix = refgen::PromptMix::common_app();
  const auto& o = spec.outcome;

  Simulation sim;
  sim.records.reserve(spec.size());
  sim.truth.reserve(spec.size());
  std::uint64_t row = 0;
  for (const auto& cell : spec.cells) {
    const bool post = spec.era.is_post(cell.year);
    for (int g = 0; g < 2; ++g) {
      const bool lower = g == 1;
      const std::size_t n = lower ? cell.n_lower : cell.n_higher;
      const auto& cm = lower ? spec.covariates_lower : spec.covariates_higher;
      const auto& am = lower ? spec.alpha_lower : spec.alpha_higher;
      const auto& chol = lower ? chol_l : chol_h;
      for (std::size_t i = 0; i < n; ++i, ++row) {
        Engine rng = substream(spec.seed, row);
        boost::random::normal_distribution<double> z;
        corpus::EssayRecord r;
        r.id = fmt::format("sim-{}-{:06d}", cell.year, row);
        r.cycle_year = cell.year;
        r.fee_waiver = lower;
        auto& c = r.covariates;
        c.standardized = true;
        c.sex = boost::random::bernoulli_distribution<double>(cm.p_male)(rng) ? corpus::Sex::Male : corpus::Sex::Female;
        c.first_gen = boost::random::bernoulli_distribution<double>(cm.p_multigen)(rng) ? corpus::FirstGen::MultiGen
                                                                                      : corpus::FirstGen::FirstGen;
        c.school_type = static_cast<corpus::SchoolType>(
            boost::random::discrete_distribution<int, double>(cm.school_probs.begin(), cm.school_probs.end())(rng));
        c.honors = boost::random::bernoulli_distribution<double>(cm.p_honors)(rng);
        c.gpa_scaled = cm.gpa_mean + cm.gpa_sd * z(rng);
        Eigen::Vector4d e;
        for (int k = 0; k < 4; ++k) e(k) = z(rng);
        const Eigen::Vector4d tests = (cm.test_mean + cm.test_sd * (chol * e).array()).matrix();
        const bool missing = boost::random::bernoulli_distribution<double>(cm.p_missing_tests)(rng);
        if (!missing) {
          c.sat_rw = tests(0);
          c.sat_math = tests(1);
          c.act_composite = tests(2);
          c.act_math = tests(3);
        }

        double alpha = 0;
        if (post && !boost::random::bernoulli_distribution<double>(am.zero_prob)(rng))
          alpha = am.scale * boost::random::beta_distribution<double>(am.beta_a, am.beta_b)(rng);

        const double L = lower ? 1.0 : 0.0, P = post ? 1.0 : 0.0;
        double eta = o.intercept + o.ses * L + o.post * P + o.ses_post * L * P + o.alpha * alpha + o.ses_alpha * L * alpha;
        eta += o.male * (c.sex == corpus::Sex::Male) + o.multigen * (c.first_gen == corpus::FirstGen::MultiGen);
        eta += o.school_private * (c.school_type == corpus::SchoolType::Private) +
               o.school_public * (c.school_type == corpus::SchoolType::Public) +
               o.school_unknown * (c.school_type == corpus::SchoolType::Unknown);
        // Missing scores contribute at the population mean.
        eta += o.gpa * c.gpa_scaled + o.honors * c.honors;
        if (!missing)
          eta += o.sat_rw * tests(0) + o.sat_math * tests(1) + o.act_composite * tests(2) + o.act_math * tests(3);
        if (auto it = o.year_effects.find(cell.year); it != o.year_effects.end()) eta += it->second;
        if (auto it = o.ses_year_effects.find(cell.year); lower && it != o.ses_year_effects.end()) eta += it->second;
        const double prob = 1 / (1 + std::exp(-eta));
        const bool admit = uniform01(rng) < prob;
        // Admitted positives are split across the three positive decisions.
        if (admit) {
          const double u = uniform01(rng);
          r.decision = u < 0.8 ? corpus::Decision::Admitted
                               : (u < 0.9 ? corpus::Decision::ConditionalAdmit : corpus::Decision::Waitlisted);
        } else {
          r.decision = corpus::Decision::Rejected;
        }

        if (spec.with_text) {
          const auto& q = refgen::sample_question(mix, rng);
          const std::string human = human_writer.write(q, rng);
          if (alpha > 0) {
            const std::string llm = llm_writer.write(q, rng);
            const auto total = std::min(textproc::word_count(human), textproc::word_count(llm));
            r.essay_text = mixdetect::splice_mixture(human, llm, alpha, total);
          } else {
            r.essay_text = human;
          }
        }
        sim.truth.push_back({r.id, alpha, eta, prob});
        sim.records.push_back(std::move(r));
      }
    }
  }
  return sim;
}

std::vector<YearCell> paper_scale_cells() {
  // Yearly applicant totals; the lower-SES share is the post-era share.
  const std::vector<std::pair<int, std::size_t>> totals{{2020, 2648}, {2021, 3335}, {2022, 3856}, {2023, 2995}, {2024, 17654}};
  const double lower_share = 5461.0 / 17654.0;
  std::vector<YearCell> cells;
  for (const auto& [y, n] : totals) {
    const auto lower = static_cast<std::size_t>(std::llround(lower_share * double(n)));
    cells.push_back({y, n - lower, lower});
  }
  return cells;
}

namespace {

ScenarioSpec base_spec() {
  ScenarioSpec s;
  s.cells = paper_scale_cells();
  s.covariates_higher = CovariateModel{};
  s.covariates_lower = CovariateModel{};
  s.covariates_lower.p_multigen = 0.45;
  s.covariates_lower.p_honors = 0.28;
  s.covariates_lower.school_probs = {0.01, 0.08, 0.88, 0.03};
  s.covariates_lower.gpa_mean = -0.25;
  s.covariates_lower.test_mean = -0.35;
  s.alpha_higher = {0.395, 0.8, 2.84, 0.6};
  s.alpha_lower = {0.405, 0.9, 2.26, 0.6};
  auto& o = s.outcome;
  o.intercept = -1.3;
  o.male = -0.574;
  o.multigen = -0.376;
  o.gpa = 0.364;
  o.sat_rw = 0.865;
  o.sat_math = -0.486;
  o.act_composite = -1.339;
  o.act_math = 1.622;
  o.honors = 0.813;
  return s;
}

}  // namespace

std::vector<ScenarioSpec> scenario_presets() {
  std::vector<ScenarioSpec> out;

  auto null = base_spec();
  null.name = "null";
  out.push_back(null);

  auto did = base_spec();
  did.name = "did-shaped";
  did.outcome.ses = -0.559;
  did.outcome.post = 0.136;
  did.outcome.ses_post = -0.170;
  out.push_back(did);

  auto paper = base_spec();
  paper.name = "paper-shaped";
  paper.outcome.ses = -0.625;
  paper.outcome.post = 0.136;
  paper.outcome.alpha = -0.922;
  paper.outcome.ses_alpha = -1.028;
  out.push_back(paper);
  return out;
}

ScenarioSpec preset(const std::string& name) {
  for (auto& s : scenario_presets())
    if (s.name == name) return s;
  throw InputError(fmt::format("unknown scenario preset '{}' (expected null, did-shaped or paper-shaped)", name));
}

void write_truth_csv(const std::string& path, const std::vector<TruthRow>& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  out << "id,true_alpha,linear_predictor,admit_probability\n";
  for (const auto& t : truth)
    out << fmt::format("{},{},{},{}\n", corpus::csv_escape(t.id), t.true_alpha, t.linear_predictor, t.admit_probability);
}

std::vector<TruthRow> read_truth_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read {}", path));
  const auto rows = corpus::parse_csv(in);
  if (rows.empty() || rows[0].size() != 4 || rows[0][0] != "id")
    throw InputError(fmt::format("{}: not a truth file", path));
  std::vector<TruthRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4) throw InputError(fmt::format("{}: row {} has {} fields", path, i, rows[i].size()));
    out.push_back({rows[i][0], std::stod(rows[i][1]), std::stod(rows[i][2]), std::stod(rows[i][3])});
  }
  return out;
}

}  // namespace essaylens::simlab
