#include <algorithm>
#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "essaylens/econo.hpp"
#include "essaylens/error.hpp"
#include "essaylens/parallel.hpp"
#include "essaylens/random.hpp"

namespace essaylens::econo {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

AnalysisData require_post(const AnalysisData& data) {
  auto post = data.post_era();
  if (post.records.empty()) throw InputError("no post-era records");
  if (post.alpha_hat.empty()) throw InputError("post-era analysis needs alpha estimates");
  return post;
}

// Lower-triangular factor F with F F' = V; eigen route when V is only
// semi-definite.
Eigen::MatrixXd mvn_factor(const Eigen::MatrixXd& V) {
  Eigen::LLT<Eigen::MatrixXd> llt(V);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Effect summarize(std::vector<double> draws) {
  Effect e;
  const double n = double(draws.size());
  double s = 0;
  std::size_t pos = 0, neg = 0;
  for (double d : draws) {
    s += d;
    pos += d > 0;
    neg += d < 0;
  }
  e.estimate = s / n;
  const double ties = n - double(pos + neg);
  e.p_value = std::min(1.0, 2 * std::min(double(pos) + ties / 2, double(neg) + ties / 2) / n);
  std::sort(draws.begin(), draws.end());
  auto q = [&](double p) {
    const double h = (n - 1) * p;
    const auto lo = std::size_t(std::floor(h));
    const auto hi = std::min(draws.size() - 1, lo + 1);
    return draws[lo] + (h - double(lo)) * (draws[hi] - draws[lo]);
  };
  e.ci_lo = q(0.025);
  e.ci_hi = q(0.975);
  return e;
}

}  // namespace

StratifiedResult stratified(const AnalysisData& data, const std::vector<std::string>& covariates) {
  const auto post = require_post(data);
  stats::ModelSpec s;
  s.outcome = kAdmit;
  s.add(kAlpha);
  for (const auto& c : covariates) s.add(c);
  s = with_references(std::move(s));
  StratifiedResult r;
  for (int g = 0; g < 2; ++g) {
    const auto d = post.filter([&](const corpus::EssayRecord& rec) { return rec.fee_waiver == (g == 1); });
    if (d.records.size() < 2 * (covariates.size() + 2))
      throw InputError(fmt::format("stratified: {} SES group too small ({} records)", g ? "lower" : "higher", d.records.size()));
    (g ? r.lower : r.higher) = stats::fit_logit(to_frame(d), s);
  }
  const auto h = r.higher.row(kAlpha), l = r.lower.row(kAlpha);
  r.delta = l.coef - h.coef;
  r.delta_se = std::sqrt(h.se * h.se + l.se * l.se);
  return r;
}

InteractionResult interaction(const AnalysisData& data, const std::vector<std::string>& covariates) {
  const auto post = require_post(data);
  stats::ModelSpec s;
  s.outcome = kAdmit;
  s.add(kSes).add(kAlpha).add_interaction(kSes, kAlpha);
  for (const auto& c : covariates) s.add(c);
  InteractionResult r;
  r.fit = stats::fit_logit(to_frame(post), with_references(std::move(s)));
  const std::string inter = std::string(kSes) + ":" + kAlpha;
  r.ses = r.fit.row(kSes);
  r.beta2 = r.fit.row(kAlpha);
  r.beta3 = r.fit.row(inter);
  r.total = stats::linear_combination(r.fit, {{kAlpha, 1.0}, {inter, 1.0}});
  return r;
}

double odds_reduction(double beta, double alpha_level) { return 1 - std::exp(alpha_level * beta); }

MediationResult mediate(const stats::Frame& frame, const MediationSpec& spec, const MediationOptions& opts) {
  if (opts.n_sims < 2) throw InputError("mediation needs at least 2 simulations");
  if (opts.treat == opts.control) throw InputError("mediation treat and control levels are equal");
  stats::ModelSpec ys;
  ys.outcome = spec.outcome;
  ys.add(spec.treatment).add(spec.mediator);
  for (const auto& c : spec.covariates) ys.add(c);
  ys = with_references(std::move(ys));
  const auto dy = stats::build_design(frame, ys);

  stats::ModelSpec ms;
  ms.outcome = spec.mediator;
  ms.add(spec.treatment);
  for (const auto& c : spec.covariates) ms.add(c);
  ms = with_references(std::move(ms));
  const auto dm = stats::build_design(frame.take(dy.rows), ms);
  if (dm.X.rows() != dy.X.rows()) throw InputError("mediation: mediator and outcome samples differ");

  const auto fm = stats::fit_ols(dm);
  const auto fy = opts.family == OutcomeFamily::Logit ? stats::fit_logit(dy) : stats::fit_ols(dy);
  const auto tm = Eigen::Index(fm.index(spec.treatment));
  const auto ty = Eigen::Index(fy.index(spec.treatment));
  const auto my = Eigen::Index(fy.index(spec.mediator));

  Eigen::MatrixXd xm0 = dm.X, xy0 = dy.X;
  xm0.col(tm).setZero();
  xy0.col(ty).setZero();
  xy0.col(my).setZero();
  const Eigen::MatrixXd lm = mvn_factor(fm.cov), ly = mvn_factor(fy.cov);
  const double sigma = std::sqrt(fm.sigma2);
  const auto n = dm.X.rows();
  const bool logit = opts.family == OutcomeFamily::Logit;

  Engine rng(derive_seed(opts.seed, fnv1a(spec.mediator)));
  boost::random::normal_distribution<double> z;
  std::vector<double> acme(opts.n_sims), ade(opts.n_sims), total(opts.n_sims);
  Eigen::VectorXd zm(fm.coef.size()), zy(fy.coef.size()), eps(n);
  auto response = [&](const Eigen::VectorXd& eta) -> Eigen::ArrayXd {
    if (logit) return stats::sigmoid(eta.array());
    return eta.array();
  };
  for (std::size_t s = 0; s < opts.n_sims; ++s) {
    for (Eigen::Index k = 0; k < zm.size(); ++k) zm(k) = z(rng);
    for (Eigen::Index k = 0; k < zy.size(); ++k) zy(k) = z(rng);
    for (Eigen::Index i = 0; i < n; ++i) eps(i) = sigma * z(rng);
    const Eigen::VectorXd tht_m = fm.coef + lm * zm;
    const Eigen::VectorXd tht_y = fy.coef + ly * zy;
    const Eigen::VectorXd base_m = xm0 * tht_m + eps;
    const Eigen::VectorXd m1 = base_m.array() + opts.treat * tht_m(tm);
    const Eigen::VectorXd m0 = base_m.array() + opts.control * tht_m(tm);
    const Eigen::VectorXd base_y = xy0 * tht_y;
    auto eta = [&](double t, const Eigen::VectorXd& m) -> Eigen::VectorXd {
      return (base_y.array() + t * tht_y(ty) + tht_y(my) * m.array()).matrix();
    };
    const Eigen::ArrayXd p11 = response(eta(opts.treat, m1)), p10 = response(eta(opts.treat, m0));
    const Eigen::ArrayXd p01 = response(eta(opts.control, m1)), p00 = response(eta(opts.control, m0));
    const double d1 = (p11 - p10).mean(), d0 = (p01 - p00).mean();
    const double z1 = (p11 - p01).mean(), z0 = (p10 - p00).mean();
    acme[s] = (d1 + d0) / 2;
    ade[s] = (z1 + z0) / 2;
    total[s] = (p11 - p00).mean();
  }

  MediationResult r;
  r.feature = spec.mediator;
  r.acme = summarize(std::move(acme));
  r.ade = summarize(std::move(ade));
  r.total = summarize(std::move(total));
  const double denom = r.acme.estimate + r.ade.estimate;
  r.prop_mediated = denom != 0 ? r.acme.estimate / denom : 0.0;
  r.n_sims = opts.n_sims;
  r.n = std::size_t(n);
  r.a_path = fm.coef(tm);
  r.b_path = fy.coef(my);
  return r;
}

ChangeInCoefficient change_in_coefficient(const AnalysisData& data, const std::vector<std::string>& covariates) {
  auto with_features = covariates;
  for (auto k : stylometry::feature_keys()) with_features.emplace_back(k);
  const auto base = interaction(data, covariates);
  const auto aug = interaction(data, with_features);
  ChangeInCoefficient c;
  c.beta3_base = base.beta3.coef;
  c.beta3_augmented = aug.beta3.coef;
  c.pct_attenuation = 100 * (std::abs(c.beta3_base) - std::abs(c.beta3_augmented)) / std::abs(c.beta3_base);
  return c;
}

MediationReport mediation(const AnalysisData& data, const std::vector<std::string>& features,
                          const std::vector<std::string>& covariates, const MediationOptions& opts) {
  const auto post = require_post(data);
  if (post.features.empty()) throw InputError("mediation needs stylometric features");
  const auto frame = to_frame(post);
  for (const auto& f : features) stylometry::feature_index(f);
  MediationReport rep;
  rep.features.resize(features.size());
  parallel_for(features.size(), [&](std::size_t i) {
    MediationSpec spec{kAdmit, kAlpha, features[i], covariates};
    rep.features[i] = mediate(frame, spec, opts);
  });
  rep.change = change_in_coefficient(post, covariates);
  return rep;
}

DescriptivesResult descriptives(const AnalysisData& data, const mixdetect::UsageThresholds& thresholds) {
  thresholds.validate();
  const auto post = require_post(data);
  DescriptivesResult r;
  r.thresholds = thresholds;
  std::vector<double> a_h, a_l;
  std::vector<std::array<double, stylometry::FeatureVector::kSize>> f_h, f_l;
  for (std::size_t i = 0; i < post.records.size(); ++i) {
    if (!post.alpha_hat[i]) continue;
    const double a = *post.alpha_hat[i];
    const bool lower = post.records[i].fee_waiver;
    (lower ? a_l : a_h).push_back(a);
    const auto cat = std::size_t(mixdetect::categorize(a, thresholds));
    ++(lower ? r.usage.lower : r.usage.higher)[cat];
    if (a > 0 && !post.features.empty() && post.features[i]) (lower ? f_l : f_h).push_back(post.features[i]->values());
  }
  r.alpha_t = stats::two_sample_t(a_l, a_h);
  r.alpha_mean_higher = stats::mean(a_h);
  r.alpha_sd_higher = stats::sd(a_h);
  r.alpha_mean_lower = stats::mean(a_l);
  r.alpha_sd_lower = stats::sd(a_l);
  Eigen::MatrixXd table(2, 4);
  for (int k = 0; k < 4; ++k) {
    table(0, k) = double(r.usage.higher[std::size_t(k)]);
    table(1, k) = double(r.usage.lower[std::size_t(k)]);
  }
  r.usage_chi2 = stats::chi_square_independence(table);

  std::vector<std::string> labels;
  for (auto l : stylometry::feature_labels()) labels.emplace_back(l);
  auto to_matrix = [](const auto& rows) {
    Eigen::MatrixXd m(Eigen::Index(rows.size()), Eigen::Index(stylometry::FeatureVector::kSize));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < stylometry::FeatureVector::kSize; ++k) m(Eigen::Index(i), Eigen::Index(k)) = rows[i][k];
    return m;
  };
  if (!f_h.empty() && !f_l.empty())
    r.features = stats::group_descriptives(labels, to_matrix(f_h), to_matrix(f_l), "Higher SES", "Lower SES");
  else
    r.features = {"Higher SES", "Lower SES", {}, f_h.size(), f_l.size()};
  return r;
}

}  // namespace essaylens::econo
