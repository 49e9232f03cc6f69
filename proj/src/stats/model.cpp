#include "essaylens/stats/model.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "essaylens/error.hpp"
#include "essaylens/stats/kernels.hpp"

namespace essaylens::stats {

namespace {

std::string join_names(const std::vector<std::string>& all, const std::vector<Eigen::Index>& idx) {
  std::string s;
  for (auto k : idx) {
    if (!s.empty()) s += ", ";
    s += all[std::size_t(k)];
  }
  return s;
}

void check_rank(const Design& d) {
  if (d.X.cols() == 0) throw InputError("model has no columns");
  if (d.X.rows() <= d.X.cols())
    throw InputError(fmt::format("model has {} complete cases for {} parameters", d.X.rows(), d.X.cols()));
  const auto bad = dependent_columns(d.X);
  if (!bad.empty()) throw NumericalError(fmt::format("design matrix is rank deficient; dependent columns: {}", join_names(d.columns, bad)));
}

void fill_inference(ModelFit& f) {
  const auto p = f.coef.size();
  f.se = f.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  f.stat.resize(p);
  f.p_value.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    f.stat(k) = f.coef(k) / f.se(k);
    if (f.family == Family::Logit) {
      f.p_value(k) = normal_two_sided_p(f.stat(k));
    } else {
      boost::math::students_t t(f.df_resid);
      f.p_value(k) = std::isfinite(f.stat(k)) ? 2 * boost::math::cdf(boost::math::complement(t, std::abs(f.stat(k)))) : 0.0;
    }
  }
}

}  // namespace

double normal_two_sided_p(double z) {
  if (!std::isfinite(z)) return std::isnan(z) ? 1.0 : 0.0;
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

bool ModelFit::has(std::string_view name) const { return std::find(names.begin(), names.end(), name) != names.end(); }

std::size_t ModelFit::index(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InputError(fmt::format("model has no coefficient '{}'", name));
  return std::size_t(it - names.begin());
}

CoefRow ModelFit::row(std::size_t k) const {
  const auto i = Eigen::Index(k);
  CoefRow r;
  r.name = names.at(k);
  r.coef = coef(i);
  r.se = se(i);
  r.stat = stat(i);
  r.p_value = p_value(i);
  r.ci_lo = r.coef - kZ95 * r.se;
  r.ci_hi = r.coef + kZ95 * r.se;
  r.odds_ratio = std::exp(r.coef);
  r.or_lo = std::exp(r.ci_lo);
  r.or_hi = std::exp(r.ci_hi);
  return r;
}

ModelFit fit_logit(const Frame& frame, const ModelSpec& spec, const FitOptions& opts) {
  return fit_logit(build_design(frame, spec), opts);
}

ModelFit fit_ols(const Frame& frame, const ModelSpec& spec) { return fit_ols(build_design(frame, spec)); }

ModelFit fit_logit(const Design& d, const FitOptions& opts) {
  for (Eigen::Index i = 0; i < d.y.size(); ++i)
    if (d.y(i) != 0.0 && d.y(i) != 1.0) throw InputError("logit outcome must be 0/1");
  check_rank(d);
  if (d.y.size() > 0 && (d.y.array() == d.y(0)).all())
    throw NumericalError(fmt::format("logit outcome is constant ({}); the intercept is not identified", d.y(0)));

  const auto r = irls_logit(d.X, d.y, opts.max_iter, opts.tol);
  ModelFit f;
  f.family = Family::Logit;
  f.names = d.columns;
  f.coef = r.beta;
  f.cov = r.cov;
  f.gradient = r.gradient;
  f.loglik = r.loglik;
  f.n = std::size_t(d.X.rows());
  f.df_resid = double(d.X.rows() - d.X.cols());
  f.converged = r.converged && !r.singular;
  f.iterations = r.iterations;
  f.rows = d.rows;
  fill_inference(f);

  // Thresholds apply per SD of x for continuous columns, so a feature on a
  // tiny scale (large coefficient, proportionally large SE) is not mistaken
  // for separation. Indicator columns are judged as they are. The intercept
  // is skipped: it extrapolates to x = 0 and can be large and imprecise when
  // a regressor sits far from zero.
  std::vector<Eigen::Index> separated;
  for (Eigen::Index k = 0; k < f.coef.size(); ++k) {
    if (f.names[std::size_t(k)] == kIntercept) continue;
    const auto col = d.X.col(k).array();
    const bool indicator = ((col == 0.0) || (col == 1.0)).all();
    double scale = 1.0;
    if (!indicator && col.size() > 1) {
      const double sdk = std::sqrt((col - col.mean()).square().sum() / double(col.size() - 1));
      if (sdk > 0) scale = sdk;
    }
    if (std::abs(f.coef(k)) * scale > opts.separation_coef && !(f.se(k) * scale < opts.separation_se))
      separated.push_back(k);
  }
  if (!separated.empty())
    throw NumericalError(fmt::format("perfect or quasi-complete separation on: {}", join_names(f.names, separated)));
  if (r.singular) throw NumericalError("information matrix is singular at the estimate");
  if (!f.converged && opts.require_convergence)
    throw NumericalError(fmt::format("logit did not converge in {} iterations", opts.max_iter));

  const double ybar = d.y.mean();
  const double n = double(f.n);
  f.null_loglik = (ybar <= 0 || ybar >= 1) ? 0.0 : n * (ybar * std::log(ybar) + (1 - ybar) * std::log1p(-ybar));
  f.pseudo_r2 = f.null_loglik < 0 ? 1 - f.loglik / f.null_loglik : 0.0;
  return f;
}

ModelFit fit_ols(const Design& d) {
  check_rank(d);
  const auto r = ols(d.X, d.y);
  ModelFit f;
  f.family = Family::Ols;
  f.names = d.columns;
  f.coef = r.beta;
  f.cov = r.cov;
  f.n = std::size_t(d.X.rows());
  f.df_resid = double(d.X.rows() - d.X.cols());
  f.rss = r.rss;
  f.sigma2 = r.sigma2;
  f.rows = d.rows;
  f.iterations = 1;
  const double n = double(f.n);
  f.loglik = r.rss > 0 ? -n / 2 * (std::log(2 * M_PI * r.rss / n) + 1) : 0.0;
  const double tss = (d.y.array() - d.y.mean()).square().sum();
  f.null_loglik = tss > 0 ? -n / 2 * (std::log(2 * M_PI * tss / n) + 1) : 0.0;
  f.pseudo_r2 = tss > 0 ? 1 - r.rss / tss : 0.0;
  fill_inference(f);
  return f;
}

TestResult wald_joint(const ModelFit& fit, const std::vector<std::string>& names) {
  if (names.empty()) throw InputError("wald test needs at least one coefficient");
  const auto k = Eigen::Index(names.size());
  Eigen::VectorXd b(k);
  Eigen::MatrixXd V(k, k);
  std::vector<Eigen::Index> idx;
  for (const auto& nm : names) idx.push_back(Eigen::Index(fit.index(nm)));
  for (Eigen::Index i = 0; i < k; ++i) {
    b(i) = fit.coef(idx[std::size_t(i)]);
    for (Eigen::Index j = 0; j < k; ++j) V(i, j) = fit.cov(idx[std::size_t(i)], idx[std::size_t(j)]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(V);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0).any())
    throw NumericalError("wald test: covariance of the tested coefficients is singular");
  TestResult t;
  t.statistic = b.dot(ldlt.solve(b));
  t.df = double(k);
  t.p_value = boost::math::gamma_q(t.df / 2, t.statistic / 2);
  return t;
}

LinearCombination linear_combination(const ModelFit& fit, const std::vector<std::pair<std::string, double>>& weights) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(fit.coef.size());
  for (const auto& [nm, w] : weights) c(Eigen::Index(fit.index(nm))) += w;
  LinearCombination lc;
  lc.estimate = c.dot(fit.coef);
  lc.se = std::sqrt(std::max(0.0, c.dot(fit.cov * c)));
  lc.stat = lc.estimate / lc.se;
  if (fit.family == Family::Logit) {
    lc.p_value = normal_two_sided_p(lc.stat);
  } else {
    boost::math::students_t t(fit.df_resid);
    lc.p_value = 2 * boost::math::cdf(boost::math::complement(t, std::abs(lc.stat)));
  }
  return lc;
}

}  // namespace essaylens::stats
