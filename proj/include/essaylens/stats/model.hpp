#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "essaylens/stats/frame.hpp"

namespace essaylens::stats {

enum class Family { Logit, Ols };

struct FitOptions {
  int max_iter = 100;
  double tol = 1e-8;               ///< absolute deviance change
  double separation_coef = 15.0;   ///< |coef| above this with a blown-up SE is separation;
                                   ///< per SD of x for continuous columns
  double separation_se = 10.0;
  bool require_convergence = true;
};

/// One coefficient with its derived quantities. For logit fits the
/// statistic is z and the odds-ratio fields apply; for OLS it is t.
struct CoefRow {
  std::string name;
  double coef = 0, se = 0, stat = 0, p_value = 1;
  double ci_lo = 0, ci_hi = 0;               ///< coef -/+ 1.96 se
  double odds_ratio = 1, or_lo = 1, or_hi = 1;  ///< exp of the above
};

struct ModelFit {
  Family family = Family::Logit;
  std::vector<std::string> names;
  Eigen::VectorXd coef, se, stat, p_value;
  Eigen::MatrixXd cov;
  double loglik = 0;
  double null_loglik = 0;
  double pseudo_r2 = 0;  ///< McFadden for logit, R^2 for OLS
  std::size_t n = 0;
  double df_resid = 0;
  double rss = 0;       ///< OLS only
  double sigma2 = 0;    ///< OLS only
  bool converged = true;
  int iterations = 0;
  Eigen::VectorXd gradient;  ///< logit score at the estimate
  std::vector<std::size_t> rows;  ///< frame rows used

  bool has(std::string_view name) const;
  std::size_t index(std::string_view name) const;  ///< throws InputError
  CoefRow row(std::size_t k) const;
  CoefRow row(std::string_view name) const { return row(index(name)); }
  double b(std::string_view name) const { return coef(Eigen::Index(index(name))); }
};

/// Wald z interval half-width multiplier used throughout.
inline constexpr double kZ95 = 1.96;

ModelFit fit_logit(const Frame& frame, const ModelSpec& spec, const FitOptions& opts = {});
ModelFit fit_ols(const Frame& frame, const ModelSpec& spec);

/// Same fits on an already built design.
ModelFit fit_logit(const Design& design, const FitOptions& opts = {});
ModelFit fit_ols(const Design& design);

struct TestResult {
  double statistic = 0;
  double df = 0;
  double p_value = 1;
  double effect_size = 0;  ///< Cohen's d for t tests, 0 otherwise
};

/// Joint Wald chi-square over the named coefficients.
TestResult wald_joint(const ModelFit& fit, const std::vector<std::string>& names);

/// Linear combination c'b with SE sqrt(c'Vc).
struct LinearCombination {
  double estimate = 0, se = 0, stat = 0, p_value = 1;
};
LinearCombination linear_combination(const ModelFit& fit, const std::vector<std::pair<std::string, double>>& weights);

/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);

}  // namespace essaylens::stats
