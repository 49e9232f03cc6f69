#include "essaylens/stats/tests.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "essaylens/error.hpp"

namespace essaylens::stats {

std::string_view stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

double mean(std::span<const double> x) {
  if (x.empty()) throw InputError("mean of an empty sample");
  double s = 0;
  for (double v : x) s += v;
  return s / double(x.size());
}

double sd(std::span<const double> x) {
  if (x.size() < 2) throw InputError("standard deviation needs at least 2 values");
  const double m = mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / double(x.size() - 1));
}

namespace {

double pooled_sd(std::span<const double> x, std::span<const double> y) {
  const double n1 = double(x.size()), n2 = double(y.size());
  const double s1 = sd(x), s2 = sd(y);
  return std::sqrt(((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / (n1 + n2 - 2));
}

}  // namespace

TestResult two_sample_t(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) throw InputError("t test needs at least 2 values per group");
  const double sp = pooled_sd(x, y);
  if (!(sp > 0)) throw NumericalError("t test: both groups have zero variance");
  const double n1 = double(x.size()), n2 = double(y.size());
  const double diff = mean(x) - mean(y);
  TestResult r;
  r.df = n1 + n2 - 2;
  r.statistic = diff / (sp * std::sqrt(1 / n1 + 1 / n2));
  r.p_value = 2 * boost::math::cdf(boost::math::complement(boost::math::students_t(r.df), std::abs(r.statistic)));
  r.effect_size = diff / sp;
  return r;
}

TestResult chi_square_independence(const Eigen::MatrixXd& table) {
  if (table.rows() < 2 || table.cols() < 2) throw InputError("chi-square test needs at least a 2x2 table");
  if ((table.array() < 0).any()) throw InputError("chi-square test: negative count");
  const Eigen::VectorXd rs = table.rowwise().sum();
  const Eigen::RowVectorXd cs = table.colwise().sum();
  const double total = table.sum();
  for (Eigen::Index i = 0; i < rs.size(); ++i)
    if (!(rs(i) > 0)) throw InputError(fmt::format("chi-square test: row {} has a zero marginal", i));
  for (Eigen::Index j = 0; j < cs.size(); ++j)
    if (!(cs(j) > 0)) throw InputError(fmt::format("chi-square test: column {} has a zero marginal", j));
  const Eigen::MatrixXd expected = rs * cs / total;
  TestResult r;
  r.statistic = ((table - expected).array().square() / expected.array()).sum();
  r.df = double((table.rows() - 1) * (table.cols() - 1));
  r.p_value = boost::math::gamma_q(r.df / 2, r.statistic / 2);
  return r;
}

DescriptiveTable group_descriptives(const std::vector<std::string>& labels, const Eigen::MatrixXd& g1,
                                    const Eigen::MatrixXd& g2, std::string group1, std::string group2) {
  if (g1.rows() == 0 || g2.rows() == 0) throw InputError("group descriptives: empty group");
  if (g1.cols() != Eigen::Index(labels.size()) || g2.cols() != Eigen::Index(labels.size()))
    throw InputError("group descriptives: column count does not match labels");
  DescriptiveTable t;
  t.group1 = std::move(group1);
  t.group2 = std::move(group2);
  t.n1 = std::size_t(g1.rows());
  t.n2 = std::size_t(g2.rows());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Eigen::VectorXd a = g1.col(Eigen::Index(k));
    const Eigen::VectorXd b = g2.col(Eigen::Index(k));
    std::span<const double> sa(a.data(), std::size_t(a.size())), sb(b.data(), std::size_t(b.size()));
    DescriptiveRow r;
    r.label = labels[k];
    r.mean1 = mean(sa);
    r.mean2 = mean(sb);
    r.sd1 = sa.size() > 1 ? sd(sa) : 0.0;
    r.sd2 = sb.size() > 1 ? sd(sb) : 0.0;
    r.diff = r.mean2 - r.mean1;
    r.pct_diff = r.mean1 != 0 ? 100 * r.diff / r.mean1 : std::numeric_limits<double>::quiet_NaN();
    if (sa.size() < 2 || sb.size() < 2) {
      r.t = std::numeric_limits<double>::quiet_NaN();
      r.p_value = std::numeric_limits<double>::quiet_NaN();
    } else if (r.sd1 == 0 && r.sd2 == 0) {
      r.t = r.diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.diff);
      r.p_value = r.diff == 0 ? 1.0 : 0.0;
    } else {
      const auto tt = two_sample_t(sb, sa);
      r.t = tt.statistic;
      r.p_value = tt.p_value;
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace essaylens::stats
